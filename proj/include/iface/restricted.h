// Synthesis when mode 2 admits rotations only.
#pragma once

#include "iface/synth.h"

#include <optional>
#include <string>
#include <vector>

namespace iface {

// Number of mode-2 ops that are not rotations (squeeze, shear, general).
int mode2_violations(const std::vector<PlanStep>& steps);

// Moving a mode-2 rotation through a chi-class standard interface:
//   R2(u) U = R1(outer) U R1(m1) R2(m2)        (transfer_left)
//   U R2(v) = R1(m1) R2(m2) U R1(outer)        (transfer_right)
struct RotationTransfer {
  double outer = 0, m1 = 0, m2 = 0;
};
RotationTransfer transfer_left(IfaceClass cls, double u);
RotationTransfer transfer_right(IfaceClass cls, double v);

// ---- two-interface module ----

struct ModuleResult {
  Cascade cascade;
  NormalFormCert cert;  // of cascade.matrix in the requested form
  InterferenceSolution sol;
};

// A in pre-squeezing form, B in post-squeezing form, solved for chi_ab.
ModuleResult two_interface_module_cascade(const Component& a, const Component& b, double chi_ab,
                                          IfaceClass target_cls, FormKind out_form,
                                          const InterferenceOptions& opt = {}, const Tolerances& tol = {});
SynthPlan two_interface_module(const Component& a, const Component& b, double chi_ab, FormKind out_form,
                               std::optional<IfaceClass> target_cls = std::nullopt, const Tolerances& tol = {});

SynthPlan swap_restricted(const Component& a, const Component& b, const std::optional<Component>& c,
                          const Tolerances& tol = {});

// ---- irreducible squeezing control ----

struct GammaSolution {
  double Gamma = 0;
  int X = 1;  // sign(1 - chi_total)
  double lambda_a = 1;
  double gamma = 1;
};

double lambda_a_formula(double Gamma, int X = 1);
// True for BS+BS, TMS+TMS, TMS+sTMS and sTMS+sTMS intermediate pairs.
bool unbounded_pair(IfaceClass ab, IfaceClass cd);
double gamma_function(IfaceClass ab, IfaceClass cd, double chi_ab, double chi_cd, double gamma);
// Mode-1 squeeze realizing lambda_a >= 1 for an unbounded pair.
GammaSolution gamma_for_lambda_a(double chi_ab, double chi_cd, double lambda_a);
// Strength split: chi_ab by the admissibility criterion, chi_cd from the composition law.
std::pair<double, double> split_chi(double chi_tgt);
bool chi_ab_admissible(double chi_ab, double chi_tgt);

struct ChiLambdaOptions {
  bool allow_shortcut = true;
};

SynthPlan chi_lambda_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                            double chi_tgt, double lambda_tgt, const ChiLambdaOptions& opt = {},
                            const Tolerances& tol = {});
SynthPlan sqnd_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                      double lambda_tgt, const Tolerances& tol = {});
SynthPlan qnd_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                     double lambda_tgt, double kappa_tgt, const Tolerances& tol = {});

// ---- remote squeezing ----

// Irreducible squeezing factor of S2(lx) U_y S1(+-g) U_x S2(ly) divided by
// lx*ly, for squeeze-only controls reaching chi_int; one branch of {l, 1/l}.
// Empty when chi_int is not reachable without rotations.
std::optional<double> squeeze_only_lambda(double chi_x, double chi_y, double chi_int);

enum class RemoteScheme { Auto, Four, Five, Six };
const char* scheme_name(RemoteScheme s);
RemoteScheme scheme_from_name(const std::string& s);

SynthPlan remote_squeeze(const std::vector<Component>& comps, double lambda_tgt,
                         RemoteScheme scheme = RemoteScheme::Auto, const Tolerances& tol = {});

}  // namespace iface
