// Cascade plans and unrestricted synthesis from fixed components.
#pragma once

#include "iface/classify.h"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iface {

struct Component {
  std::string id;
  Mat4 matrix;
  Invariants inv;
};

Component make_component(const std::string& id, const Mat4& m, const Tolerances& tol = {});

using Library = std::map<std::string, Mat4>;

struct PlanStep {
  bool is_component = false;
  std::string component;
  OpChain ops;

  static PlanStep of(const Component& c) { return {true, c.id, {}}; }
  static PlanStep of(OpChain ops) { return {false, {}, std::move(ops)}; }
};

// Steps are in matrix order: the leftmost step acts last.
struct Cascade {
  std::vector<PlanStep> steps;
  Mat4 matrix = Mat4::Identity();

  static Cascade ops(const OpChain& ops);
  static Cascade of(const Component& c);
  int component_count() const;
};

// Concatenation in matrix order; adjacent op chains are fused.
Cascade operator*(const Cascade& left, const Cascade& right);

struct Target {
  IfaceClass cls = IfaceClass::BS;
  double chi = 0;
  bool restricted = false;
  std::optional<double> lambda;
  std::optional<double> kappa;
  std::optional<Mat4> matrix;  // exact targets only
};

struct SynthPlan {
  std::vector<PlanStep> steps;
  Target target;
  Mat4 achieved = Mat4::Identity();
  double residual = 0;
  double conditioning = 0;  // max |ln|gamma|| over all ops
  bool conditioning_warning = false;
  nlohmann::json meta = nlohmann::json::object();

  int component_count() const;
};

inline constexpr double kConditioningLimit = 20.0;

Mat4 evaluate_steps(const std::vector<PlanStep>& steps, const Library& lib);
double op_conditioning(const LocalOp& op);
double steps_conditioning(const std::vector<PlanStep>& steps);
// Fills achieved, residual and conditioning from the steps.
SynthPlan finalize_plan(Cascade c, const Target& target, const Library& lib, nlohmann::json meta = {},
                        const Tolerances& tol = {});
Library library_of(std::initializer_list<const Component*> comps);
double invariant_distance(const Mat4& achieved, const Target& target, const Tolerances& tol = {});

// ---- two-interface interference ----

struct InterferenceSolution {
  std::string combination;  // e.g. "BS+TMS", in reduced classes
  double gamma = 1, phi1 = 0, phi2 = 0, eps = 0;
  double x_f = 0, z = 0;
  double gamma_alt = 0;  // other root of the gamma quadratic, 0 if none
  bool complemented_a = false, complemented_b = false;
  bool sqndi_b = false;     // B reduced through R1(pi/2) R2(3pi/2) on its input
  bool special = false;     // special-case construction (rank-deficient targets)
  bool degenerate = false;  // Z = 0 seam for QNDI combinations

  // The mode-1 / mode-2 control between the standard forms of A and B.
  OpChain local_ops() const;
};

struct InterferenceOptions {
  double special_phi1 = 0.6;
  bool squeeze_only = false;  // phi in {0, pi}, no rotation regime
  int root = 0;               // squeeze_only: 0 or 1 selects among the roots
};

// Solves the in-between control for Ubar_B * L * Ubar_A. Classes may be any
// non-trivial class; target_cls disambiguates chi = 0 / chi = 1 targets.
InterferenceSolution solve_interference(IfaceClass cls_a, IfaceClass cls_b, double param_a, double param_b,
                                        double chi_tgt, IfaceClass target_cls, const InterferenceOptions& opt = {},
                                        const Tolerances& tol = {});

// All squeeze-only solutions (phi in {0, pi}, eps = phi2 = 0).
std::vector<InterferenceSolution> squeeze_only_solutions(IfaceClass cls_a, IfaceClass cls_b, double param_a,
                                                         double param_b, double chi_tgt);

IfaceClass class_for_chi(double chi, IfaceClass hint, const Tolerances& tol = {});
// Class of SWAP * T for T of class c.
IfaceClass complement_class(IfaceClass c);

// [B] * cert_b.before * L * cert_a.after * [A]
Cascade interference_cascade(const Component& a, const NormalFormCert& cert_a, const Component& b,
                             const NormalFormCert& cert_b, const InterferenceSolution& sol);

SynthPlan two_interface_synth(const Component& a, const Component& b, IfaceClass target_cls, double chi_tgt,
                              const InterferenceOptions& opt = {}, const Tolerances& tol = {});

// after * Ubar * before = Ubar^{-1}
struct InverseOps {
  OpChain before, after;
};
InverseOps inverse_via_locals(const StdSpec& spec);

SynthPlan identity_synth3(const Component& a, const Component& b, const std::optional<Component>& c,
                          const Tolerances& tol = {});
SynthPlan swap_synth3(const Component& a, const Component& b, const std::optional<Component>& c,
                      const Tolerances& tol = {});

// Local ops converting one interface into another with the same invariants:
// after * from * before == to.
struct Conversion {
  OpChain before, after;
  double residual = 0;
};
Conversion local_conversion(const Mat4& from, const Mat4& to, bool restricted, const Tolerances& tol = {});

}  // namespace iface
