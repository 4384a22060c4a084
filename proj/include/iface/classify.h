// Invariants and normal forms of two-mode interfaces.
#pragma once

#include "iface/core.h"

#include <optional>
#include <string>
#include <vector>

namespace iface {

struct Invariants {
  IfaceClass cls = IfaceClass::Identity;
  double chi = 0;
  int n_R = 2;
  int n_T = 0;
  std::optional<double> lambda;  // restricted only
  std::optional<double> kappa;   // restricted QNDI only
};

class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, std::vector<IfaceClass> candidates)
      : Error(ErrorKind::Ambiguity, what), candidates_(std::move(candidates)) {}
  const std::vector<IfaceClass>& candidates() const { return candidates_; }

 private:
  std::vector<IfaceClass> candidates_;
};

double transmission_strength(const Mat4& t);
int numerical_rank(const Mat2& b, double cutoff);

Invariants ranks_and_class(const Mat4& t, const Tolerances& tol = {});
Invariants restricted_invariants(const Mat4& t, const Tolerances& tol = {});

enum class FormKind { Standard, PreSqueezing, PostSqueezing };
const char* form_name(FormKind f);

struct NormalFormCert {
  FormKind form = FormKind::Standard;
  OpChain ops_before;  // input side
  OpChain ops_after;   // output side
  StdSpec canonical;
  double residual_lambda = 1;
  double residual_rot = 0;
  double residual = 0;

  // The certified form: chain(ops_after) * T * chain(ops_before).
  Mat4 form_matrix() const;
};

// Matrix of a squeezing form, e.g. U S2(lambda) for Pre.
Mat4 squeezing_form_matrix(FormKind form, const StdSpec& canonical, double lambda, double rot);

NormalFormCert to_squeezing_form(const Mat4& t, FormKind side, const Tolerances& tol = {});
NormalFormCert to_standard_form(const Mat4& t, const Tolerances& tol = {});

// Intermediate of the QNDI construction: T22 = diag(L, 1/L) and
// T21 = [[eta, 0], [kappa eta, 0]].
struct QndiWForm {
  Mat4 w;
  OpChain ops_before, ops_after;
  double lambda = 1, kappa = 0, eta = 0;
};
QndiWForm qndi_w_form(const Mat4& t, const Tolerances& tol = {});
Mat4 qndi_w_pattern(double lambda, double kappa, double eta);

}  // namespace iface
