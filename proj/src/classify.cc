#include "iface/classify.h"

#include <cmath>
#include <sstream>

namespace iface {

double transmission_strength(const Mat4& t) { return block(t, 2, 1).determinant(); }

int numerical_rank(const Mat2& b, double cutoff) {
  const Svd2 s = svd2(b);
  return (std::abs(s.s1) > cutoff ? 1 : 0) + (std::abs(s.s2) > cutoff ? 1 : 0);
}

namespace {

double rank_cutoff(const Mat4& t, const Tolerances& tol) { return tol.rank * std::max(1.0, sigma_max(t)); }

[[noreturn]] void ambiguous(double chi, IfaceClass a, IfaceClass b) {
  std::ostringstream os;
  os.precision(17);
  os << "classification ambiguous at chi=" << chi << ": " << class_name(a) << " or " << class_name(b);
  throw AmbiguityError(os.str(), {a, b});
}

IfaceClass generic_class(double chi) {
  if (chi < 0) return IfaceClass::TMS;
  if (chi < 1) return IfaceClass::BS;
  return IfaceClass::sTMS;
}

}  // namespace

Invariants ranks_and_class(const Mat4& t, const Tolerances& tol) {
  require_symplectic(t, tol);
  Invariants inv;
  inv.chi = transmission_strength(t);
  const double cut = rank_cutoff(t, tol);
  inv.n_R = numerical_rank(block(t, 2, 2), cut);
  inv.n_T = numerical_rank(block(t, 2, 1), cut);
  const double chi = inv.chi;
  if (std::abs(chi) <= tol.chi) {
    if (inv.n_T == 0) inv.cls = IfaceClass::Identity;
    else if (inv.n_T == 1) inv.cls = IfaceClass::QNDI;
    else ambiguous(chi, IfaceClass::QNDI, generic_class(chi));
  } else if (std::abs(chi - 1) <= tol.chi) {
    if (inv.n_R == 0) inv.cls = IfaceClass::SWAP;
    else if (inv.n_R == 1) inv.cls = IfaceClass::sQNDI;
    else ambiguous(chi, IfaceClass::sQNDI, generic_class(chi));
  } else {
    inv.cls = generic_class(chi);
    if (inv.n_T < 2) ambiguous(chi, inv.cls, inv.n_T == 1 ? IfaceClass::QNDI : IfaceClass::Identity);
    if (inv.n_R < 2) ambiguous(chi, inv.cls, inv.n_R == 1 ? IfaceClass::sQNDI : IfaceClass::SWAP);
  }
  return inv;
}

namespace {

bool unit_lambda(const Svd2& s) { return s.s1 - std::abs(s.s2) <= 1e-8 * s.s1; }

// Dominant left singular direction of a rank-1 block.
Eigen::Vector2d column_direction(const Mat2& b) {
  Eigen::JacobiSVD<Mat2> svd(b, Eigen::ComputeFullU);
  return svd.matrixU().col(0);
}

// SVD of T22 for QNDI with alpha pinned to the transmission column when
// the singular values coincide.
Svd2 qndi_reflection_svd(const Mat4& t) {
  Svd2 s = svd2(block(t, 2, 2));
  if (unit_lambda(s)) {
    const Eigen::Vector2d c = column_direction(block(t, 2, 1));
    const double total = s.alpha + s.beta;
    s.alpha = std::atan2(c(1), c(0));
    s.beta = total - s.alpha;
  }
  return s;
}

// Direction of the transmission column in the frame where T22 is diagonal.
Eigen::Vector2d qndi_frame_column(const Mat4& t, const Svd2& s) {
  Eigen::Vector2d w = rot2(-s.alpha) * column_direction(block(t, 2, 1));
  if (w(0) < 0 || (w(0) == 0 && w(1) < 0)) w = -w;
  return w;
}

double wrap_half_turn(double a) {
  // into (-pi/2, pi/2]
  double x = std::remainder(a, kPi);
  if (x <= -kPi / 2) x += kPi;
  return x;
}

double class_param(IfaceClass c, double chi) {
  switch (c) {
    case IfaceClass::BS: return std::asin(std::sqrt(std::clamp(chi, 0.0, 1.0)));
    case IfaceClass::TMS: return std::asinh(std::sqrt(std::max(-chi, 0.0)));
    case IfaceClass::sTMS: return std::acosh(std::sqrt(std::max(chi, 1.0)));
    case IfaceClass::QNDI:
    case IfaceClass::sQNDI: return 1.0;
    default: return 0.0;
  }
}

}  // namespace

Invariants restricted_invariants(const Mat4& t, const Tolerances& tol) {
  Invariants inv = ranks_and_class(t, tol);
  const Mat2 t22 = block(t, 2, 2);
  const Svd2 s = svd2(t22);
  switch (inv.cls) {
    case IfaceClass::SWAP: break;
    case IfaceClass::sQNDI:
    case IfaceClass::Identity: inv.lambda = s.s1; break;
    case IfaceClass::QNDI: {
      if (inv.n_R != 2) throw Error(ErrorKind::Inconsistent, "QNDI with rank-deficient reflection block");
      const Svd2 q = qndi_reflection_svd(t);
      inv.lambda = q.s1;
      if (unit_lambda(q)) {
        inv.kappa = 0.0;
      } else {
        const Eigen::Vector2d w = qndi_frame_column(t, q);
        inv.kappa = w(1) / w(0);
      }
      break;
    }
    default:
      if (inv.n_R != 2) throw Error(ErrorKind::Inconsistent, "rank-deficient reflection block");
      inv.lambda = s.s1 / std::sqrt(std::abs(1.0 - inv.chi));
      break;
  }
  return inv;
}

const char* form_name(FormKind f) {
  switch (f) {
    case FormKind::Standard: return "standard";
    case FormKind::PreSqueezing: return "pre";
    case FormKind::PostSqueezing: return "post";
  }
  return "?";
}

Mat4 squeezing_form_matrix(FormKind form, const StdSpec& canonical, double lambda, double rot) {
  const Mat4 u = standard_interface(canonical);
  if (form == FormKind::Standard) return u;
  const Mat4 sq = embed(squeeze2(lambda), 2);
  switch (canonical.cls) {
    case IfaceClass::SWAP: return u;
    case IfaceClass::Identity: return sq;
    case IfaceClass::QNDI:
      return form == FormKind::PreSqueezing ? Mat4(u * embed(rot2(rot), 2) * sq) : Mat4(sq * embed(rot2(rot), 2) * u);
    default: return form == FormKind::PreSqueezing ? Mat4(u * sq) : Mat4(sq * u);
  }
}

Mat4 NormalFormCert::form_matrix() const {
  return squeezing_form_matrix(form, canonical, residual_lambda, residual_rot);
}

namespace {

struct Fit {
  OpChain before, after;
  double residual = 0;
};

// Given mode-2 rotations (ro, ri) and mode-1 input op l1in that already
// bring the bottom block row of T onto that of m, solve the mode-1 output
// op from the top block row.
Fit complete_fit(const Mat4& t, const Mat4& m, double ro, double ri, const Mat2& l1in) {
  const Mat4 tp = local(Mat2::Identity(), rot2(ro)) * t * local(l1in, rot2(ri));
  const Eigen::Matrix<double, 2, 4> top = tp.topRows<2>();
  const Eigen::Matrix<double, 2, 4> want = m.topRows<2>();
  const Eigen::Matrix<double, 4, 2> top_t = top.transpose();
  const Mat2 sol = top_t.colPivHouseholderQr().solve(Eigen::Matrix<double, 4, 2>(want.transpose()));
  const Mat2 l1out = sol.transpose();
  Fit f;
  f.after = {LocalOp::general_op(1, l1out), LocalOp::rotation(2, ro)};
  f.before = {LocalOp::general_op(1, l1in), LocalOp::rotation(2, ri)};
  f.residual = max_abs(local(l1out, Mat2::Identity()) * tp - m);
  return f;
}

// Mode-1 rotation psi and strength eta with N * R(psi) = eta * v e1^T for a
// rank-1 block N whose column is parallel to v.
std::pair<double, double> align_rank1(const Mat2& n, const Eigen::Vector2d& v) {
  Eigen::JacobiSVD<Mat2> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector2d x = svd.matrixU().col(0);
  const Eigen::Vector2d y = svd.singularValues()(0) * svd.matrixV().col(0);
  double psi = std::atan2(y(1), y(0));
  if (x.dot(v) < 0) psi += kPi;
  return {psi, y.norm() / v.norm()};
}

}  // namespace

Mat4 qndi_w_pattern(double lambda, double kappa, double eta) {
  Mat4 w;
  w << 1 / lambda, 0, 0, 0,
       0, lambda, kappa * eta * lambda * lambda, -eta,
       eta, 0, lambda, 0,
       kappa * eta, 0, 0, 1 / lambda;
  return w;
}

QndiWForm qndi_w_form(const Mat4& t, const Tolerances& tol) {
  const Invariants inv = restricted_invariants(t, tol);
  if (inv.cls != IfaceClass::QNDI) throw Error(ErrorKind::Inconsistent, "W-form requires a QNDI-class interface");
  const Svd2 s = qndi_reflection_svd(t);
  QndiWForm out;
  out.lambda = s.s1;
  out.kappa = *inv.kappa;
  const Mat2 n = rot2(-s.alpha) * block(t, 2, 1);
  auto [psi, eta] = align_rank1(n, Eigen::Vector2d(1.0, out.kappa));
  out.eta = eta;
  out.w = qndi_w_pattern(out.lambda, out.kappa, eta);
  Fit f = complete_fit(t, out.w, -s.alpha, -s.beta, rot2(psi));
  out.ops_before = f.before;
  out.ops_after = f.after;
  return out;
}

NormalFormCert to_squeezing_form(const Mat4& t, FormKind side, const Tolerances& tol) {
  if (side == FormKind::Standard) return to_standard_form(t, tol);
  const Invariants inv = ranks_and_class(t, tol);
  const bool pre = side == FormKind::PreSqueezing;
  NormalFormCert cert;
  cert.form = side;
  cert.canonical = {inv.cls, class_param(inv.cls, inv.chi)};
  const Mat2 t21 = block(t, 2, 1);
  const Mat2 t22 = block(t, 2, 2);
  Fit fit;

  switch (inv.cls) {
    case IfaceClass::SWAP: {
      const Mat4 m = std_swap();
      fit = complete_fit(t, m, 0.0, 0.0, inverse2(t21));
      break;
    }
    case IfaceClass::Identity: {
      const Svd2 s = svd2(t22);
      cert.residual_lambda = s.s1;
      const Mat4 m = cert.form_matrix();
      fit = complete_fit(t, m, -s.alpha, -s.beta, Mat2::Identity());
      break;
    }
    case IfaceClass::sQNDI: {
      const Svd2 s = svd2(t22);
      cert.residual_lambda = s.s1;
      const Mat4 m = cert.form_matrix();
      const Mat2 rt21 = rot2(-s.alpha) * t21;
      const Mat2 want = pre ? Mat2::Identity() : squeeze2(s.s1);
      fit = complete_fit(t, m, -s.alpha, -s.beta, rt21.inverse() * want);
      break;
    }
    case IfaceClass::QNDI: {
      const Svd2 s = qndi_reflection_svd(t);
      const double lam = s.s1;
      const Eigen::Vector2d w = qndi_frame_column(t, s);
      cert.residual_lambda = lam;
      double ro, ri;
      Eigen::Vector2d v;
      if (pre) {
        cert.residual_rot = wrap_half_turn(std::atan2(-w(1), w(0)));
        ro = cert.residual_rot - s.alpha;
        ri = -s.beta;
        v = Eigen::Vector2d(1.0, 0.0);
      } else {
        cert.residual_rot = wrap_half_turn(std::atan2(w(1) * lam * lam, w(0)));
        ro = -s.alpha;
        ri = cert.residual_rot - s.beta;
        v = squeeze2(lam) * rot2(cert.residual_rot) * Eigen::Vector2d(1.0, 0.0);
      }
      auto [psi, eta] = align_rank1(rot2(ro) * t21, v);
      cert.canonical.param = eta;
      const Mat4 m = cert.form_matrix();
      fit = complete_fit(t, m, ro, ri, rot2(psi));
      break;
    }
    default: {
      const Svd2 s = svd2(t22);
      const double lam = s.s1 / std::sqrt(std::abs(1.0 - inv.chi));
      cert.residual_lambda = lam;
      const Mat4 u = standard_interface(cert.canonical);
      const Mat4 m = cert.form_matrix();
      const Mat2 rt21 = rot2(-s.alpha) * t21;
      const Mat2 want = pre ? block(u, 2, 1) : Mat2(squeeze2(lam) * block(u, 2, 1));
      fit = complete_fit(t, m, -s.alpha, -s.beta, rt21.inverse() * want);
      break;
    }
  }
  cert.ops_before = fit.before;
  cert.ops_after = fit.after;
  cert.residual = fit.residual;
  return cert;
}

NormalFormCert to_standard_form(const Mat4& t, const Tolerances& tol) {
  NormalFormCert cert = to_squeezing_form(t, FormKind::PreSqueezing, tol);
  if (cert.canonical.cls != IfaceClass::SWAP) {
    cert.ops_before.push_back(LocalOp::squeeze(2, 1.0 / cert.residual_lambda));
    if (cert.canonical.cls == IfaceClass::QNDI) cert.ops_before.push_back(LocalOp::rotation(2, -cert.residual_rot));
  }
  cert.form = FormKind::Standard;
  cert.residual_lambda = 1;
  cert.residual_rot = 0;
  cert.residual = max_abs(chain_matrix(cert.ops_after) * t * chain_matrix(cert.ops_before) - cert.form_matrix());
  return cert;
}

}  // namespace iface
