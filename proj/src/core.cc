#include "iface/core.h"

#include <cmath>
#include <limits>
#include <sstream>

namespace iface {

Mat2 rot2(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

Mat2 squeeze2(double gamma) {
  if (!(std::abs(gamma) >= kGammaMin) || !std::isfinite(gamma))
    throw Error(ErrorKind::DegenerateSqueeze, "squeeze parameter too close to zero");
  Mat2 m;
  m << gamma, 0, 0, 1.0 / gamma;
  return m;
}

Mat2 fourier2() {
  Mat2 m;
  m << 0, -1, 1, 0;
  return m;
}

Mat2 shear2(double kappa) {
  Mat2 m;
  m << 1, 0, kappa, 1;
  return m;
}

Mat2 J2() {
  Mat2 m;
  m << 0, 1, -1, 0;
  return m;
}

Svd2 svd2(const Mat2& m) {
  const double e = 0.5 * (m(0, 0) + m(1, 1));
  const double f = 0.5 * (m(0, 0) - m(1, 1));
  const double g = 0.5 * (m(1, 0) + m(0, 1));
  const double h = 0.5 * (m(1, 0) - m(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  Svd2 out;
  out.s1 = q + r;
  out.s2 = q - r;
  out.alpha = 0.5 * (a2 + a1);
  out.beta = 0.5 * (a2 - a1);
  return out;
}

Mat2 block(const Mat4& t, int row_mode, int col_mode) {
  return t.block<2, 2>(2 * (row_mode - 1), 2 * (col_mode - 1));
}

void set_block(Mat4& t, int row_mode, int col_mode, const Mat2& b) {
  t.block<2, 2>(2 * (row_mode - 1), 2 * (col_mode - 1)) = b;
}

Mat4 from_blocks(const Mat2& t11, const Mat2& t12, const Mat2& t21, const Mat2& t22) {
  Mat4 t;
  set_block(t, 1, 1, t11);
  set_block(t, 1, 2, t12);
  set_block(t, 2, 1, t21);
  set_block(t, 2, 2, t22);
  return t;
}

Mat4 local(const Mat2& m1, const Mat2& m2) {
  return from_blocks(m1, Mat2::Zero(), Mat2::Zero(), m2);
}

Mat4 embed(const Mat2& b, int mode) {
  if (mode == 1) return local(b, Mat2::Identity());
  if (mode == 2) return local(Mat2::Identity(), b);
  throw Error(ErrorKind::Parameter, "mode must be 1 or 2");
}

Mat4 omega4() { return local(J2(), J2()); }

LocalOp LocalOp::rotation(int mode, double phi) { return {mode, OpKind::Rotation, phi, Mat2::Identity()}; }
LocalOp LocalOp::squeeze(int mode, double gamma) { return {mode, OpKind::Squeeze, gamma, Mat2::Identity()}; }
LocalOp LocalOp::fourier(int mode) { return {mode, OpKind::Fourier, 0, Mat2::Identity()}; }
LocalOp LocalOp::shear(int mode, double kappa) { return {mode, OpKind::Shear, kappa, Mat2::Identity()}; }
LocalOp LocalOp::general_op(int mode, const Mat2& m) { return {mode, OpKind::General, 0, m}; }

Mat2 LocalOp::matrix() const {
  switch (kind) {
    case OpKind::Rotation: return rot2(param);
    case OpKind::Squeeze: return squeeze2(param);
    case OpKind::Fourier: return fourier2();
    case OpKind::Shear: return shear2(param);
    case OpKind::General: return general;
  }
  return Mat2::Identity();
}

bool LocalOp::operator==(const LocalOp& o) const {
  return mode == o.mode && kind == o.kind && param == o.param && general == o.general;
}

Mat4 embed_local(const LocalOp& op) {
  if (op.mode != 1 && op.mode != 2) throw Error(ErrorKind::Parameter, "mode must be 1 or 2");
  const Mat2 m = op.matrix();
  if (op.kind == OpKind::General) {
    if (!m.allFinite()) throw Error(ErrorKind::Validation, "non-finite general block");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (std::abs(m.determinant() - 1.0) > 1e-9 * scale * scale)
      throw Error(ErrorKind::Validation, "general block is not symplectic (det != 1)");
  }
  return embed(m, op.mode);
}

Mat4 chain_matrix(const OpChain& ops) {
  Mat2 m1 = Mat2::Identity(), m2 = Mat2::Identity();
  for (const auto& op : ops) {
    embed_local(op);  // validation
    if (op.mode == 1) m1 = m1 * op.matrix();
    else m2 = m2 * op.matrix();
  }
  return local(m1, m2);
}

OpChain invert_chain(const OpChain& ops) {
  OpChain out;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    LocalOp op = *it;
    switch (op.kind) {
      case OpKind::Rotation: op.param = -op.param; break;
      case OpKind::Squeeze: op.param = 1.0 / op.param; break;
      case OpKind::Fourier: op = LocalOp::rotation(op.mode, -kPi / 2); break;
      case OpKind::Shear: op.param = -op.param; break;
      case OpKind::General: op.general = inverse2(op.general); break;
    }
    out.push_back(op);
  }
  return out;
}

namespace {

double wrap_angle(double a) { return std::remainder(a, 2 * kPi); }

// rotation * squeeze * rotation form of a single-mode symplectic matrix.
void push_decomposed(OpChain& out, int mode, const Mat2& m) {
  const Svd2 s = svd2(m);
  if (std::abs(s.s1 * s.s2 - 1) > 1e-9) {
    out.push_back(LocalOp::general_op(mode, m));
    return;
  }
  if (std::abs(s.s1 - 1) <= 4 * std::numeric_limits<double>::epsilon()) {
    const double a = wrap_angle(s.alpha + s.beta);
    if (a != 0) out.push_back(LocalOp::rotation(mode, a));
    return;
  }
  if (wrap_angle(s.alpha) != 0) out.push_back(LocalOp::rotation(mode, wrap_angle(s.alpha)));
  out.push_back(LocalOp::squeeze(mode, s.s1));
  if (wrap_angle(s.beta) != 0) out.push_back(LocalOp::rotation(mode, wrap_angle(s.beta)));
}

}  // namespace

OpChain fuse_chain(const OpChain& ops) {
  Mat2 m1 = Mat2::Identity(), m2 = Mat2::Identity();
  bool any1 = false, any2 = false, rot2_only = true;
  double angle2 = 0;
  for (const auto& op : ops) {
    if (op.mode == 1) {
      m1 = m1 * op.matrix();
      any1 = true;
    } else {
      m2 = m2 * op.matrix();
      any2 = true;
      if (op.kind == OpKind::Rotation) angle2 += op.param;
      else if (op.kind == OpKind::Fourier) angle2 += kPi / 2;
      else rot2_only = false;
    }
  }
  OpChain out;
  if (any1) push_decomposed(out, 1, m1);
  if (any2) {
    if (rot2_only) {
      if (wrap_angle(angle2) != 0) out.push_back(LocalOp::rotation(2, wrap_angle(angle2)));
    } else {
      push_decomposed(out, 2, m2);
    }
  }
  return out;
}

void append(OpChain& dst, const OpChain& src) { dst.insert(dst.end(), src.begin(), src.end()); }

const char* class_name(IfaceClass c) {
  switch (c) {
    case IfaceClass::Identity: return "Identity";
    case IfaceClass::QNDI: return "QNDI";
    case IfaceClass::TMS: return "TMS";
    case IfaceClass::BS: return "BS";
    case IfaceClass::sTMS: return "sTMS";
    case IfaceClass::sQNDI: return "sQNDI";
    case IfaceClass::SWAP: return "SWAP";
  }
  return "?";
}

IfaceClass class_from_name(const std::string& s) {
  for (auto c : {IfaceClass::Identity, IfaceClass::QNDI, IfaceClass::TMS, IfaceClass::BS, IfaceClass::sTMS,
                 IfaceClass::sQNDI, IfaceClass::SWAP})
    if (s == class_name(c)) return c;
  throw Error(ErrorKind::Parameter, "unknown interface class '" + s + "'");
}

bool has_parameter(IfaceClass c) { return c != IfaceClass::Identity && c != IfaceClass::SWAP; }

namespace {
const Mat2 kI = Mat2::Identity();
Mat2 pauli_z() { return Mat2(Eigen::Vector2d(1, -1).asDiagonal()); }
}  // namespace

Mat4 std_bs(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return from_blocks(c * kI, -s * kI, s * kI, c * kI);
}

Mat4 std_tms(double r) {
  const double c = std::cosh(r), s = std::sinh(r);
  return from_blocks(c * kI, s * pauli_z(), s * pauli_z(), c * kI);
}

Mat4 std_stms(double r) {
  const double c = std::cosh(r), s = std::sinh(r);
  return from_blocks(s * pauli_z(), c * kI, c * kI, s * pauli_z());
}

// exp(-i eta q1 p2): q2 -> q2 + eta q1, p1 -> p1 - eta p2.
Mat4 std_qndi(double eta) {
  Mat2 t12 = Mat2::Zero(), t21 = Mat2::Zero();
  t12(1, 1) = -eta;
  t21(0, 0) = eta;
  return from_blocks(kI, t12, t21, kI);
}

// SWAP after QND: std_qndi(eta) * std_swap().
Mat4 std_sqndi(double eta) {
  Mat2 t11 = Mat2::Zero(), t22 = Mat2::Zero();
  t11(1, 1) = -eta;
  t22(0, 0) = eta;
  return from_blocks(t11, kI, kI, t22);
}

Mat4 std_swap() { return from_blocks(Mat2::Zero(), kI, kI, Mat2::Zero()); }

Mat4 standard_interface(const StdSpec& spec) {
  const double p = spec.param;
  if (!std::isfinite(p)) throw Error(ErrorKind::Parameter, "non-finite interface parameter");
  switch (spec.cls) {
    case IfaceClass::Identity: return Mat4::Identity();
    case IfaceClass::SWAP: return std_swap();
    case IfaceClass::BS:
      if (!(std::abs(p) < kPi / 2)) throw Error(ErrorKind::Parameter, "BS angle must lie in (-pi/2, pi/2)");
      return std_bs(p);
    case IfaceClass::TMS: return std_tms(p);
    case IfaceClass::sTMS: return std_stms(p);
    case IfaceClass::QNDI:
      if (p == 0) throw Error(ErrorKind::Parameter, "QND strength must be nonzero");
      return std_qndi(p);
    case IfaceClass::sQNDI:
      if (p == 0) throw Error(ErrorKind::Parameter, "QND strength must be nonzero");
      return std_sqndi(p);
  }
  throw Error(ErrorKind::Parameter, "bad class");
}

Mat4 compose(const std::vector<Mat4>& chain) {
  if (chain.empty()) throw Error(ErrorKind::Parameter, "compose needs a nonempty chain");
  Mat4 out = chain.front();
  for (size_t i = 1; i < chain.size(); ++i) out = out * chain[i];
  return out;
}

Mat4 compose(std::initializer_list<Mat4> chain) { return compose(std::vector<Mat4>(chain)); }

double check_symplectic(const Mat4& t) {
  if (!t.allFinite()) return std::numeric_limits<double>::infinity();
  const Mat4 w = omega4();
  return (t * w * t.transpose() - w).cwiseAbs().maxCoeff();
}

double sigma_max(const Mat4& t) {
  Eigen::JacobiSVD<Mat4> svd(t);
  return svd.singularValues()(0);
}

bool is_symplectic(const Mat4& t, const Tolerances& tol) {
  const double res = check_symplectic(t);
  if (!std::isfinite(res)) return false;
  const double s = std::max(1.0, sigma_max(t));
  return res <= tol.sym * s * s;
}

void require_symplectic(const Mat4& t, const Tolerances& tol, const char* what) {
  if (!is_symplectic(t, tol)) {
    std::ostringstream os;
    os << what << " is not symplectic (residual " << check_symplectic(t) << ")";
    throw Error(ErrorKind::Validation, os.str());
  }
}

Mat4 inverse_unchecked(const Mat4& t) {
  const Mat4 w = omega4();
  return -w * t.transpose() * w;
}

Mat4 inverse(const Mat4& t, const Tolerances& tol) {
  require_symplectic(t, tol);
  return inverse_unchecked(t);
}

Mat2 inverse2(const Mat2& m) {
  Mat2 a;
  a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return a / m.determinant();
}


Mat2 random_local2(std::mt19937_64& rng, double log_range) {
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::uniform_real_distribution<double> lg(-log_range, log_range);
  return rot2(ang(rng)) * squeeze2(std::exp(lg(rng))) * rot2(ang(rng));
}

Mat4 random_local4(std::mt19937_64& rng, double log_range) {
  Mat2 a = random_local2(rng, log_range);
  Mat2 b = random_local2(rng, log_range);
  return local(a, b);
}

StdSpec random_spec(std::mt19937_64& rng, IfaceClass cls) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StdSpec s{cls, 0};
  switch (cls) {
    case IfaceClass::BS: s.param = (0.05 + 0.9 * u(rng)) * (kPi / 2) * (u(rng) < 0.5 ? -1 : 1); break;
    case IfaceClass::TMS:
    case IfaceClass::sTMS: s.param = (0.05 + 1.45 * u(rng)) * (u(rng) < 0.5 ? -1 : 1); break;
    case IfaceClass::QNDI:
    case IfaceClass::sQNDI: s.param = (0.1 + 2.9 * u(rng)) * (u(rng) < 0.5 ? -1 : 1); break;
    default: break;
  }
  return s;
}

Mat4 random_standard(std::mt19937_64& rng, IfaceClass cls) { return standard_interface(random_spec(rng, cls)); }

Mat4 random_symplectic(std::mt19937_64& rng) {
  static const IfaceClass classes[] = {IfaceClass::Identity, IfaceClass::QNDI, IfaceClass::TMS, IfaceClass::BS,
                                       IfaceClass::sTMS,     IfaceClass::sQNDI, IfaceClass::SWAP};
  std::uniform_int_distribution<int> pick(0, 6);
  const IfaceClass c = classes[pick(rng)];
  return random_local4(rng) * random_standard(rng, c) * random_local4(rng);
}

}  // namespace iface
