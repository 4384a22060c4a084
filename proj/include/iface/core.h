// Symplectic algebra for two-mode linear interfaces.
//
// Quadrature order is (q1, p1, q2, p2). Block T^{ij} is rows of mode i,
// columns of mode j, so T21 is the transmission block (mode 1 -> mode 2)
// and T22 the reflection block of mode 2.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace iface {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

enum class ErrorKind {
  Parameter,
  Validation,
  DegenerateSqueeze,
  Ambiguity,
  Inconsistent,
  Infeasible,
  UnknownComponent,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerances {
  double sym = 1e-9;    // symplectic residual, relative to sigma_max^2
  double rank = 1e-8;   // singular value cutoff, relative to sigma_max
  double chi = 1e-10;   // chi == 0 / chi == 1 class boundaries
  double form = 1e-8;   // normal-form reconstruction
};

inline constexpr double kGammaMin = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

// ---- 2x2 building blocks ----
Mat2 rot2(double phi);
Mat2 squeeze2(double gamma);  // diag(gamma, 1/gamma)
Mat2 fourier2();              // rot2(pi/2)
Mat2 shear2(double kappa);    // [[1,0],[kappa,1]]
Mat2 J2();

// Proper-rotation SVD: M = rot2(alpha) * diag(s1, s2) * rot2(beta),
// s1 >= |s2|, s2 carries the sign of det M.
struct Svd2 {
  double alpha = 0, s1 = 0, s2 = 0, beta = 0;
};
Svd2 svd2(const Mat2& m);

// ---- blocks and embeddings ----
Mat2 block(const Mat4& t, int row_mode, int col_mode);
void set_block(Mat4& t, int row_mode, int col_mode, const Mat2& b);
Mat4 from_blocks(const Mat2& t11, const Mat2& t12, const Mat2& t21, const Mat2& t22);
Mat4 local(const Mat2& m1, const Mat2& m2);
Mat4 embed(const Mat2& b, int mode);
Mat4 omega4();

// ---- single-mode operations ----
enum class OpKind { Rotation, Squeeze, Fourier, Shear, General };

struct LocalOp {
  int mode = 1;
  OpKind kind = OpKind::Rotation;
  double param = 0;       // phi, gamma or kappa
  Mat2 general = Mat2::Identity();

  static LocalOp rotation(int mode, double phi);
  static LocalOp squeeze(int mode, double gamma);
  static LocalOp fourier(int mode);
  static LocalOp shear(int mode, double kappa);
  static LocalOp general_op(int mode, const Mat2& m);

  Mat2 matrix() const;
  bool operator==(const LocalOp& o) const;
};

// Ops are listed in matrix order: the product ops[0] * ops[1] * ... ,
// so the last entry acts first.
using OpChain = std::vector<LocalOp>;

Mat4 embed_local(const LocalOp& op);
Mat4 chain_matrix(const OpChain& ops);
OpChain invert_chain(const OpChain& ops);
// Collapses a chain into at most one op per mode (mode 1 first).
// Mode-2 parts stay a Rotation when every mode-2 factor is a rotation.
OpChain fuse_chain(const OpChain& ops);
void append(OpChain& dst, const OpChain& src);

// ---- standard interfaces ----
enum class IfaceClass { Identity, QNDI, TMS, BS, sTMS, sQNDI, SWAP };

const char* class_name(IfaceClass c);
IfaceClass class_from_name(const std::string& s);
bool has_parameter(IfaceClass c);

struct StdSpec {
  IfaceClass cls = IfaceClass::Identity;
  double param = 0;  // theta, r or eta
};

Mat4 standard_interface(const StdSpec& spec);
Mat4 std_bs(double theta);
Mat4 std_tms(double r);
Mat4 std_stms(double r);
Mat4 std_qndi(double eta);
Mat4 std_sqndi(double eta);
Mat4 std_swap();

// ---- algebra ----
Mat4 compose(const std::vector<Mat4>& chain);
Mat4 compose(std::initializer_list<Mat4> chain);
double check_symplectic(const Mat4& t);
double sigma_max(const Mat4& t);
bool is_symplectic(const Mat4& t, const Tolerances& tol = {});
void require_symplectic(const Mat4& t, const Tolerances& tol = {}, const char* what = "interface");
// -Omega T^T Omega, no general inversion.
Mat4 inverse(const Mat4& t, const Tolerances& tol = {});
Mat4 inverse_unchecked(const Mat4& t);
Mat2 inverse2(const Mat2& m);  // for det 1 blocks: adjugate
template <class D>
double max_abs(const Eigen::MatrixBase<D>& m) {
  return m.cwiseAbs().maxCoeff();
}

// ---- sampling ----
// Rotation-squeeze-rotation with |ln gamma| <= log_range.
Mat2 random_local2(std::mt19937_64& rng, double log_range = 3.0);
Mat4 random_local4(std::mt19937_64& rng, double log_range = 3.0);
Mat4 random_standard(std::mt19937_64& rng, IfaceClass cls);
StdSpec random_spec(std::mt19937_64& rng, IfaceClass cls);
Mat4 random_symplectic(std::mt19937_64& rng);

}  // namespace iface
