// Test-only reference computations, written without the library's solvers.
#pragma once

#include <Eigen/Dense>

#include <functional>

namespace oracle {

using M2 = Eigen::Matrix2d;
using M4 = Eigen::Matrix4d;

M2 rot(double phi);
M2 sq(double gamma);
M4 blocks(const M2& a, const M2& b, const M2& c, const M2& d);
M4 mode1(const M2& m);
M4 mode2(const M2& m);

// Standard forms built from their closed-form blocks.
M4 bs(double theta);
M4 tms(double r);
M4 stms(double r);
M4 qndi(double eta);
M4 sqndi(double eta);
M4 swap();

double chi(const M4& t);  // det of the lower-left block

// Ub R1(phi1) S1(gamma) R1(eps) R2(phi2) Ua
M4 two_interface(const M4& ua, const M4& ub, double gamma, double phi1, double phi2, double eps);

struct GridMin {
  double value = 0;
  double gamma = 1, phi1 = 0, phi2 = 0, eps = 0;
};

// Minimum of metric over the two-interface controls: a dense grid over the
// active parameters (ln gamma in [-3, 3], angles in [0, 2pi)) with at least
// 50^3 points, then compass-search refinement from the best grid points.
// dims = 2: (gamma, phi1); 3: + eps; 4: + phi2.
GridMin grid_minimum(const M4& ua, const M4& ub, int dims, const std::function<double(const M4&)>& metric);

double max_abs(const M4& m);
double transmission_norm(const M4& t);  // max |T21|
double reflection_norm(const M4& t);    // max |T22|

// Sign-change bisection on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi);

}  // namespace oracle
