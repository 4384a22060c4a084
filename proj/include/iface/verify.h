// Independent checks: plan simulation, local equivalence, invariance fuzzing
// and two-interface feasibility.
#pragma once

#include "iface/synth.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iface {

struct Simulation {
  Mat4 matrix = Mat4::Identity();
  // intermediates[k]: product of steps[n-1-k .. n-1], i.e. the interface
  // after the first k+1 steps in time order.
  std::vector<Mat4> intermediates;
};

Simulation simulate(const std::vector<PlanStep>& steps, const Library& lib, const Tolerances& tol = {});

struct EquivalenceWitness {
  OpChain before, after;  // after * T * before == T'
  double residual = 0;    // relative to max(1, max|T'|)
};

struct EquivalenceResult {
  bool equivalent = false;
  std::string reason;  // why not, when not equivalent
  std::optional<EquivalenceWitness> witness;
};

EquivalenceResult equivalent_up_to_local(const Mat4& t, const Mat4& t2, bool restricted, bool build_witness = true,
                                         const Tolerances& tol = {});

struct Dressing {
  OpChain after, before;
};

// phi ~ U[0, 2pi), ln gamma ~ U[-3, 3]; mode 2 gets rotations only when restricted.
Dressing random_dressing(std::mt19937_64& rng, bool restricted);

struct FuzzReport {
  int n = 0;
  bool restricted = false;
  IfaceClass cls = IfaceClass::Identity;
  bool class_stable = true;
  double chi = 0;
  std::optional<double> lambda, kappa;
  double max_dev_chi = 0;
  std::optional<double> max_dev_lambda, max_dev_kappa;
  int worst_trial = -1;
  Dressing worst;
  bool pass = true;
};

inline constexpr double kFuzzTolerance = 1e-7;

FuzzReport invariance_fuzz(const Mat4& t, int n, bool restricted, std::uint64_t seed, const Tolerances& tol = {});

struct FeasibilityVerdict {
  bool feasible = false;
  std::string condition;
  std::string citation;
};

// Table lookup on the complement-reduced combination; no numeric search.
FeasibilityVerdict feasibility_two_interface(const Invariants& a, const Invariants& b, IfaceClass target);

}  // namespace iface
