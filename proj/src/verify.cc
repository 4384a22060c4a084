#include "iface/verify.h"

#include <cmath>
#include <limits>
#include <random>

namespace iface {

Simulation simulate(const std::vector<PlanStep>& steps, const Library& lib, const Tolerances& tol) {
  std::vector<Mat4> mats;
  mats.reserve(steps.size());
  for (const auto& s : steps) {
    if (s.is_component) {
      auto it = lib.find(s.component);
      if (it == lib.end()) throw Error(ErrorKind::UnknownComponent, "unknown component id '" + s.component + "'");
      mats.push_back(it->second);
    } else {
      mats.push_back(chain_matrix(s.ops));
    }
  }
  Simulation sim;
  Mat4 acc = Mat4::Identity();
  for (auto it = mats.rbegin(); it != mats.rend(); ++it) {
    acc = *it * acc;
    const double r = check_symplectic(acc);
    if (!(r <= tol.sym * std::max(1.0, sigma_max(acc) * sigma_max(acc))))
      throw Error(ErrorKind::Validation, "intermediate after step " + std::to_string(sim.intermediates.size() + 1) +
                                             " is not symplectic");
    sim.intermediates.push_back(acc);
  }
  // Same accumulation order as the synthesizers use for 'achieved'.
  sim.matrix = evaluate_steps(steps, lib);
  return sim;
}

namespace {

bool close_rel(double x, double y, double rel) { return std::abs(x - y) <= rel * std::max(1.0, std::abs(y)); }

}  // namespace

EquivalenceResult equivalent_up_to_local(const Mat4& t, const Mat4& t2, bool restricted, bool build_witness,
                                         const Tolerances& tol) {
  require_symplectic(t, tol);
  require_symplectic(t2, tol);
  const Invariants a = restricted ? restricted_invariants(t, tol) : ranks_and_class(t, tol);
  const Invariants b = restricted ? restricted_invariants(t2, tol) : ranks_and_class(t2, tol);
  EquivalenceResult r;
  auto no = [&](std::string why) {
    r.reason = std::move(why);
    return r;
  };
  if (a.cls != b.cls) return no(std::string("class ") + class_name(a.cls) + " vs " + class_name(b.cls));
  if (a.n_R != b.n_R || a.n_T != b.n_T) return no("ranks differ");
  if (!close_rel(a.chi, b.chi, 1e-7)) return no("chi differs");
  if (restricted) {
    if (a.lambda.has_value() != b.lambda.has_value() || (a.lambda && !close_rel(*a.lambda, *b.lambda, 1e-7)))
      return no("Lambda differs");
    if (a.kappa.has_value() != b.kappa.has_value() || (a.kappa && !close_rel(*a.kappa, *b.kappa, 1e-7)))
      return no("kappa differs");
  }
  r.equivalent = true;
  if (build_witness) {
    const Conversion c = local_conversion(t, t2, restricted, tol);
    EquivalenceWitness w;
    w.before = c.before;
    w.after = c.after;
    w.residual = max_abs(chain_matrix(w.after) * t * chain_matrix(w.before) - t2) / std::max(1.0, max_abs(t2));
    r.witness = w;
  }
  return r;
}

Dressing random_dressing(std::mt19937_64& rng, bool restricted) {
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi), lg(-3.0, 3.0);
  auto side = [&] {
    OpChain ops;
    for (int mode : {1, 2}) {
      if (restricted && mode == 2) {
        ops.push_back(LocalOp::rotation(2, ph(rng)));
        continue;
      }
      ops.push_back(LocalOp::rotation(mode, ph(rng)));
      ops.push_back(LocalOp::squeeze(mode, std::exp(lg(rng))));
      ops.push_back(LocalOp::rotation(mode, ph(rng)));
    }
    return ops;
  };
  Dressing d;
  d.after = side();
  d.before = side();
  return d;
}

FuzzReport invariance_fuzz(const Mat4& t, int n, bool restricted, std::uint64_t seed, const Tolerances& tol) {
  if (n < 1) throw Error(ErrorKind::Parameter, "fuzz needs n >= 1");
  const Invariants ref = restricted ? restricted_invariants(t, tol) : ranks_and_class(t, tol);
  FuzzReport rep;
  rep.n = n;
  rep.restricted = restricted;
  rep.cls = ref.cls;
  rep.chi = ref.chi;
  rep.lambda = ref.lambda;
  rep.kappa = ref.kappa;
  if (ref.lambda) rep.max_dev_lambda = 0.0;
  if (ref.kappa) rep.max_dev_kappa = 0.0;
  double worst = -1;
  for (int i = 0; i < n; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    const Dressing d = random_dressing(rng, restricted);
    const Mat4 td = chain_matrix(d.after) * t * chain_matrix(d.before);
    double dev = 0;
    try {
      const Invariants inv = restricted ? restricted_invariants(td, tol) : ranks_and_class(td, tol);
      if (inv.cls != ref.cls) {
        rep.class_stable = false;
        dev = std::numeric_limits<double>::infinity();
      }
      const double dc = std::abs(inv.chi - ref.chi) / std::max(1.0, std::abs(ref.chi));
      rep.max_dev_chi = std::max(rep.max_dev_chi, dc);
      dev = std::max(dev, dc);
      if (ref.lambda) {
        const double dl = inv.lambda ? std::abs(*inv.lambda - *ref.lambda) / std::max(1.0, *ref.lambda)
                                     : std::numeric_limits<double>::infinity();
        rep.max_dev_lambda = std::max(*rep.max_dev_lambda, dl);
        dev = std::max(dev, dl);
      }
      if (ref.kappa) {
        const double dk = inv.kappa ? std::abs(*inv.kappa - *ref.kappa) / std::max(1.0, std::abs(*ref.kappa))
                                    : std::numeric_limits<double>::infinity();
        rep.max_dev_kappa = std::max(*rep.max_dev_kappa, dk);
        dev = std::max(dev, dk);
      }
    } catch (const Error&) {
      rep.class_stable = false;
      dev = std::numeric_limits<double>::infinity();
    }
    if (dev > worst) {
      worst = dev;
      rep.worst_trial = i;
      rep.worst = d;
    }
  }
  rep.pass = rep.class_stable && rep.max_dev_chi <= kFuzzTolerance &&
             (!rep.max_dev_lambda || *rep.max_dev_lambda <= kFuzzTolerance) &&
             (!rep.max_dev_kappa || *rep.max_dev_kappa <= kFuzzTolerance);
  return rep;
}

namespace {

struct ReducedSide {
  IfaceClass cls;
  double chi;
  bool complemented;
};

ReducedSide reduce_side(const Invariants& v) {
  switch (v.cls) {
    case IfaceClass::sTMS: return {IfaceClass::TMS, 1 - v.chi, true};
    case IfaceClass::sQNDI: return {IfaceClass::QNDI, 0, true};
    case IfaceClass::QNDI: return {IfaceClass::QNDI, 0, false};
    case IfaceClass::BS:
    case IfaceClass::TMS: return {v.cls, v.chi, false};
    default: throw Error(ErrorKind::Parameter, std::string("component is ") + class_name(v.cls) + "; must be non-trivial");
  }
}

}  // namespace

FeasibilityVerdict feasibility_two_interface(const Invariants& a, const Invariants& b, IfaceClass target) {
  const ReducedSide ra = reduce_side(a), rb = reduce_side(b);
  const IfaceClass t = ra.complemented != rb.complemented ? complement_class(target) : target;
  std::string row = std::string(class_name(ra.cls)) + "+" + class_name(rb.cls);
  if (ra.cls == IfaceClass::QNDI && rb.cls != IfaceClass::QNDI) row = std::string(class_name(rb.cls)) + "+QNDI";
  if (ra.cls == IfaceClass::TMS && rb.cls == IfaceClass::BS) row = "BS+TMS";
  FeasibilityVerdict v;
  v.citation = "two-interface combination table, row " + row + ", column " + class_name(t);
  if (t != target) v.citation += " (complement-reduced from " + std::string(class_name(target)) + ")";
  const bool same = ra.cls == rb.cls;
  switch (t) {
    case IfaceClass::Identity:
      if (ra.cls == IfaceClass::QNDI && same) {
        v.feasible = true;
        v.condition = "always";
      } else if (same) {
        v.feasible = std::abs(ra.chi - rb.chi) <= 1e-9 * std::max(1.0, std::abs(ra.chi));
        v.condition = "χ_A=χ_B";
      } else {
        v.condition = "not possible for different classes";
      }
      break;
    case IfaceClass::SWAP:
      if (ra.cls == IfaceClass::BS && same) {
        v.feasible = std::abs(ra.chi + rb.chi - 1) <= 1e-9;
        v.condition = "complementary strengths χ_A+χ_B=1";
      } else {
        v.condition = "requires BS+BS";
      }
      break;
    default:
      v.feasible = true;
      v.condition = "always";
      break;
  }
  return v;
}

}  // namespace iface
