#include "iface/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iface {

Component make_component(const std::string& id, const Mat4& m, const Tolerances& tol) {
  if (id.empty()) throw Error(ErrorKind::Parameter, "component id must be nonempty");
  return {id, m, ranks_and_class(m, tol)};
}

namespace {

void require_active(const Component& c) {
  if (c.inv.cls == IfaceClass::Identity || c.inv.cls == IfaceClass::SWAP)
    throw Error(ErrorKind::Parameter,
                "component '" + c.id + "' is " + class_name(c.inv.cls) + "; active components must be non-trivial");
}

}  // namespace

IfaceClass complement_class(IfaceClass c) {
  switch (c) {
    case IfaceClass::Identity: return IfaceClass::SWAP;
    case IfaceClass::SWAP: return IfaceClass::Identity;
    case IfaceClass::TMS: return IfaceClass::sTMS;
    case IfaceClass::sTMS: return IfaceClass::TMS;
    case IfaceClass::QNDI: return IfaceClass::sQNDI;
    case IfaceClass::sQNDI: return IfaceClass::QNDI;
    case IfaceClass::BS: return IfaceClass::BS;
  }
  return c;
}

namespace {

bool is_qnd(IfaceClass c) { return c == IfaceClass::QNDI; }

}  // namespace

// ---- cascades ----

Cascade Cascade::ops(const OpChain& ops) {
  Cascade c;
  OpChain fused = fuse_chain(ops);
  if (!fused.empty()) {
    c.matrix = chain_matrix(fused);
    c.steps.push_back(PlanStep::of(std::move(fused)));
  }
  return c;
}

Cascade Cascade::of(const Component& comp) {
  Cascade c;
  c.steps.push_back(PlanStep::of(comp));
  c.matrix = comp.matrix;
  return c;
}

int Cascade::component_count() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const PlanStep& s) { return s.is_component; }));
}

Cascade operator*(const Cascade& left, const Cascade& right) {
  Cascade out;
  out.steps = left.steps;
  for (const auto& s : right.steps) {
    if (!s.is_component && !out.steps.empty() && !out.steps.back().is_component) {
      OpChain merged = out.steps.back().ops;
      append(merged, s.ops);
      out.steps.back().ops = fuse_chain(merged);
      if (out.steps.back().ops.empty()) out.steps.pop_back();
    } else {
      out.steps.push_back(s);
    }
  }
  out.matrix = left.matrix * right.matrix;
  return out;
}

int SynthPlan::component_count() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const PlanStep& s) { return s.is_component; }));
}

Mat4 evaluate_steps(const std::vector<PlanStep>& steps, const Library& lib) {
  Mat4 out = Mat4::Identity();
  for (const auto& s : steps) {
    if (s.is_component) {
      auto it = lib.find(s.component);
      if (it == lib.end()) throw Error(ErrorKind::UnknownComponent, "unknown component id '" + s.component + "'");
      out = out * it->second;
    } else {
      out = out * chain_matrix(s.ops);
    }
  }
  return out;
}

double op_conditioning(const LocalOp& op) {
  switch (op.kind) {
    case OpKind::Squeeze: return std::abs(std::log(std::abs(op.param)));
    case OpKind::Rotation:
    case OpKind::Fourier: return 0.0;
    default: {
      const Svd2 s = svd2(op.matrix());
      return std::log(std::max(1.0, s.s1));
    }
  }
}

double steps_conditioning(const std::vector<PlanStep>& steps) {
  double c = 0;
  for (const auto& s : steps)
    for (const auto& op : s.ops) c = std::max(c, op_conditioning(op));
  return c;
}

double invariant_distance(const Mat4& achieved, const Target& target, const Tolerances& tol) {
  if (target.matrix) return max_abs(achieved - *target.matrix);
  Invariants inv;
  try {
    inv = target.restricted ? restricted_invariants(achieved, tol) : ranks_and_class(achieved, tol);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  if (inv.cls != target.cls) return std::numeric_limits<double>::infinity();
  double d = std::abs(inv.chi - target.chi) / std::max(1.0, std::abs(target.chi));
  if (target.restricted && target.lambda && inv.lambda)
    d = std::max(d, std::abs(*inv.lambda - std::abs(*target.lambda)) / std::max(1.0, std::abs(*target.lambda)));
  if (target.restricted && target.kappa && inv.kappa)
    d = std::max(d, std::abs(*inv.kappa - *target.kappa) / std::max(1.0, std::abs(*target.kappa)));
  return d;
}

SynthPlan finalize_plan(Cascade c, const Target& target, const Library& lib, nlohmann::json meta,
                        const Tolerances& tol) {
  SynthPlan p;
  p.steps = std::move(c.steps);
  p.target = target;
  p.achieved = evaluate_steps(p.steps, lib);
  p.residual = invariant_distance(p.achieved, target, tol);
  p.conditioning = steps_conditioning(p.steps);
  p.conditioning_warning = p.conditioning > kConditioningLimit;
  p.meta = meta.is_null() ? nlohmann::json::object() : std::move(meta);
  return p;
}

Library library_of(std::initializer_list<const Component*> comps) {
  Library lib;
  for (const Component* c : comps)
    if (c) lib[c->id] = c->matrix;
  return lib;
}

IfaceClass class_for_chi(double chi, IfaceClass hint, const Tolerances& tol) {
  if (std::abs(chi) <= tol.chi) return hint == IfaceClass::Identity ? IfaceClass::Identity : IfaceClass::QNDI;
  if (std::abs(chi - 1) <= tol.chi) return hint == IfaceClass::SWAP ? IfaceClass::SWAP : IfaceClass::sQNDI;
  if (chi < 0) return IfaceClass::TMS;
  if (chi < 1) return IfaceClass::BS;
  return IfaceClass::sTMS;
}

// ---- interference solver ----

OpChain InterferenceSolution::local_ops() const {
  OpChain ops;
  if (sqndi_b) {
    ops.push_back(LocalOp::rotation(1, -kPi / 2));
    ops.push_back(LocalOp::rotation(2, -3 * kPi / 2));
  }
  if (phi1 != 0) ops.push_back(LocalOp::rotation(1, phi1));
  if (gamma != 1) ops.push_back(LocalOp::squeeze(1, gamma));
  if (eps != 0) ops.push_back(LocalOp::rotation(1, eps));
  if (phi2 != 0) ops.push_back(LocalOp::rotation(2, phi2));
  return ops;
}

namespace {

Mat2 adj2(const Mat2& m) {
  Mat2 a;
  a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return a;
}

struct Reduced {
  IfaceClass cls;
  double param;
  bool complemented;
};

Reduced reduce(IfaceClass c, double p) {
  if (c == IfaceClass::sTMS) return {IfaceClass::TMS, p, true};
  if (c == IfaceClass::sQNDI) return {IfaceClass::QNDI, p, true};
  return {c, p, false};
}

void require_nontrivial(IfaceClass c) {
  if (c == IfaceClass::Identity || c == IfaceClass::SWAP)
    throw Error(ErrorKind::Parameter, std::string("active interface cannot be ") + class_name(c));
}

Mat4 reduced_control(const InterferenceSolution& s) {
  return local(rot2(s.phi1) * squeeze2(s.gamma) * rot2(s.eps), rot2(s.phi2));
}

struct Shape {
  double chi;
  int n_t, n_r;
};

Shape inspect(const Mat4& t, const Tolerances& tol) {
  const double cut = tol.rank * std::max(1.0, sigma_max(t));
  return {transmission_strength(t), numerical_rank(block(t, 2, 1), cut), numerical_rank(block(t, 2, 2), cut)};
}

bool shape_matches(const Shape& s, IfaceClass cls) {
  switch (cls) {
    case IfaceClass::Identity: return s.n_t == 0;
    case IfaceClass::QNDI: return s.n_t == 1;
    case IfaceClass::SWAP: return s.n_r == 0;
    case IfaceClass::sQNDI: return s.n_r == 1;
    default: return s.n_t == 2 && s.n_r == 2;
  }
}

// Roots of k1 g^2 - sigma Z g + k0 = 0 with g > 0, for sigma = cos(phi) = +-1.
std::vector<std::pair<double, double>> squeeze_roots(double k0, double k1, double z) {
  std::vector<std::pair<double, double>> out;  // (phi, gamma)
  for (double sigma : {1.0, -1.0}) {
    const double disc = z * z - 4 * k0 * k1;
    if (disc < 0) continue;
    const double sq = std::sqrt(disc);
    for (double sgn : {1.0, -1.0}) {
      const double g = (sigma * z + sgn * sq) / (2 * k1);
      if (g > 0 && std::isfinite(g)) {
        const double phi = sigma > 0 ? 0.0 : kPi;
        bool dup = false;
        for (const auto& [p, h] : out) dup = dup || (p == phi && std::abs(h - g) <= 1e-14 * g);
        if (!dup) out.emplace_back(phi, g);
      }
    }
  }
  return out;
}

// Minimal |ln gamma|, ties broken towards gamma >= 1 and phi = 0.
void sort_roots(std::vector<std::pair<double, double>>& roots) {
  std::stable_sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    const double lx = std::abs(std::log(x.second)), ly = std::abs(std::log(y.second));
    if (std::abs(lx - ly) > 1e-12 * std::max(1.0, lx)) return lx < ly;
    if ((x.second >= 1) != (y.second >= 1)) return x.second >= 1;
    return x.first < y.first;
  });
}

struct Setup {
  Reduced a, b;
  IfaceClass cls_r;
  double chi_r;
  Mat4 ua, ub;
  double k0, k1;
  InterferenceSolution base;
};

Setup setup(IfaceClass cls_a, IfaceClass cls_b, double param_a, double param_b, double chi_tgt,
            IfaceClass target_cls) {
  require_nontrivial(cls_a);
  require_nontrivial(cls_b);
  if (!std::isfinite(chi_tgt)) throw Error(ErrorKind::Parameter, "target chi must be finite");
  Setup s;
  s.a = reduce(cls_a, param_a);
  s.b = reduce(cls_b, param_b);
  const bool odd = s.a.complemented != s.b.complemented;
  s.chi_r = odd ? 1.0 - chi_tgt : chi_tgt;
  s.cls_r = odd ? complement_class(target_cls) : target_cls;
  s.ua = standard_interface({s.a.cls, s.a.param});
  s.ub = standard_interface({s.b.cls, s.b.param});
  const Mat2 k = adj2(block(s.ub, 2, 1)) * block(s.ub, 2, 2) * block(s.ua, 2, 1) * adj2(block(s.ua, 1, 1));
  s.k0 = k(0, 0);
  s.k1 = k(1, 1);
  InterferenceSolution& b = s.base;
  b.combination = std::string(class_name(s.a.cls)) + "+" + class_name(s.b.cls);
  b.complemented_a = s.a.complemented;
  b.complemented_b = s.b.complemented;
  b.sqndi_b = cls_b == IfaceClass::sQNDI;
  const double xa = transmission_strength(s.ua), xb = transmission_strength(s.ub);
  b.x_f = xa + xb - 2 * xa * xb;
  b.z = s.chi_r - b.x_f;
  return s;
}

std::string feasibility_message(IfaceClass target_cls, IfaceClass cls_a, IfaceClass cls_b, double pa, double pb) {
  std::ostringstream os;
  os.precision(17);
  os << class_name(target_cls) << " target infeasible from " << class_name(cls_a) << "(" << pa << ") and "
     << class_name(cls_b) << "(" << pb << ")";
  switch (target_cls) {
    case IfaceClass::Identity: os << ": requires chi_A=chi_B (same class); components must have the same strength"; break;
    case IfaceClass::SWAP: os << ": requires complementary strengths chi_A+chi_B=1 (BS+BS); components must be complemented"; break;
    default: os << ": rank condition of the target class cannot be met"; break;
  }
  return os.str();
}

}  // namespace

InterferenceSolution solve_interference(IfaceClass cls_a, IfaceClass cls_b, double param_a, double param_b,
                                        double chi_tgt, IfaceClass target_cls, const InterferenceOptions& opt,
                                        const Tolerances& tol) {
  if (class_for_chi(chi_tgt, target_cls, tol) != target_cls)
    throw Error(ErrorKind::Parameter, std::string("target class ") + class_name(target_cls) +
                                          " inconsistent with chi=" + std::to_string(chi_tgt));
  Setup st = setup(cls_a, cls_b, param_a, param_b, chi_tgt, target_cls);
  InterferenceSolution sol = st.base;
  const bool qa = is_qnd(st.a.cls), qb = is_qnd(st.b.cls);
  const double z = sol.z;

  // Decoupled targets are reachable only from matched strengths.
  if (st.cls_r == IfaceClass::Identity || st.cls_r == IfaceClass::SWAP) {
    const double xa = transmission_strength(st.ua), xb = transmission_strength(st.ub);
    bool ok;
    if (st.cls_r == IfaceClass::Identity)
      ok = (qa && qb) || (!qa && !qb && st.a.cls == st.b.cls && std::abs(xa - xb) <= 1e-9 * std::max(1.0, std::abs(xa)));
    else
      ok = st.a.cls == IfaceClass::BS && st.b.cls == IfaceClass::BS && std::abs(xa + xb - 1) <= 1e-9;
    if (!ok) throw Error(ErrorKind::Infeasible, feasibility_message(target_cls, cls_a, cls_b, param_a, param_b));
  }

  if (opt.squeeze_only) {
    auto all = squeeze_only_solutions(cls_a, cls_b, param_a, param_b, chi_tgt);
    if (all.empty() || opt.root < 0 || opt.root >= static_cast<int>(all.size()))
      throw Error(ErrorKind::Infeasible, "no squeeze-only solution for chi=" + std::to_string(chi_tgt));
    return all[opt.root];
  }

  if (qa && qb) {
    const double ea = st.a.param, eb = st.b.param;
    if (st.cls_r == IfaceClass::Identity) {
      sol.phi1 = kPi;
      sol.gamma = ea / eb;
    } else if (std::abs(st.chi_r) <= tol.chi) {
      sol.phi1 = std::abs(ea + eb) >= 1e-8 * (std::abs(ea) + std::abs(eb)) ? 0.0 : kPi / 2;
    } else {
      sol.phi1 = kPi / 2;
      sol.phi2 = (st.chi_r / (ea * eb) > 0 ? 1.0 : -1.0) * kPi / 2;
      sol.gamma = std::abs(ea * eb / st.chi_r);
    }
  } else if (qa || qb) {
    const double k = qa ? st.k0 : st.k1;
    if (std::abs(z) <= 1e-14 * std::max(1.0, std::abs(k))) {
      sol.phi1 = kPi / 2;
      sol.degenerate = true;
    } else {
      sol.phi1 = z * k > 0 ? 0.0 : kPi;
      sol.gamma = qa ? std::abs(k / z) : std::abs(z / k);
    }
  } else {
    const double band = std::abs(st.k0 + st.k1);
    if (st.k0 * st.k1 > 0 && std::abs(z) <= band * (1 + 1e-9)) {
      double c = std::clamp(z / (st.k0 + st.k1), -1.0, 1.0);
      // acos loses half the digits at the band edge, where decoupled targets sit.
      if (1 - std::abs(c) <= 1e-12) c = c > 0 ? 1.0 : -1.0;
      sol.phi1 = std::acos(c);
    } else {
      auto roots = squeeze_roots(st.k0, st.k1, z);
      if (roots.empty()) throw Error(ErrorKind::Infeasible, "no real squeeze for the requested chi");
      sort_roots(roots);
      sol.phi1 = roots[0].first;
      sol.gamma = roots[0].second;
      if (roots.size() > 1) sol.gamma_alt = roots[1].second;
    }
  }

  auto shape_of = [&](const InterferenceSolution& s) { return inspect(st.ub * reduced_control(s) * st.ua, tol); };
  Shape sh = shape_of(sol);
  if (!shape_matches(sh, st.cls_r) && !qa && !qb) {
    const double p = opt.special_phi1;
    if (st.cls_r == IfaceClass::QNDI && sh.n_t == 0) {
      sol.special = true;
      sol.phi1 = p;
      sol.gamma = std::tan(p) - 1 / std::cos(p);
      sh = shape_of(sol);
    } else if (st.cls_r == IfaceClass::sQNDI && sh.n_r == 0) {
      sol.special = true;
      sol.phi1 = p;
      sol.gamma = 1 / std::cos(p) - std::tan(p);
      sh = shape_of(sol);
    }
  }
  if (!shape_matches(sh, st.cls_r))
    throw Error(ErrorKind::Infeasible, feasibility_message(target_cls, cls_a, cls_b, param_a, param_b));
  if (std::abs(sh.chi - st.chi_r) > 1e-8 * std::max(1.0, std::abs(st.chi_r)))
    throw Error(ErrorKind::Infeasible, "interference solve missed the target chi");
  return sol;
}

std::vector<InterferenceSolution> squeeze_only_solutions(IfaceClass cls_a, IfaceClass cls_b, double param_a,
                                                         double param_b, double chi_tgt) {
  Setup st = setup(cls_a, cls_b, param_a, param_b, chi_tgt, class_for_chi(chi_tgt, IfaceClass::BS));
  if (is_qnd(st.a.cls) || is_qnd(st.b.cls))
    throw Error(ErrorKind::Parameter, "squeeze-only solutions need chi-type components");
  auto roots = squeeze_roots(st.k0, st.k1, st.base.z);
  sort_roots(roots);
  std::vector<InterferenceSolution> out;
  for (const auto& [phi, g] : roots) {
    InterferenceSolution s = st.base;
    s.phi1 = phi;
    s.gamma = g;
    out.push_back(s);
  }
  return out;
}

Cascade interference_cascade(const Component& a, const NormalFormCert& cert_a, const Component& b,
                             const NormalFormCert& cert_b, const InterferenceSolution& sol) {
  OpChain mid = cert_b.ops_before;
  append(mid, sol.local_ops());
  append(mid, cert_a.ops_after);
  return Cascade::of(b) * Cascade::ops(mid) * Cascade::of(a);
}

namespace {

nlohmann::json solution_meta(const InterferenceSolution& s) {
  nlohmann::json j;
  j["combination"] = s.combination;
  j["gamma"] = s.gamma;
  j["gamma_alt"] = s.gamma_alt;
  j["phi1"] = s.phi1;
  j["phi2"] = s.phi2;
  j["eps"] = s.eps;
  j["x_f"] = s.x_f;
  j["z"] = s.z;
  j["special"] = s.special;
  j["degenerate"] = s.degenerate;
  return j;
}

// Exact fix-up of a cascade already in the Identity or SWAP class.
Cascade exact_fixup(const Cascade& c, IfaceClass cls) {
  const Mat4& t = c.matrix;
  if (cls == IfaceClass::Identity) {
    return Cascade::ops({LocalOp::general_op(1, inverse2(block(t, 1, 1))), LocalOp::general_op(2, inverse2(block(t, 2, 2)))}) *
           c;
  }
  // SWAP class: (T12^-1 + I) T (T21^-1 + I) = Ubar_SWAP.
  return Cascade::ops({LocalOp::general_op(1, inverse2(block(t, 1, 2)))}) * c *
         Cascade::ops({LocalOp::general_op(1, inverse2(block(t, 2, 1)))});
}

struct TwoResult {
  Cascade cascade;
  InterferenceSolution sol;
};

TwoResult two_interface_cascade(const Component& a, const Component& b, IfaceClass target_cls, double chi_tgt,
                                const InterferenceOptions& opt, const Tolerances& tol) {
  require_active(a);
  require_active(b);
  const NormalFormCert ca = to_standard_form(a.matrix, tol);
  const NormalFormCert cb = to_standard_form(b.matrix, tol);
  TwoResult r;
  r.sol = solve_interference(ca.canonical.cls, cb.canonical.cls, ca.canonical.param, cb.canonical.param, chi_tgt,
                             target_cls, opt, tol);
  r.cascade = interference_cascade(a, ca, b, cb, r.sol);
  return r;
}

}  // namespace

SynthPlan two_interface_synth(const Component& a, const Component& b, IfaceClass target_cls, double chi_tgt,
                              const InterferenceOptions& opt, const Tolerances& tol) {
  TwoResult r = two_interface_cascade(a, b, target_cls, chi_tgt, opt, tol);
  Target tgt;
  tgt.cls = target_cls;
  tgt.chi = chi_tgt;
  Cascade c = r.cascade;
  if (target_cls == IfaceClass::Identity || target_cls == IfaceClass::SWAP) {
    c = exact_fixup(c, target_cls);
    tgt.matrix = target_cls == IfaceClass::Identity ? Mat4::Identity() : std_swap();
  }
  nlohmann::json meta;
  meta["solution"] = solution_meta(r.sol);
  return finalize_plan(std::move(c), tgt, library_of({&a, &b}), meta, tol);
}

InverseOps inverse_via_locals(const StdSpec& spec) {
  InverseOps r;
  switch (spec.cls) {
    case IfaceClass::BS:
    case IfaceClass::TMS:
    case IfaceClass::QNDI:
      r.before = {LocalOp::rotation(1, kPi)};
      r.after = {LocalOp::rotation(1, kPi)};
      break;
    case IfaceClass::sTMS:
      r.after = {LocalOp::rotation(1, kPi)};
      r.before = {LocalOp::rotation(2, kPi)};
      break;
    case IfaceClass::sQNDI:
      r.after = {LocalOp::rotation(1, kPi / 2), LocalOp::rotation(2, kPi / 2)};
      r.before = {LocalOp::rotation(1, -kPi / 2), LocalOp::rotation(2, -kPi / 2)};
      break;
    default: break;
  }
  return r;
}

Conversion local_conversion(const Mat4& from, const Mat4& to, bool restricted, const Tolerances& tol) {
  const FormKind form = restricted ? FormKind::PreSqueezing : FormKind::Standard;
  const NormalFormCert cf = to_squeezing_form(from, form, tol);
  const NormalFormCert ct = to_squeezing_form(to, form, tol);
  auto fail = [](const std::string& why) { throw Error(ErrorKind::Infeasible, "not locally equivalent: " + why); };
  if (cf.canonical.cls != ct.canonical.cls)
    fail(std::string(class_name(cf.canonical.cls)) + " vs " + class_name(ct.canonical.cls));
  const double chf = transmission_strength(from), cht = transmission_strength(to);
  if (std::abs(chf - cht) > 1e-7 * std::max(1.0, std::abs(cht))) fail("chi differs");
  if (restricted) {
    if (std::abs(cf.residual_lambda - ct.residual_lambda) > 1e-7 * std::max(1.0, ct.residual_lambda))
      fail("Lambda differs");
    if (std::abs(std::remainder(cf.residual_rot - ct.residual_rot, kPi)) > 1e-7) fail("kappa differs");
  }
  double g = 1;
  if (cf.canonical.cls == IfaceClass::QNDI) g = ct.canonical.param / cf.canonical.param;
  Conversion c;
  c.after = invert_chain(ct.ops_after);
  if (g != 1) c.after.push_back(LocalOp::squeeze(1, 1 / g));
  append(c.after, cf.ops_after);
  c.before = cf.ops_before;
  if (g != 1) c.before.push_back(LocalOp::squeeze(1, g));
  append(c.before, invert_chain(ct.ops_before));
  c.after = fuse_chain(c.after);
  c.before = fuse_chain(c.before);
  c.residual = max_abs(chain_matrix(c.after) * from * chain_matrix(c.before) - to);
  return c;
}

namespace {

// C * after * T_AB * before == goal, where T_AB is locally equivalent to C^{-1} goal.
SynthPlan close_with_third(const Component& a, const Component& b, const Component& c, const Mat4& goal,
                           IfaceClass goal_cls, const Tolerances& tol) {
  require_active(c);
  const Mat4 v = inverse(c.matrix, tol) * goal;
  const Invariants iv = ranks_and_class(v, tol);
  TwoResult r = two_interface_cascade(a, b, iv.cls, iv.chi, {}, tol);
  const Conversion conv = local_conversion(r.cascade.matrix, v, false, tol);
  Cascade total = Cascade::of(c) * Cascade::ops(conv.after) * r.cascade * Cascade::ops(conv.before);
  Target tgt;
  tgt.cls = goal_cls;
  tgt.chi = goal_cls == IfaceClass::SWAP ? 1.0 : 0.0;
  tgt.matrix = goal;
  nlohmann::json meta;
  meta["solution"] = solution_meta(r.sol);
  meta["intermediate_class"] = class_name(iv.cls);
  meta["intermediate_chi"] = iv.chi;
  return finalize_plan(std::move(total), tgt, library_of({&a, &b, &c}), meta, tol);
}

}  // namespace

SynthPlan identity_synth3(const Component& a, const Component& b, const std::optional<Component>& c,
                          const Tolerances& tol) {
  if (!c) {
    SynthPlan p = two_interface_synth(a, b, IfaceClass::Identity, 0.0, {}, tol);
    p.meta["shortcut"] = true;
    return p;
  }
  SynthPlan p = close_with_third(a, b, *c, Mat4::Identity(), IfaceClass::Identity, tol);
  p.meta["shortcut"] = false;
  return p;
}

SynthPlan swap_synth3(const Component& a, const Component& b, const std::optional<Component>& c,
                      const Tolerances& tol) {
  if (!c) {
    SynthPlan p = two_interface_synth(a, b, IfaceClass::SWAP, 1.0, {}, tol);
    p.meta["shortcut"] = true;
    return p;
  }
  SynthPlan p = close_with_third(a, b, *c, std_swap(), IfaceClass::SWAP, tol);
  p.meta["shortcut"] = false;
  return p;
}

}  // namespace iface
