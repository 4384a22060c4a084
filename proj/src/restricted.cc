#include "iface/restricted.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iface {

int mode2_violations(const std::vector<PlanStep>& steps) {
  int n = 0;
  for (const auto& s : steps)
    for (const auto& op : s.ops)
      if (op.mode == 2 && op.kind != OpKind::Rotation && op.kind != OpKind::Fourier) ++n;
  return n;
}

RotationTransfer transfer_left(IfaceClass cls, double u) {
  switch (cls) {
    case IfaceClass::BS: return {-u, u, u};
    case IfaceClass::TMS: return {u, -u, u};
    case IfaceClass::sTMS: return {u, u, -u};
    default: throw Error(ErrorKind::Parameter, std::string("no rotation transfer through ") + class_name(cls));
  }
}

RotationTransfer transfer_right(IfaceClass cls, double v) {
  switch (cls) {
    case IfaceClass::BS: return {-v, v, v};
    case IfaceClass::TMS: return {v, -v, v};
    case IfaceClass::sTMS: return {v, v, -v};
    default: throw Error(ErrorKind::Parameter, std::string("no rotation transfer through ") + class_name(cls));
  }
}

namespace {

void require_active(const Component& c) {
  if (c.inv.cls == IfaceClass::Identity || c.inv.cls == IfaceClass::SWAP)
    throw Error(ErrorKind::Parameter,
                "component '" + c.id + "' is " + class_name(c.inv.cls) + "; active components must be non-trivial");
}

bool chi_type(IfaceClass c) { return c == IfaceClass::BS || c == IfaceClass::TMS || c == IfaceClass::sTMS; }

struct Built {
  Cascade cascade;
  nlohmann::json meta = nlohmann::json::object();
};

Library library_of_list(const std::vector<const Component*>& comps) {
  Library lib;
  for (const Component* c : comps) lib[c->id] = c->matrix;
  return lib;
}

nlohmann::json cert_meta(const NormalFormCert& c) {
  nlohmann::json j;
  j["form"] = form_name(c.form);
  j["class"] = class_name(c.canonical.cls);
  j["param"] = c.canonical.param;
  j["lambda"] = c.residual_lambda;
  j["rotation"] = c.residual_rot;
  return j;
}

Target restricted_target(IfaceClass cls, double chi, std::optional<double> lambda, std::optional<double> kappa) {
  Target t;
  t.cls = cls;
  t.chi = chi;
  t.restricted = true;
  t.lambda = lambda;
  t.kappa = kappa;
  return t;
}

// Ops X (restricted) with V^{-1} chain(X) T local, for T and V in the same class.
OpChain restricted_link(const Mat4& t, const Mat4& v, const Tolerances& tol) {
  const NormalFormCert ct = to_squeezing_form(t, FormKind::PreSqueezing, tol);
  const NormalFormCert cv = to_squeezing_form(v, FormKind::PreSqueezing, tol);
  if (ct.canonical.cls != cv.canonical.cls)
    throw Error(ErrorKind::Infeasible, std::string("intermediate class ") + class_name(ct.canonical.cls) +
                                           " does not match " + class_name(cv.canonical.cls));
  OpChain x = invert_chain(cv.ops_after);
  if (ct.canonical.cls == IfaceClass::QNDI) x.push_back(LocalOp::squeeze(1, ct.canonical.param / cv.canonical.param));
  append(x, ct.ops_after);
  return x;
}

// (T12^-1 + I) T (T21^-1 + I) for T in the SWAP class: mode-1 ops only.
Built swap_fixup(const Cascade& c) {
  Built b;
  const Mat4& t = c.matrix;
  b.cascade = Cascade::ops({LocalOp::general_op(1, inverse2(block(t, 1, 2)))}) * c *
              Cascade::ops({LocalOp::general_op(1, inverse2(block(t, 2, 1)))});
  return b;
}

Built swap_restricted_built(const Component& a, const Component& b, const std::optional<Component>& c,
                            const Tolerances& tol) {
  if (!c) {
    ModuleResult m = two_interface_module_cascade(a, b, 1.0, IfaceClass::SWAP, FormKind::PreSqueezing, {}, tol);
    Built out = swap_fixup(m.cascade);
    out.meta["shortcut"] = true;
    return out;
  }
  require_active(*c);
  const Mat4 v = inverse(c->matrix, tol) * std_swap();
  const Invariants iv = ranks_and_class(v, tol);
  ModuleResult m = two_interface_module_cascade(a, b, iv.chi, iv.cls, FormKind::PreSqueezing, {}, tol);
  const OpChain x = restricted_link(m.cascade.matrix, v, tol);
  // C X T_AB = SWAP (W1 + W2) with W local.
  const Mat4 w = std_swap() * c->matrix * chain_matrix(x) * m.cascade.matrix;
  const double off = std::max(block(w, 1, 2).cwiseAbs().maxCoeff(), block(w, 2, 1).cwiseAbs().maxCoeff());
  if (off > 1e-6 * std::max(1.0, sigma_max(w)))
    throw Error(ErrorKind::Inconsistent, "swapped-inverse conversion left a non-local remainder");
  Built out;
  out.cascade = Cascade::ops({LocalOp::general_op(1, inverse2(block(w, 2, 2)))}) * Cascade::of(*c) *
                Cascade::ops(x) * m.cascade *
                Cascade::ops({LocalOp::general_op(1, inverse2(block(w, 1, 1)))});
  out.meta["shortcut"] = false;
  out.meta["intermediate_class"] = class_name(iv.cls);
  out.meta["intermediate_chi"] = iv.chi;
  return out;
}

}  // namespace

ModuleResult two_interface_module_cascade(const Component& a, const Component& b, double chi_ab,
                                          IfaceClass target_cls, FormKind out_form, const InterferenceOptions& opt,
                                          const Tolerances& tol) {
  require_active(a);
  require_active(b);
  if (out_form == FormKind::Standard) throw Error(ErrorKind::Parameter, "module output must be pre or post form");
  const NormalFormCert ca = to_squeezing_form(a.matrix, FormKind::PreSqueezing, tol);
  const NormalFormCert cb = to_squeezing_form(b.matrix, FormKind::PostSqueezing, tol);
  ModuleResult r;
  r.sol = solve_interference(ca.canonical.cls, cb.canonical.cls, ca.canonical.param, cb.canonical.param, chi_ab,
                             target_cls, opt, tol);
  r.cascade = interference_cascade(a, ca, b, cb, r.sol);
  r.cert = to_squeezing_form(r.cascade.matrix, out_form, tol);
  return r;
}

SynthPlan two_interface_module(const Component& a, const Component& b, double chi_ab, FormKind out_form,
                               std::optional<IfaceClass> target_cls, const Tolerances& tol) {
  const IfaceClass cls = target_cls ? *target_cls : class_for_chi(chi_ab, IfaceClass::BS, tol);
  ModuleResult m = two_interface_module_cascade(a, b, chi_ab, cls, out_form, {}, tol);
  const Invariants inv = restricted_invariants(m.cascade.matrix, tol);
  nlohmann::json meta;
  meta["form"] = cert_meta(m.cert);
  meta["form"]["ops_before_count"] = m.cert.ops_before.size();
  meta["form"]["ops_after_count"] = m.cert.ops_after.size();
  meta["form"]["residual"] = m.cert.residual;
  return finalize_plan(m.cascade, restricted_target(cls, chi_ab, inv.lambda, inv.kappa), library_of({&a, &b}), meta,
                       tol);
}

SynthPlan swap_restricted(const Component& a, const Component& b, const std::optional<Component>& c,
                          const Tolerances& tol) {
  Built bt = swap_restricted_built(a, b, c, tol);
  Target t = restricted_target(IfaceClass::SWAP, 1.0, std::nullopt, std::nullopt);
  t.matrix = std_swap();
  return finalize_plan(bt.cascade, t, library_of({&a, &b, c ? &*c : nullptr}), bt.meta, tol);
}

// ---- irreducible squeezing control ----

double lambda_a_formula(double Gamma, int X) {
  const double x = std::abs(static_cast<double>(X));
  return std::sqrt(x + Gamma + std::sqrt(Gamma * Gamma + 2 * x * Gamma));
}

bool unbounded_pair(IfaceClass ab, IfaceClass cd) {
  if (ab == IfaceClass::BS && cd == IfaceClass::BS) return true;
  const bool ta = ab == IfaceClass::TMS || ab == IfaceClass::sTMS;
  const bool tc = cd == IfaceClass::TMS || cd == IfaceClass::sTMS;
  return ta && tc;
}

double gamma_function(IfaceClass ab, IfaceClass cd, double chi_ab, double chi_cd, double gamma) {
  if (!chi_type(ab) || !chi_type(cd))
    throw Error(ErrorKind::Parameter, "Gamma is defined for BS/TMS/sTMS intermediate pairs only");
  const double chi = chi_ab + chi_cd - 2 * chi_ab * chi_cd;
  const double x = std::abs(1 - chi);
  const double p = std::abs(chi_ab * chi_cd);
  if (unbounded_pair(ab, cd)) {
    const double f = (gamma * gamma - 1) / gamma;
    return p * f * f / (2 * x);
  }
  // |T22|_F^2 = p (gamma^2 + 1/gamma^2) + 2 q, |det T22| = |1 - chi|.
  const double q = std::abs((1 - chi_ab) * (1 - chi_cd));
  return (p * (gamma * gamma + 1 / (gamma * gamma)) + 2 * q - 2 * x) / (2 * x);
}

GammaSolution gamma_for_lambda_a(double chi_ab, double chi_cd, double lambda_a) {
  if (!(lambda_a >= 1 - 1e-12)) throw Error(ErrorKind::Parameter, "Lambda_a must be >= 1");
  const double chi = chi_ab + chi_cd - 2 * chi_ab * chi_cd;
  GammaSolution g;
  g.X = 1 - chi >= 0 ? 1 : -1;
  g.lambda_a = std::max(1.0, lambda_a);
  const double y = g.lambda_a * g.lambda_a;
  g.Gamma = (y - 1) * (y - 1) / (2 * y);
  const double k = std::abs(chi_ab * chi_cd) / (2 * std::abs(1 - chi));
  const double w = g.Gamma / k;
  g.gamma = (std::sqrt(w) + std::sqrt(w + 4)) / 2;
  return g;
}

std::pair<double, double> split_chi(double chi_tgt) {
  const double chi_ab = (chi_tgt < 0 || (chi_tgt > 0 && chi_tgt <= 0.5)) ? chi_tgt / 2 : (1 + chi_tgt) / 2;
  return {chi_ab, (chi_tgt - chi_ab) / (1 - 2 * chi_ab)};
}

bool chi_ab_admissible(double chi_ab, double chi_tgt) {
  if (chi_tgt < 0 || (chi_tgt > 0.5 && chi_tgt < 1)) return chi_ab > chi_tgt;
  if ((chi_tgt > 0 && chi_tgt <= 0.5) || chi_tgt > 1) return chi_ab < chi_tgt;
  return false;
}

namespace {

struct Intermediate {
  Cascade cascade;
  NormalFormCert cert;
  std::vector<const Component*> used;
};

Intermediate module_intermediate(const Component& x, const Component& y, double chi, FormKind form,
                                 const Tolerances& tol) {
  ModuleResult m = two_interface_module_cascade(x, y, chi, class_for_chi(chi, IfaceClass::BS, tol), form, {}, tol);
  return {m.cascade, m.cert, {&x, &y}};
}

Built chi_lambda_built(const Component& a, const Component& b, const Component& c, const Component& d,
                       double chi_tgt, double lambda_tgt, const ChiLambdaOptions& opt, const Tolerances& tol) {
  if (!std::isfinite(chi_tgt) || std::abs(chi_tgt) <= tol.chi || std::abs(chi_tgt - 1) <= tol.chi)
    throw Error(ErrorKind::Parameter, "chi target must avoid 0 and 1");
  if (!(lambda_tgt >= 1 - 1e-12) || !std::isfinite(lambda_tgt))
    throw Error(ErrorKind::Parameter, "Lambda target must be >= 1");
  for (const Component* p : {&a, &b, &c, &d}) require_active(*p);
  lambda_tgt = std::max(1.0, lambda_tgt);

  Intermediate ab, cd;
  bool shortcut = false;
  if (opt.allow_shortcut) {
    // One component already strong enough: use it as AB directly.
    const Component* cand[] = {&a, &b};
    for (int i = 0; i < 2 && !shortcut; ++i) {
      const Component& x = *cand[i];
      const double cx = x.inv.chi;
      if (!chi_type(x.inv.cls) || !chi_ab_admissible(cx, chi_tgt) || std::abs(cx - 0.5) <= 1e-3) continue;
      const double ccd = (chi_tgt - cx) / (1 - 2 * cx);
      if (std::abs(ccd) <= 1e-6 || std::abs(ccd - 1) <= 1e-6) continue;
      if (!unbounded_pair(x.inv.cls, class_for_chi(ccd, IfaceClass::BS, tol))) continue;
      const Component& y = i == 0 ? b : c;
      const Component& z = i == 0 ? c : d;
      try {
        cd = module_intermediate(y, z, ccd, FormKind::PostSqueezing, tol);
      } catch (const Error&) {
        continue;
      }
      ab = {Cascade::of(x), to_squeezing_form(x.matrix, FormKind::PreSqueezing, tol), {&x}};
      shortcut = true;
    }
  }
  if (!shortcut) {
    const auto [chi_ab, chi_cd] = split_chi(chi_tgt);
    ab = module_intermediate(a, b, chi_ab, FormKind::PreSqueezing, tol);
    cd = module_intermediate(c, d, chi_cd, FormKind::PostSqueezing, tol);
  }
  const IfaceClass cls_ab = ab.cert.canonical.cls, cls_cd = cd.cert.canonical.cls;
  if (!unbounded_pair(cls_ab, cls_cd))
    throw Error(ErrorKind::Infeasible, std::string("intermediate pair ") + class_name(cls_ab) + "+" +
                                           class_name(cls_cd) + " has bounded irreducible squeezing");
  const double chi_ab = transmission_strength(ab.cascade.matrix);
  const double chi_cd = transmission_strength(cd.cascade.matrix);
  const double lam_ab = ab.cert.residual_lambda, lam_cd = cd.cert.residual_lambda;
  const double prod = lam_ab * lam_cd;
  const bool product = lambda_tgt >= prod;
  const GammaSolution gs = gamma_for_lambda_a(chi_ab, chi_cd, product ? lambda_tgt / prod : prod / lambda_tgt);

  const Mat4 u_ab = standard_interface(ab.cert.canonical);
  const Mat4 u_cd = standard_interface(cd.cert.canonical);
  const Mat4 tz = u_cd * embed(squeeze2(gs.gamma) * fourier2(), 1) * u_ab;
  const Svd2 s = svd2(block(tz, 2, 2));
  const double u = product ? -s.alpha : kPi / 2 - s.alpha;
  const double v = product ? -s.beta : -s.beta - kPi / 2;
  const RotationTransfer tl = transfer_left(cls_cd, u);
  const RotationTransfer tr = transfer_right(cls_ab, v);

  OpChain mid = cd.cert.ops_before;
  append(mid, {LocalOp::rotation(1, tl.m1), LocalOp::rotation(2, tl.m2), LocalOp::squeeze(1, gs.gamma),
               LocalOp::fourier(1), LocalOp::rotation(1, tr.m1), LocalOp::rotation(2, tr.m2)});
  append(mid, ab.cert.ops_after);

  Built out;
  out.cascade = cd.cascade * Cascade::ops(mid) * ab.cascade;
  nlohmann::json& m = out.meta;
  m["shortcut"] = shortcut;
  m["branch"] = product ? "product" : "quotient";
  m["chi_ab"] = chi_ab;
  m["chi_cd"] = chi_cd;
  m["lambda_ab"] = lam_ab;
  m["lambda_cd"] = lam_cd;
  m["lambda_a"] = gs.lambda_a;
  m["Gamma"] = gs.Gamma;
  m["gamma"] = gs.gamma;
  return out;
}

Built sqnd_built(const Component& a, const Component& b, const Component& c, const Component& d, double lambda_tgt,
                 const Tolerances& tol) {
  if (!std::isfinite(lambda_tgt) || lambda_tgt == 0) throw Error(ErrorKind::Parameter, "Lambda target must be nonzero");
  ModuleResult ab = two_interface_module_cascade(a, b, 1.0, IfaceClass::sQNDI, FormKind::PreSqueezing, {}, tol);
  ModuleResult cd = two_interface_module_cascade(c, d, 0.0, IfaceClass::QNDI, FormKind::PostSqueezing, {}, tol);
  const double lam_ab = ab.cert.residual_lambda;
  const double lam_cd = cd.cert.residual_lambda;
  const double phi = cd.cert.residual_rot;
  const double eta = cd.cert.canonical.param;
  if (!(std::abs(eta) > 1e-12)) throw Error(ErrorKind::Infeasible, "degenerate QND strength of CD");
  // Nonzero singular value of S(L) R(phi) diag(x, 0) is |x| f.
  const double f = std::hypot(lam_cd * std::cos(phi), std::sin(phi) / lam_cd);
  double s = lambda_tgt / f;
  double g = (s - lam_ab) / eta;
  if (std::abs(s - lam_ab) < 1e-3 * (std::abs(s) + std::abs(lam_ab))) {
    s = -s;
    g = (s - lam_ab) / eta;
  }
  OpChain mid = cd.cert.ops_before;
  mid.push_back(LocalOp::squeeze(1, g / lam_ab));
  append(mid, ab.cert.ops_after);
  Built out;
  out.cascade = cd.cascade * Cascade::ops(mid) * ab.cascade;
  out.meta["lambda_ab"] = lam_ab;
  out.meta["lambda_cd"] = lam_cd;
  out.meta["phi_cd"] = phi;
  out.meta["eta_cd"] = eta;
  out.meta["gamma"] = g;
  out.meta["lambda_sign"] = lambda_tgt < 0 ? -1 : 1;
  return out;
}

Built qnd_built(const Component& a, const Component& b, const Component& c, const Component& d, double lambda_tgt,
                double kappa_tgt, const Tolerances& tol) {
  if (!(lambda_tgt >= 1 - 1e-12) || !std::isfinite(lambda_tgt) || !std::isfinite(kappa_tgt))
    throw Error(ErrorKind::Parameter, "QNDI target needs Lambda >= 1 and finite kappa");
  const double lam = std::max(1.0, lambda_tgt);
  ModuleResult ab = two_interface_module_cascade(a, b, 1.0, IfaceClass::sQNDI, FormKind::PreSqueezing, {}, tol);
  ModuleResult cd = two_interface_module_cascade(c, d, 1.0, IfaceClass::sQNDI, FormKind::PreSqueezing, {}, tol);
  const double sa = ab.cert.residual_lambda, sb = cd.cert.residual_lambda;
  // SQ(sb) (R(u) S(lam) R(v) + R(pi/2)) SQ(sa) has Lambda = lam and kappa = kappa_tgt;
  // the pair (u, v) with the largest QND strength is kept.
  double best = -1, bu = 0, bv = 0;
  const double n = std::hypot(1.0, kappa_tgt * lam * lam);
  for (double u : {-std::atan(kappa_tgt), -std::atan(kappa_tgt) + kPi}) {
    for (double sg : {1.0, -1.0}) {
      const double v = std::atan2(sg / n, -sg * kappa_tgt * lam * lam / n);
      const double score = std::abs(-sb * std::cos(u) + sa * lam * std::sin(v));
      if (score > best) {
        best = score;
        bu = u;
        bv = v;
      }
    }
  }
  if (!(best > 1e-12)) throw Error(ErrorKind::Infeasible, "degenerate sQNDI strengths");
  OpChain mid = cd.cert.ops_before;
  append(mid, {LocalOp::general_op(1, rot2(bu) * squeeze2(lam) * rot2(bv)), LocalOp::rotation(2, kPi / 2),
               LocalOp::squeeze(1, 1 / sa)});
  append(mid, ab.cert.ops_after);
  Built out;
  out.cascade = cd.cascade * Cascade::ops(mid) * ab.cascade;
  out.meta["lambda_ab"] = sa;
  out.meta["lambda_cd"] = sb;
  out.meta["u"] = bu;
  out.meta["v"] = bv;
  out.meta["qnd_strength"] = best;
  return out;
}

}  // namespace

SynthPlan chi_lambda_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                            double chi_tgt, double lambda_tgt, const ChiLambdaOptions& opt, const Tolerances& tol) {
  Built bt = chi_lambda_built(a, b, c, d, chi_tgt, lambda_tgt, opt, tol);
  return finalize_plan(bt.cascade,
                       restricted_target(class_for_chi(chi_tgt, IfaceClass::BS, tol), chi_tgt, lambda_tgt, std::nullopt),
                       library_of({&a, &b, &c, &d}), bt.meta, tol);
}

SynthPlan sqnd_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                      double lambda_tgt, const Tolerances& tol) {
  Built bt = sqnd_built(a, b, c, d, lambda_tgt, tol);
  return finalize_plan(bt.cascade, restricted_target(IfaceClass::sQNDI, 1.0, std::abs(lambda_tgt), std::nullopt),
                       library_of({&a, &b, &c, &d}), bt.meta, tol);
}

SynthPlan qnd_synth4(const Component& a, const Component& b, const Component& c, const Component& d,
                     double lambda_tgt, double kappa_tgt, const Tolerances& tol) {
  Built bt = qnd_built(a, b, c, d, lambda_tgt, kappa_tgt, tol);
  return finalize_plan(bt.cascade, restricted_target(IfaceClass::QNDI, 0.0, lambda_tgt, kappa_tgt),
                       library_of({&a, &b, &c, &d}), bt.meta, tol);
}

// ---- remote squeezing ----

std::optional<double> squeeze_only_lambda(double chi_x, double chi_y, double chi_int) {
  const double n = 2 - chi_x - chi_y - chi_int;
  const double d = (1 - chi_x) * (1 - chi_y);
  const double xf = chi_x + chi_y - 2 * chi_x * chi_y;
  const double disc = (chi_int - xf) * (chi_int - xf) - 4 * chi_x * chi_y * d;
  if (disc < 0 || d == 0 || chi_int == 1) return std::nullopt;
  return (std::abs(n) + std::sqrt(disc)) / (2 * std::sqrt(std::abs(d)) * std::sqrt(std::abs(1 - chi_int)));
}

const char* scheme_name(RemoteScheme s) {
  switch (s) {
    case RemoteScheme::Auto: return "auto";
    case RemoteScheme::Four: return "four";
    case RemoteScheme::Five: return "five";
    case RemoteScheme::Six: return "six";
  }
  return "?";
}

RemoteScheme scheme_from_name(const std::string& s) {
  if (s == "auto") return RemoteScheme::Auto;
  if (s == "four" || s == "4") return RemoteScheme::Four;
  if (s == "five" || s == "5") return RemoteScheme::Five;
  if (s == "six" || s == "6") return RemoteScheme::Six;
  throw Error(ErrorKind::Parameter, "unknown remote squeezing scheme '" + s + "'");
}

namespace {

struct SqueezePair {
  const Component* x;
  const Component* y;
  NormalFormCert cx, cy;

  SqueezePair(const Component& a, const Component& b, const Tolerances& tol)
      : x(&a),
        y(&b),
        cx(to_squeezing_form(a.matrix, FormKind::PreSqueezing, tol)),
        cy(to_squeezing_form(b.matrix, FormKind::PostSqueezing, tol)) {}

  // ln of the canonical Lambda of the pair at chi for one branch of {l, 1/l}.
  std::optional<double> log_lambda(double chi, int branch) const {
    auto l = squeeze_only_lambda(x->inv.chi, y->inv.chi, chi);
    if (!l || !(*l > 0)) return std::nullopt;
    return std::abs(std::log(cx.residual_lambda) + std::log(cy.residual_lambda) + branch * std::log(*l));
  }

  // Squeeze-only cascade at chi whose Lambda is closest to want.
  std::optional<Cascade> build(double chi, double want, const Tolerances& tol) const {
    std::optional<Cascade> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& sol : squeeze_only_solutions(cx.canonical.cls, cy.canonical.cls, cx.canonical.param,
                                                  cy.canonical.param, chi)) {
      Cascade c = interference_cascade(*x, cx, *y, cy, sol);
      Invariants inv;
      try {
        inv = restricted_invariants(c.matrix, tol);
      } catch (const Error&) {
        continue;
      }
      const double err = std::abs(*inv.lambda - want) / want;
      if (err < best_err) {
        best_err = err;
        best = c;
      }
    }
    if (best_err > 1e-6) return std::nullopt;
    return best;
  }
};

struct ChiRoot {
  double chi;
  int b1, b2, e1, e2;
};

std::vector<ChiRoot> scan_intermediate_chi(const SqueezePair& ab, const SqueezePair& cd, double lambda_tgt) {
  const double target = std::log(lambda_tgt);
  std::vector<ChiRoot> roots;
  auto h = [&](double chi, int b1, int b2, int e1, int e2) -> std::optional<double> {
    auto la = ab.log_lambda(chi, b1);
    auto lc = cd.log_lambda(chi, b2);
    if (!la || !lc) return std::nullopt;
    return e1 * *la + e2 * *lc - target;
  };
  std::vector<double> grid;
  for (int i = 0; i <= 2400; ++i) {
    const double chi = std::sinh(-6.0 + 12.0 * i / 2400);
    if (std::abs(chi) > 1e-3 && std::abs(chi - 1) > 1e-3) grid.push_back(chi);
  }
  auto region = [](double chi) { return (chi > 0) + (chi > 1); };
  for (int b1 : {1, -1})
    for (int b2 : {1, -1})
      for (int e1 : {1, -1})
        for (int e2 : {1, -1}) {
          for (size_t i = 0; i + 1 < grid.size(); ++i) {
            double lo = grid[i], hi = grid[i + 1];
            if (region(lo) != region(hi)) continue;
            auto hl = h(lo, b1, b2, e1, e2), hh = h(hi, b1, b2, e1, e2);
            if (!hl || !hh || (*hl > 0) == (*hh > 0)) continue;
            double flo = *hl;
            bool ok = true;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
              const double mid = 0.5 * (lo + hi);
              auto hm = h(mid, b1, b2, e1, e2);
              if (!hm) {
                ok = false;
                break;
              }
              if (std::abs(*hm) <= 1e-12) {
                lo = hi = mid;
                break;
              }
              if ((*hm > 0) == (flo > 0)) {
                lo = mid;
                flo = *hm;
              } else {
                hi = mid;
              }
            }
            if (ok) roots.push_back({0.5 * (lo + hi), b1, b2, e1, e2});
          }
        }
  // Prefer intermediate strengths away from the class boundaries.
  std::stable_sort(roots.begin(), roots.end(), [](const ChiRoot& p, const ChiRoot& q) {
    auto cost = [](double c) { return std::abs(std::log(std::abs(c))) + std::abs(std::log(std::abs(1 - c))); };
    return cost(p.chi) < cost(q.chi);
  });
  return roots;
}

Built remote_four(const std::vector<Component>& comps, double lambda_tgt, const Tolerances& tol) {
  if (comps.size() < 4) throw Error(ErrorKind::Infeasible, "four-component scheme needs 4 components");
  for (int i = 0; i < 4; ++i)
    if (!chi_type(comps[i].inv.cls))
      throw Error(ErrorKind::Infeasible, "four-component scheme needs BS/TMS/sTMS components; '" + comps[i].id +
                                             "' is " + class_name(comps[i].inv.cls));
  const SqueezePair ab(comps[0], comps[1], tol), cd(comps[2], comps[3], tol);
  const Mat4 goal = embed(squeeze2(lambda_tgt), 2);
  auto roots = scan_intermediate_chi(ab, cd, lambda_tgt);
  int tried = 0;
  for (const ChiRoot& r : roots) {
    if (++tried > 24) break;
    const double lab = std::exp(*ab.log_lambda(r.chi, r.b1));
    const double lcd = std::exp(*cd.log_lambda(r.chi, r.b2));
    auto t_ab = ab.build(r.chi, lab, tol);
    auto t_cd = cd.build(r.chi, lcd, tol);
    if (!t_ab || !t_cd) continue;
    try {
      const double m_ab = *restricted_invariants(t_ab->matrix, tol).lambda;
      const double m_cd = *restricted_invariants(t_cd->matrix, tol).lambda;
      const double rho_ab = r.e1 > 0 ? m_ab : 1 / m_ab;
      const double rho_cd = r.e2 > 0 ? m_cd : 1 / m_cd;
      const StdSpec spec = to_standard_form(t_ab->matrix, tol).canonical;
      const Mat4 u = standard_interface(spec);
      const Conversion cab = local_conversion(t_ab->matrix, u * embed(squeeze2(rho_ab), 2), true, tol);
      const Conversion ccd = local_conversion(t_cd->matrix, embed(squeeze2(rho_cd), 2) * u, true, tol);
      const InverseOps inv = inverse_via_locals(spec);
      OpChain mid = ccd.before;
      append(mid, inv.before);
      append(mid, cab.after);
      OpChain outer = inv.after;
      append(outer, ccd.after);
      Built out;
      out.cascade = Cascade::ops(outer) * *t_cd * Cascade::ops(mid) * *t_ab * Cascade::ops(cab.before);
      if (max_abs(out.cascade.matrix - goal) > 1e-8 * std::max(1.0, lambda_tgt)) continue;
      out.meta["scheme"] = "four";
      out.meta["chi_int"] = r.chi;
      out.meta["lambda_ab"] = m_ab;
      out.meta["lambda_cd"] = m_cd;
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::Infeasible, "four-component scheme: no intermediate strength reaches the target");
}

Built remote_five(const std::vector<Component>& comps, double lambda_tgt, const Tolerances& tol) {
  if (comps.size() < 5) throw Error(ErrorKind::Infeasible, "five-component scheme needs 5 components");
  const Component& e = comps[4];
  require_active(e);
  const Mat4 v = inverse(e.matrix, tol) * embed(squeeze2(lambda_tgt), 2);
  const Invariants iv = restricted_invariants(v, tol);
  Built sub;
  switch (iv.cls) {
    case IfaceClass::QNDI: sub = qnd_built(comps[0], comps[1], comps[2], comps[3], *iv.lambda, *iv.kappa, tol); break;
    case IfaceClass::sQNDI: sub = sqnd_built(comps[0], comps[1], comps[2], comps[3], *iv.lambda, tol); break;
    default:
      sub = chi_lambda_built(comps[0], comps[1], comps[2], comps[3], iv.chi, *iv.lambda, {}, tol);
      break;
  }
  const Conversion conv = local_conversion(sub.cascade.matrix, v, true, tol);
  Built out;
  out.cascade = Cascade::of(e) * Cascade::ops(conv.after) * sub.cascade * Cascade::ops(conv.before);
  out.meta["scheme"] = "five";
  out.meta["intermediate_class"] = class_name(iv.cls);
  out.meta["intermediate"] = sub.meta;
  return out;
}

Built remote_six(const std::vector<Component>& comps, double lambda_tgt, const Tolerances& tol) {
  if (comps.size() < 6) throw Error(ErrorKind::Infeasible, "double-SWAP scheme needs 6 components");
  Built first = swap_restricted_built(comps[0], comps[1], comps[2], tol);
  Built second = swap_restricted_built(comps[3], comps[4], comps[5], tol);
  // SWAP S1(L) SWAP = S2(L)
  Built out;
  out.cascade = second.cascade * Cascade::ops({LocalOp::squeeze(1, lambda_tgt)}) * first.cascade;
  out.meta["scheme"] = "six";
  return out;
}

}  // namespace

SynthPlan remote_squeeze(const std::vector<Component>& comps, double lambda_tgt, RemoteScheme scheme,
                         const Tolerances& tol) {
  if (!(lambda_tgt > 0) || !std::isfinite(lambda_tgt))
    throw Error(ErrorKind::Parameter, "remote squeezing needs Lambda > 0");
  for (const auto& c : comps) require_active(c);
  std::vector<const Component*> ptrs;
  for (const auto& c : comps) ptrs.push_back(&c);
  Target t = restricted_target(IfaceClass::Identity, 0.0, std::max(lambda_tgt, 1 / lambda_tgt), std::nullopt);
  t.matrix = embed(squeeze2(lambda_tgt), 2);

  if (std::abs(lambda_tgt - 1) <= 1e-15) {
    nlohmann::json meta;
    meta["scheme"] = "trivial";
    return finalize_plan(Cascade{}, t, library_of_list(ptrs), meta, tol);
  }

  std::vector<RemoteScheme> order;
  if (scheme == RemoteScheme::Auto) order = {RemoteScheme::Four, RemoteScheme::Five, RemoteScheme::Six};
  else order = {scheme};
  std::ostringstream reasons;
  for (RemoteScheme s : order) {
    try {
      Built b = s == RemoteScheme::Four   ? remote_four(comps, lambda_tgt, tol)
                : s == RemoteScheme::Five ? remote_five(comps, lambda_tgt, tol)
                                          : remote_six(comps, lambda_tgt, tol);
      return finalize_plan(b.cascade, t, library_of_list(ptrs), b.meta, tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parameter && scheme != RemoteScheme::Auto) throw;
      reasons << (reasons.tellp() > 0 ? "; " : "") << scheme_name(s) << ": " << e.what();
    }
  }
  throw Error(ErrorKind::Infeasible, "remote squeezing infeasible (" + reasons.str() + ")");
}

}  // namespace iface
