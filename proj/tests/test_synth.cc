#include "iface/synth.h"
#include "oracles.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace iface;

namespace {

const IfaceClass kActive[] = {IfaceClass::QNDI, IfaceClass::TMS, IfaceClass::BS, IfaceClass::sTMS, IfaceClass::sQNDI};

Component dressed(std::mt19937_64& rng, IfaceClass c, const std::string& id) {
  return make_component(id, random_local4(rng, 1) * random_standard(rng, c) * random_local4(rng, 1));
}

double chi_of(const SynthPlan& p) { return transmission_strength(p.achieved); }

}  // namespace

TEST(SolveInterference, TmsThenBeamSplitterToSTms) {
  const double r = std::asinh(1.0), th = kPi / 4;  // chi_A = -1, chi_B = 0.5
  const InterferenceSolution s = solve_interference(IfaceClass::TMS, IfaceClass::BS, r, th, 2.0, IfaceClass::sTMS);
  EXPECT_NEAR(s.x_f, 0.5, 1e-15);
  EXPECT_NEAR(s.z, 1.5, 1e-15);
  EXPECT_NEAR(s.gamma, 2.5184, 5e-5);
  // Oracle: root of det T21(gamma) = 2 for the squeeze-only configuration.
  const double g = oracle::bisect(
      [&](double x) { return oracle::chi(oracle::two_interface(oracle::tms(r), oracle::bs(th), x, s.phi1, 0, 0)) - 2; },
      1.0, 10.0);
  EXPECT_NEAR(s.gamma, g, 1e-12);
  EXPECT_NEAR(s.gamma, 2.518398145491147, 1e-12);
}

TEST(SolveInterference, QndPairToTms) {
  const double ea = 1.3, eb = -0.7;
  const InterferenceSolution s = solve_interference(IfaceClass::QNDI, IfaceClass::QNDI, ea, eb, -2.0, IfaceClass::TMS);
  EXPECT_NEAR(s.phi1, kPi / 2, 1e-15);
  // The second quarter turn carries the sign of chi / (eta_A eta_B).
  EXPECT_NEAR(std::abs(s.phi2), kPi / 2, 1e-15);
  EXPECT_NEAR(s.gamma, std::abs(ea * eb) / 2, 1e-15);
  const Mat4 t = oracle::two_interface(oracle::qndi(ea), oracle::qndi(eb), s.gamma, s.phi1, s.phi2, s.eps);
  EXPECT_NEAR(oracle::chi(t), -2.0, 1e-13);
}

TEST(SolveInterference, BeamSplittersAtFreeStrength) {
  const double ta = 0.3, tb = 0.9;
  const double xa = std::pow(std::sin(ta), 2), xb = std::pow(std::sin(tb), 2);
  const double xf = xa + xb - 2 * xa * xb;
  const InterferenceSolution s = solve_interference(IfaceClass::BS, IfaceClass::BS, ta, tb, xf, IfaceClass::BS);
  EXPECT_EQ(s.gamma, 1.0);
  EXPECT_NEAR(s.phi1, kPi / 2, 1e-12);
  EXPECT_NEAR(s.z, 0.0, 1e-15);
}

TEST(SolveInterference, ChiEqualsFreePlusInterference) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5, 5);
  for (IfaceClass a : kActive)
    for (IfaceClass b : kActive)
      for (int i = 0; i < 20; ++i) {
        const double chi = u(rng);
        if (std::abs(chi) < 1e-3 || std::abs(chi - 1) < 1e-3) continue;
        const StdSpec sa = random_spec(rng, a), sb = random_spec(rng, b);
        const IfaceClass tc = class_for_chi(chi, IfaceClass::BS);
        const InterferenceSolution s = solve_interference(a, b, sa.param, sb.param, chi, tc);
        const Mat4 t = standard_interface(sb) * chain_matrix(s.local_ops()) * standard_interface(sa);
        EXPECT_NEAR(transmission_strength(t), chi, 1e-9 * std::max(1.0, std::abs(chi)));
      }
}

TEST(TwoInterfaceSynth, SameBeamSplittersToQndi) {
  const Component a = make_component("A", std_bs(0.4)), b = make_component("B", std_bs(0.4));
  const SynthPlan p = two_interface_synth(a, b, IfaceClass::QNDI, 0.0);
  const auto& sol = p.meta.at("solution");
  EXPECT_TRUE(sol.at("special").get<bool>());
  const double phi = sol.at("phi1").get<double>();
  EXPECT_NEAR(phi, 0.6, 1e-15);
  EXPECT_NEAR(sol.at("gamma").get<double>(), std::tan(phi) - 1 / std::cos(phi), 1e-15);
  const Invariants inv = ranks_and_class(p.achieved);
  EXPECT_EQ(inv.cls, IfaceClass::QNDI);
  EXPECT_EQ(inv.n_T, 1);
  EXPECT_NEAR(inv.chi, 0.0, 1e-12);
}

TEST(TwoInterfaceSynth, ComplementaryBeamSplittersToSwap) {
  const double th = 0.35;
  const Component a = make_component("A", std_bs(th)), b = make_component("B", std_bs(kPi / 2 - th));
  const SynthPlan p = two_interface_synth(a, b, IfaceClass::SWAP, 1.0);
  EXPECT_LE(max_abs(p.achieved - std_swap()), 1e-9);
  EXPECT_LE(oracle::reflection_norm(p.achieved), 1e-9);
}

TEST(TwoInterfaceSynth, TmsWithQndiToBeamSplitter) {
  const Component a = make_component("A", std_tms(0.6)), b = make_component("B", std_qndi(1.0));
  const SynthPlan p = two_interface_synth(a, b, IfaceClass::BS, 0.3);
  EXPECT_LE(p.residual, 1e-8);
  EXPECT_NEAR(chi_of(p), 0.3, 1e-8);
  EXPECT_EQ(p.component_count(), 2);
}

TEST(TwoInterfaceSynth, InfeasibleDecoupledTargets) {
  const Component a = make_component("A", std_bs(0.3)), b = make_component("B", std_bs(0.5));
  try {
    two_interface_synth(a, b, IfaceClass::Identity, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("same strength"), std::string::npos);
  }
  const Component t = make_component("T", std_tms(0.5));
  try {
    two_interface_synth(a, t, IfaceClass::SWAP, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("must be complemented"), std::string::npos);
  }
}

TEST(TwoInterfaceSynth, RandomPairsHitChi) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> pick(0, 4);
  int n = 0;
  while (n < 500) {
    const double chi = u(rng);
    if (std::abs(chi) < 1e-3 || std::abs(chi - 1) < 1e-3) continue;
    const Component a = dressed(rng, kActive[pick(rng)], "A"), b = dressed(rng, kActive[pick(rng)], "B");
    const SynthPlan p = two_interface_synth(a, b, class_for_chi(chi, IfaceClass::BS), chi);
    EXPECT_NEAR(chi_of(p), chi, 1e-8 * std::max(1.0, std::abs(chi))) << a.inv.chi << " " << b.inv.chi;
    ++n;
  }
}

TEST(TwoInterfaceSynth, RankDeficientTargetsHaveExactRanks) {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int i = 0; i < 200; ++i) {
    const Component a = dressed(rng, kActive[pick(rng)], "A"), b = dressed(rng, kActive[pick(rng)], "B");
    const bool q = i % 2 == 0;
    const SynthPlan p = two_interface_synth(a, b, q ? IfaceClass::QNDI : IfaceClass::sQNDI, q ? 0.0 : 1.0);
    const Invariants inv = ranks_and_class(p.achieved);
    if (q) EXPECT_EQ(inv.n_T, 1);
    else EXPECT_EQ(inv.n_R, 1);
  }
}

TEST(InverseViaLocals, AllClasses) {
  std::mt19937_64 rng(27);
  for (IfaceClass c : kActive)
    for (int i = 0; i < 20; ++i) {
      const StdSpec s = random_spec(rng, c);
      const InverseOps inv = inverse_via_locals(s);
      const Mat4 u = standard_interface(s);
      EXPECT_LE(max_abs(chain_matrix(inv.after) * u * chain_matrix(inv.before) - inverse(u)), 1e-12);
    }
  // Beam splitter: a half turn on each side flips the angle.
  const InverseOps b = inverse_via_locals({IfaceClass::BS, 0.3});
  EXPECT_LE(max_abs(chain_matrix(b.after) * std_bs(0.3) * chain_matrix(b.before) - std_bs(-0.3)), 1e-15);
  EXPECT_TRUE(inverse_via_locals({IfaceClass::SWAP, 0}).before.empty());
}

TEST(ThreeInterface, IdentityExamples) {
  const Component a = make_component("A", std_bs(0.3)), b = make_component("B", std_bs(0.3)),
                  c = make_component("C", std_bs(0.3));
  SynthPlan p = identity_synth3(a, b, c);
  EXPECT_LE(p.residual, 1e-8);
  EXPECT_LE(p.component_count(), 3);

  p = identity_synth3(make_component("A", std_tms(0.5)), make_component("B", std_qndi(1.0)),
                      make_component("C", std_bs(0.7)));
  EXPECT_LE(p.residual, 1e-8);

  p = identity_synth3(a, b, std::nullopt);
  EXPECT_TRUE(p.meta.at("shortcut").get<bool>());
  EXPECT_EQ(p.component_count(), 2);
  EXPECT_LE(p.residual, 1e-8);
}

TEST(ThreeInterface, SwapExamples) {
  const Component a = make_component("A", std_bs(kPi / 6)), b = make_component("B", std_bs(kPi / 6)),
                  c = make_component("C", std_bs(kPi / 6));
  SynthPlan p = swap_synth3(a, b, c);
  EXPECT_LE(p.residual, 1e-8);

  p = swap_synth3(make_component("A", std_qndi(2.0)), make_component("B", std_bs(0.4)),
                  make_component("C", std_tms(0.3)));
  EXPECT_LE(p.residual, 1e-8);

  p = swap_synth3(make_component("A", std_bs(0.2)), make_component("B", std_bs(kPi / 2 - 0.2)), std::nullopt);
  EXPECT_TRUE(p.meta.at("shortcut").get<bool>());
  EXPECT_LE(p.residual, 1e-8);
}

TEST(ThreeInterface, RandomTriples) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int i = 0; i < 200; ++i) {
    const Component a = dressed(rng, kActive[pick(rng)], "A"), b = dressed(rng, kActive[pick(rng)], "B"),
                    c = dressed(rng, kActive[pick(rng)], "C");
    const SynthPlan p = i % 2 ? identity_synth3(a, b, c) : swap_synth3(a, b, c);
    EXPECT_LE(p.residual, 1e-7);
    EXPECT_LE(p.conditioning, 20.0);
    EXPECT_LE(p.component_count(), 3);
  }
}

TEST(ThreeInterface, OptimalityWitnessGridFloor) {
  // No two-interface control maps BS(0.3)+TMS(0.5) onto the identity.
  const oracle::GridMin g = oracle::grid_minimum(std_bs(0.3), std_tms(0.5), 4,
                                                 [](const oracle::M4& t) { return oracle::max_abs(t - oracle::M4::Identity()); });
  EXPECT_GE(g.value, 0.1);
  EXPECT_NEAR(g.value, 0.698046, 1e-5);
}

TEST(LocalConversion, MapsBetweenDressings) {
  std::mt19937_64 rng(31);
  for (IfaceClass c : kActive)
    for (bool restricted : {false, true}) {
      const Mat4 u = random_standard(rng, c);
      const Mat4 x = random_local4(rng, 1) * u * random_local4(rng, 1);
      Mat4 y = random_local4(rng, 1) * u * random_local4(rng, 1);
      if (restricted) {
        // same Lambda: dress x with mode-1 ops and mode-2 rotations only
        std::uniform_real_distribution<double> ang(0, 6);
        y = local(random_local2(rng, 1), rot2(ang(rng))) * x * local(random_local2(rng, 1), rot2(ang(rng)));
      }
      const Conversion cv = local_conversion(x, y, restricted);
      EXPECT_LE(cv.residual, 1e-8 * std::max(1.0, sigma_max(y)));
    }
}
