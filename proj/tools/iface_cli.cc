// iface-cli: classify interfaces, synthesize and verify plans over JSON files.
#include "iface/json_io.h"
#include "iface/restricted.h"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>

using namespace iface;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitAmbiguity = 3;
constexpr int kExitInfeasible = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Ambiguity: return kExitAmbiguity;
    case ErrorKind::Infeasible:
    case ErrorKind::Inconsistent: return kExitInfeasible;
    default: return kExitInput;
  }
}

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) out.push_back(id);
  return out;
}

// Components in the requested order, or the library order (sorted ids).
std::vector<Component> select(const LibraryFile& lib, const std::string& order) {
  if (order.empty()) return lib.components;
  std::vector<Component> out;
  for (const auto& id : split_ids(order)) {
    auto it = std::find_if(lib.components.begin(), lib.components.end(), [&](const Component& c) { return c.id == id; });
    if (it == lib.components.end()) throw Error(ErrorKind::UnknownComponent, "unknown component id '" + id + "'");
    out.push_back(*it);
  }
  return out;
}

void need(const std::vector<Component>& c, size_t n, const std::string& what) {
  if (c.size() < n)
    throw Error(ErrorKind::Parameter, what + " needs at least " + std::to_string(n) + " components, library has " +
                                          std::to_string(c.size()));
}

std::optional<Component> third(const std::vector<Component>& c) {
  return c.size() >= 3 ? std::optional<Component>(c[2]) : std::nullopt;
}

struct SynthArgs {
  std::string library, target, scheme = "auto", order;
  std::optional<double> chi, lambda, kappa;
  bool restricted = false;
};

SynthPlan run_synth(const SynthArgs& a, const Tolerances& tol) {
  const LibraryFile lib = library_from_json(read_json_file(a.library), tol);
  const bool restricted = a.restricted || lib.restricted;
  IfaceClass cls;
  try {
    cls = class_from_name(a.target);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parameter, e.what());
  }
  if (a.kappa && cls != IfaceClass::QNDI) throw Error(ErrorKind::Parameter, "--kappa applies to QNDI targets only");
  if (a.lambda && !restricted) throw Error(ErrorKind::Parameter, "--lambda requires --restricted");
  if (a.kappa && !restricted) throw Error(ErrorKind::Parameter, "--kappa requires --restricted");
  double chi = 0;
  switch (cls) {
    case IfaceClass::Identity:
    case IfaceClass::QNDI: chi = 0; break;
    case IfaceClass::SWAP:
    case IfaceClass::sQNDI: chi = 1; break;
    default:
      if (!a.chi) throw Error(ErrorKind::Parameter, std::string("--chi is required for ") + class_name(cls));
      chi = *a.chi;
  }
  if (a.chi && std::abs(*a.chi - chi) > 0 && (cls == IfaceClass::Identity || cls == IfaceClass::QNDI ||
                                              cls == IfaceClass::SWAP || cls == IfaceClass::sQNDI))
    throw Error(ErrorKind::Parameter, std::string("--chi inconsistent with ") + class_name(cls));
  if (class_for_chi(chi, cls, tol) != cls)
    throw Error(ErrorKind::Parameter, std::string("--chi inconsistent with ") + class_name(cls));

  const std::vector<Component> c = select(lib, a.order);
  if (!restricted) {
    need(c, 2, "synthesis");
    if (cls == IfaceClass::Identity) return identity_synth3(c[0], c[1], third(c), tol);
    if (cls == IfaceClass::SWAP) return swap_synth3(c[0], c[1], third(c), tol);
    return two_interface_synth(c[0], c[1], cls, chi, {}, tol);
  }
  switch (cls) {
    case IfaceClass::Identity: return remote_squeeze(c, a.lambda.value_or(1.0), scheme_from_name(a.scheme), tol);
    case IfaceClass::SWAP: need(c, 2, "restricted SWAP"); return swap_restricted(c[0], c[1], third(c), tol);
    case IfaceClass::sQNDI:
      need(c, 4, "restricted sQNDI");
      return sqnd_synth4(c[0], c[1], c[2], c[3], a.lambda.value_or(1.0), tol);
    case IfaceClass::QNDI:
      need(c, 4, "restricted QNDI");
      return qnd_synth4(c[0], c[1], c[2], c[3], a.lambda.value_or(1.0), a.kappa.value_or(0.0), tol);
    default:
      need(c, 4, "restricted BS/TMS/sTMS");
      return chi_lambda_synth4(c[0], c[1], c[2], c[3], chi, a.lambda.value_or(1.0), {}, tol);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode Gaussian interface classification and synthesis"};
  app.require_subcommand(1);
  app.fallthrough();
  double tau = 1e-7;
  std::uint64_t seed = 1;
  app.add_option("--tol", tau, "residual tolerance for synth/verify")->envname("IFACE_TOL");
  app.add_option("--seed", seed, "seed for fuzzing")->envname("IFACE_SEED");

  std::string classify_path;
  bool classify_restricted = false;
  auto* cl = app.add_subcommand("classify", "print invariants of an interface");
  cl->add_option("interface", classify_path, "interface JSON")->required();
  cl->add_flag("--restricted", classify_restricted, "mode 2 admits rotations only");

  SynthArgs sa;
  double chi = 0, lambda = 0, kappa = 0;
  auto* sy = app.add_subcommand("synth", "synthesize a plan from a component library");
  sy->add_option("library", sa.library, "library JSON")->required();
  sy->add_option("--target", sa.target, "target class")->required();
  auto* o_chi = sy->add_option("--chi", chi, "target transmission strength");
  auto* o_lambda = sy->add_option("--lambda", lambda, "target irreducible squeezing (restricted)");
  auto* o_kappa = sy->add_option("--kappa", kappa, "target shear (restricted QNDI)");
  sy->add_flag("--restricted", sa.restricted, "mode 2 admits rotations only");
  sy->add_option("--scheme", sa.scheme, "remote squeezing scheme: auto|four|five|six");
  sy->add_option("--components", sa.order, "comma-separated component ids in cascade order");

  std::string plan_path, verify_lib;
  int fuzz = 0;
  auto* ve = app.add_subcommand("verify", "recompose a plan and check it against its target");
  ve->add_option("plan", plan_path, "plan JSON")->required();
  ve->add_option("library", verify_lib, "library JSON")->required();
  ve->add_option("--fuzz", fuzz, "number of invariance fuzz trials on the achieved interface");

  std::string feas_lib, feas_target, feas_order;
  auto* fe = app.add_subcommand("feasible", "two-interface feasibility verdict");
  fe->add_option("library", feas_lib, "library JSON")->required();
  fe->add_option("--target", feas_target, "target class")->required();
  fe->add_option("--components", feas_order, "the two component ids, comma-separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  const Tolerances tol;
  try {
    if (*cl) {
      const Mat4 m = interface_from_json(read_json_file(classify_path));
      require_symplectic(m, tol);
      try {
        const Invariants inv = classify_restricted ? restricted_invariants(m, tol) : ranks_and_class(m, tol);
        std::cout << dump_json(invariants_to_json(inv));
      } catch (const AmbiguityError& e) {
        json cands = json::array();
        for (IfaceClass c : e.candidates()) cands.push_back(class_name(c));
        std::cout << dump_json({{"error", "ambiguity"}, {"message", e.what()}, {"candidates", cands}});
        std::cerr << e.what() << "\n";
        return kExitAmbiguity;
      }
      return kExitOk;
    }
    if (*sy) {
      if (o_chi->count()) sa.chi = chi;
      if (o_lambda->count()) sa.lambda = lambda;
      if (o_kappa->count()) sa.kappa = kappa;
      const SynthPlan p = run_synth(sa, tol);
      std::cout << dump_json(plan_to_json(p));
      if (!(p.residual <= tau)) std::cerr << "warning: residual " << p.residual << " exceeds tolerance " << tau << "\n";
      if (p.conditioning_warning) std::cerr << "warning: conditioning " << p.conditioning << " exceeds limit\n";
      return kExitOk;
    }
    if (*ve) {
      const SynthPlan plan = plan_from_json(read_json_file(plan_path));
      const LibraryFile lib = library_from_json(read_json_file(verify_lib), tol);
      const Simulation sim = simulate(plan.steps, lib.library(), tol);
      const double residual = invariant_distance(sim.matrix, plan.target, tol);
      json report{{"residual", residual}, {"tolerance", tau}, {"achieved", matrix_to_json(sim.matrix)}};
      bool pass = residual <= tau;
      if (fuzz > 0) {
        const FuzzReport fr = invariance_fuzz(sim.matrix, fuzz, plan.target.restricted, seed, tol);
        report["fuzz"] = fuzz_report_to_json(fr);
        pass = pass && fr.pass;
      }
      report["pass"] = pass;
      std::cout << dump_json(report);
      std::cerr << (pass ? "PASS" : "FAIL") << " residual " << residual << "\n";
      return pass ? kExitOk : kExitFail;
    }
    if (*fe) {
      const LibraryFile lib = library_from_json(read_json_file(feas_lib), tol);
      const std::vector<Component> c = select(lib, feas_order);
      need(c, 2, "feasibility");
      const FeasibilityVerdict v = feasibility_two_interface(c[0].inv, c[1].inv, class_from_name(feas_target));
      std::cout << dump_json(verdict_to_json(v));
      return v.feasible ? kExitOk : kExitInfeasible;
    }
  } catch (const AmbiguityError& e) {
    std::cerr << "ambiguity: " << e.what() << "\n";
    return kExitAmbiguity;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
