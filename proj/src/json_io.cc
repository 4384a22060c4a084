#include "iface/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace iface {

namespace {

void dump_rec(const json& j, std::string& out, int indent) {
  const std::string pad(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent + 2);
      }
      out += "\n" + std::string(indent, ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Numeric rows stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && (e.is_number() || e.is_null());
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_rec(e, out, indent + 2);
      }
      out += flat ? "]" : "\n" + std::string(indent, ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default: out += j.dump(); return;
  }
}

double num(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::Validation, std::string(what) + " must be a number");
  return j.get<double>();
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const char* kind_name(OpKind k) {
  switch (k) {
    case OpKind::Rotation: return "rotation";
    case OpKind::Squeeze: return "squeeze";
    case OpKind::Fourier: return "fourier";
    case OpKind::Shear: return "shear";
    case OpKind::General: return "general";
  }
  return "?";
}

json mat2_to_json(const Mat2& m) { return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})}); }

Mat2 mat2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Validation, "2x2 matrix expected");
  Mat2 m;
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) throw Error(ErrorKind::Validation, "2x2 matrix expected");
    for (int c = 0; c < 2; ++c) m(r, c) = num(j[r][c], "matrix entry");
  }
  return m;
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += "\n";
  return out;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Validation, std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

json matrix_to_json(const Mat4& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2), m(r, 3)}));
  return rows;
}

Mat4 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::Validation, "matrix must have 4 rows");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw Error(ErrorKind::Validation, "matrix rows must have 4 entries");
    for (int c = 0; c < 4; ++c) m(r, c) = num(j[r][c], "matrix entry");
  }
  if (!m.allFinite()) throw Error(ErrorKind::Validation, "matrix entries must be finite");
  return m;
}

json interface_to_json(const Mat4& m) { return {{"matrix", matrix_to_json(m)}}; }

Mat4 interface_from_json(const json& j) {
  if (!j.is_object() || !j.contains("matrix")) throw Error(ErrorKind::Validation, "interface needs a \"matrix\" field");
  return matrix_from_json(j.at("matrix"));
}

json op_to_json(const LocalOp& op) {
  json j{{"mode", op.mode}, {"kind", kind_name(op.kind)}};
  if (op.kind == OpKind::General) j["param"] = mat2_to_json(op.general);
  else if (op.kind == OpKind::Fourier) j["param"] = nullptr;
  else j["param"] = op.param;
  return j;
}

LocalOp op_from_json(const json& j) {
  if (!j.is_object() || !j.contains("mode") || !j.contains("kind"))
    throw Error(ErrorKind::Validation, "op needs \"mode\" and \"kind\"");
  if (!j["mode"].is_number_integer()) throw Error(ErrorKind::Validation, "op mode must be 1 or 2");
  const int mode = j["mode"].get<int>();
  if (mode != 1 && mode != 2) throw Error(ErrorKind::Validation, "op mode must be 1 or 2");
  if (!j["kind"].is_string()) throw Error(ErrorKind::Validation, "op kind must be a string");
  const std::string kind = j["kind"].get<std::string>();
  const json param = j.value("param", json(nullptr));
  if (kind == "rotation") return LocalOp::rotation(mode, num(param, "rotation angle"));
  if (kind == "squeeze") {
    const double g = num(param, "squeeze factor");
    if (!(std::abs(g) >= kGammaMin)) throw Error(ErrorKind::DegenerateSqueeze, "squeeze factor too close to zero");
    return LocalOp::squeeze(mode, g);
  }
  if (kind == "fourier") return LocalOp::fourier(mode);
  if (kind == "shear") return LocalOp::shear(mode, num(param, "shear"));
  if (kind == "general") {
    const Mat2 m = mat2_from_json(param);
    if (std::abs(m.determinant() - 1) > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff() * m.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::Validation, "general op must have unit determinant");
    return LocalOp::general_op(mode, m);
  }
  throw Error(ErrorKind::Validation, "unknown op kind '" + kind + "'");
}

json chain_to_json(const OpChain& ops) {
  json a = json::array();
  for (const auto& op : ops) a.push_back(op_to_json(op));
  return a;
}

OpChain chain_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Validation, "op list must be an array");
  OpChain ops;
  for (const auto& e : j) ops.push_back(op_from_json(e));
  return ops;
}

json invariants_to_json(const Invariants& inv) {
  return {{"class", class_name(inv.cls)}, {"chi", inv.chi},      {"n_R", inv.n_R},
          {"n_T", inv.n_T},               {"lambda", opt_num(inv.lambda)}, {"kappa", opt_num(inv.kappa)}};
}

json cert_to_json(const NormalFormCert& c) {
  return {{"form", form_name(c.form)},
          {"canonical", {{"class", class_name(c.canonical.cls)}, {"param", c.canonical.param}}},
          {"ops_before", chain_to_json(c.ops_before)},
          {"ops_after", chain_to_json(c.ops_after)},
          {"lambda", c.residual_lambda},
          {"rotation", c.residual_rot},
          {"residual", c.residual}};
}

json target_to_json(const Target& t) {
  json j{{"class", class_name(t.cls)}, {"chi", t.chi}};
  if (t.restricted) {
    j["restricted_mode"] = 2;
    j["lambda"] = opt_num(t.lambda);
    j["kappa"] = opt_num(t.kappa);
  }
  if (t.matrix) j["matrix"] = matrix_to_json(*t.matrix);
  return j;
}

Target target_from_json(const json& j) {
  if (!j.is_object() || !j.contains("class")) throw Error(ErrorKind::Validation, "target needs a \"class\"");
  Target t;
  try {
    t.cls = class_from_name(j["class"].get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, e.what());
  } catch (const json::exception&) {
    throw Error(ErrorKind::Validation, "target class must be a string");
  }
  t.chi = num(j.value("chi", json(0.0)), "target chi");
  t.restricted = j.contains("restricted_mode") && !j["restricted_mode"].is_null();
  if (j.contains("lambda") && !j["lambda"].is_null()) t.lambda = num(j["lambda"], "target lambda");
  if (j.contains("kappa") && !j["kappa"].is_null()) t.kappa = num(j["kappa"], "target kappa");
  if (j.contains("matrix")) t.matrix = matrix_from_json(j["matrix"]);
  return t;
}

json plan_to_json(const SynthPlan& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    if (s.is_component) steps.push_back({{"component", s.component}});
    else steps.push_back({{"ops", chain_to_json(s.ops)}});
  }
  return {{"steps", steps},
          {"target", target_to_json(p.target)},
          {"achieved", matrix_to_json(p.achieved)},
          {"residual", p.residual},
          {"conditioning", p.conditioning},
          {"conditioning_warning", p.conditioning_warning},
          {"component_count", p.component_count()},
          {"meta", p.meta}};
}

SynthPlan plan_from_json(const json& j) {
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
    throw Error(ErrorKind::Validation, "plan needs a \"steps\" array");
  SynthPlan p;
  for (const auto& s : j["steps"]) {
    if (s.contains("component") && s["component"].is_string()) {
      p.steps.push_back({true, s["component"].get<std::string>(), {}});
    } else if (s.contains("ops")) {
      p.steps.push_back(PlanStep::of(chain_from_json(s["ops"])));
    } else {
      throw Error(ErrorKind::Validation, "plan step needs \"component\" or \"ops\"");
    }
  }
  if (j.contains("target")) p.target = target_from_json(j["target"]);
  if (j.contains("meta")) p.meta = j["meta"];
  return p;
}

Library LibraryFile::library() const {
  Library lib;
  for (const auto& c : components) lib[c.id] = c.matrix;
  return lib;
}

LibraryFile library_from_json(const json& j, const Tolerances& tol) {
  if (!j.is_object() || !j.contains("components") || !j["components"].is_object())
    throw Error(ErrorKind::Validation, "library needs a \"components\" object");
  LibraryFile lib;
  if (j.contains("restricted_mode") && !j["restricted_mode"].is_null()) {
    if (!j["restricted_mode"].is_number_integer() || j["restricted_mode"].get<int>() != 2)
      throw Error(ErrorKind::Validation, "restricted_mode must be null or 2");
    lib.restricted = true;
  }
  for (auto it = j["components"].begin(); it != j["components"].end(); ++it) {
    const Mat4 m = interface_from_json(it.value());
    if (!is_symplectic(m, tol)) throw Error(ErrorKind::Validation, "component '" + it.key() + "' is not symplectic");
    lib.components.push_back({it.key(), m, lib.restricted ? restricted_invariants(m, tol) : ranks_and_class(m, tol)});
  }
  return lib;
}

json library_to_json(const LibraryFile& lib) {
  json comps = json::object();
  for (const auto& c : lib.components) comps[c.id] = interface_to_json(c.matrix);
  return {{"components", comps}, {"restricted_mode", lib.restricted ? json(2) : json(nullptr)}};
}

json fuzz_report_to_json(const FuzzReport& r) {
  json dev{{"chi", r.max_dev_chi}};
  if (r.max_dev_lambda) dev["lambda"] = *r.max_dev_lambda;
  if (r.max_dev_kappa) dev["kappa"] = *r.max_dev_kappa;
  return {{"n", r.n},
          {"restricted", r.restricted},
          {"class", class_name(r.cls)},
          {"class_stable", r.class_stable},
          {"invariants", {{"chi", r.chi}, {"lambda", opt_num(r.lambda)}, {"kappa", opt_num(r.kappa)}}},
          {"max_deviation", dev},
          {"tolerance", kFuzzTolerance},
          {"worst_trial", r.worst_trial},
          {"worst_dressing", {{"after", chain_to_json(r.worst.after)}, {"before", chain_to_json(r.worst.before)}}},
          {"pass", r.pass}};
}

json verdict_to_json(const FeasibilityVerdict& v) {
  return {{"feasible", v.feasible}, {"condition", v.condition}, {"citation", v.citation}};
}

}  // namespace iface
