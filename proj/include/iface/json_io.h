// JSON forms of interfaces, ops, invariants, plans, libraries and reports.
#pragma once

#include "iface/verify.h"

#include <json.hpp>

#include <string>
#include <vector>

namespace iface {

using nlohmann::json;

// Deterministic text: sorted keys, two-space indent, floats with 17 significant digits.
std::string dump_json(const json& j);
json parse_json_text(const std::string& text);  // Validation error on malformed input
json read_json_file(const std::string& path);

json matrix_to_json(const Mat4& m);
Mat4 matrix_from_json(const json& j);
json interface_to_json(const Mat4& m);
Mat4 interface_from_json(const json& j);  // {"matrix": ...}; symplecticity is checked by callers

json op_to_json(const LocalOp& op);
LocalOp op_from_json(const json& j);
json chain_to_json(const OpChain& ops);
OpChain chain_from_json(const json& j);

json invariants_to_json(const Invariants& inv);
json cert_to_json(const NormalFormCert& c);

json target_to_json(const Target& t);
Target target_from_json(const json& j);
json plan_to_json(const SynthPlan& p);
// Steps and target only; achieved and residual are recomputed by the caller.
SynthPlan plan_from_json(const json& j);

struct LibraryFile {
  std::vector<Component> components;  // sorted by id
  bool restricted = false;            // "restricted_mode": 2
  Library library() const;
};
LibraryFile library_from_json(const json& j, const Tolerances& tol = {});
json library_to_json(const LibraryFile& lib);

json fuzz_report_to_json(const FuzzReport& r);
json verdict_to_json(const FeasibilityVerdict& v);

}  // namespace iface
