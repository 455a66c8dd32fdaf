#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cqmkit/contextuality.hpp"
#include "cqmkit/dynamics.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/hbb.hpp"
#include "cqmkit/mermin.hpp"

namespace cqmkit {

// insertion-ordered so reports serialize with stable field order
using Json = nlohmann::ordered_json;

std::string rat_string(const Rat& r);             // "p/q" or plain integer
Rat rat_from_string(const std::string& s);        // accepts p/q, integer, decimal
std::string double_string(double v);              // %.17g, -0 canonicalized

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json law_report_to_json(const LawReport& r);

// {"parties", "choices", "outcome_group", "contexts", "tables": {"<ctx>":
// {"g1,g2,...": "<weight>"}}, "exact"}; weights are rational strings when
// exact, decimals otherwise
Json model_to_json(const EmpiricalModel& em);
EmpiricalModel model_from_json(const Json& j);

// {"group", "system": [{"coeffs", "rhs"}], "N"?, "theory"?}; the theory, when
// present, gates realizability inside build_argument and is also returned
MerminArgument argument_from_json(const Json& j, const Theory** theory_out = nullptr);

// {"T", "dim", "U1": [[entry,...],...]}; entries are numbers or [re, im]
PeriodicRep rep_from_json(const Json& j);
// {"T", "gates": [[[entry,...],...],...]}
CyclicCircuit circuit_from_json(const Json& j);

// {"module"?, "equations": [{"context", "coeffs", "rhs"}]}; rhs coords are in
// the module (default: the model's outcome group)
std::pair<std::vector<AvnEquation>, std::optional<FinAbGroup>> avn_equations_from_json(
    const Json& j);

Json transcript_to_json(const Transcript& t);

Json json_from_file(const std::string& path);  // Error Usage on IO/parse failure

}  // namespace cqmkit
