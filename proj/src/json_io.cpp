#include "cqmkit/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqmkit/error.hpp"

namespace cqmkit {

namespace {

std::vector<long long> parse_tuple(const std::string& key) {
  std::vector<long long> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      raise(ErrorCode::Usage, "bad outcome tuple key '" + key + "'");
    }
  }
  if (out.empty()) raise(ErrorCode::Usage, "empty outcome tuple key");
  return out;
}

std::string tuple_string(const std::vector<long long>& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i]);
  }
  return out;
}

Scalar complex_entry(const Json& e) {
  const Theory* ct = Theory::complex_theory();
  if (e.is_number()) return Scalar::complex(e.get<double>(), 0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Scalar::complex(e[0].get<double>(), e[1].get<double>());
  if (e.is_string()) return Scalar::parse(ct, e.get<std::string>());
  raise(ErrorCode::Usage, "matrix entries must be numbers, [re, im] pairs, or strings");
}

Mat complex_rows(const Json& rows, std::size_t expect_rows, std::size_t expect_cols,
                 const char* what) {
  if (!rows.is_array() || rows.size() != expect_rows)
    raise(ErrorCode::Usage, std::string(what) + ": expected " + std::to_string(expect_rows) +
                                " rows");
  Mat m(Theory::complex_theory(), expect_rows, expect_cols);
  for (std::size_t r = 0; r < expect_rows; ++r) {
    if (!rows[r].is_array() || rows[r].size() != expect_cols)
      raise(ErrorCode::Usage, std::string(what) + ": row " + std::to_string(r) + " needs " +
                                  std::to_string(expect_cols) + " entries");
    for (std::size_t c = 0; c < expect_cols; ++c) m.set(r, c, complex_entry(rows[r][c]));
  }
  return m;
}

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) raise(ErrorCode::Usage, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception&) {
    raise(ErrorCode::Usage, std::string("bad value for field '") + name + "'");
  }
}

}  // namespace

std::string rat_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rat rat_from_string(const std::string& s) {
  if (auto r = parse_rational(s)) return *r;
  raise(ErrorCode::Usage, "cannot parse rational '" + s + "'");
}

std::string double_string(double v) {
  if (v == 0) v = 0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json mat_to_json(const Mat& m) {
  Json j;
  j["theory"] = m.theory()->spec_string();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json entries = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) entries.push_back(m.at(r, c).str());
  j["entries"] = entries;
  return j;
}

Mat mat_from_json(const Json& j) {
  const Theory* t = Theory::parse(field<std::string>(j, "theory"));
  auto rows = field<std::size_t>(j, "rows");
  auto cols = field<std::size_t>(j, "cols");
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != rows * cols)
    raise(ErrorCode::Usage, "entry count does not match rows*cols");
  Mat m(t, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m.set(r, c, Scalar::parse(t, entries[r * cols + c].get<std::string>()));
  return m;
}

Json law_report_to_json(const LawReport& r) {
  Json j;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["residual"] = double_string(c.residual);
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["normalization"] = r.normalization.str();
  j["all_pass"] = r.all_pass();
  return j;
}

Json model_to_json(const EmpiricalModel& em) {
  Json j;
  j["parties"] = em.scenario.parties;
  j["choices"] = em.scenario.choices;
  j["outcome_group"] = em.scenario.outcome_group.spec_string();
  j["contexts"] = em.scenario.contexts;
  Json tables = Json::object();
  for (std::size_t c = 0; c < em.tables.size(); ++c) {
    Json table = Json::object();
    for (const auto& [tuple, w] : em.tables[c]) {
      table[tuple_string(tuple)] = em.exact ? rat_string(w) : double_string(rat_to_double(w));
    }
    tables[std::to_string(c)] = table;
  }
  j["tables"] = tables;
  j["exact"] = em.exact;
  return j;
}

EmpiricalModel model_from_json(const Json& j) {
  EmpiricalModel em{Scenario{field<std::size_t>(j, "parties"),
                             field<std::vector<std::size_t>>(j, "choices"),
                             FinAbGroup::parse(field<std::string>(j, "outcome_group")),
                             field<std::vector<std::vector<std::size_t>>>(j, "contexts")},
                    {},
                    true};
  em.tables.resize(em.scenario.contexts.size());
  if (!j.contains("tables") || !j.at("tables").is_object())
    raise(ErrorCode::Usage, "missing field 'tables'");
  bool saw_decimal = false;
  for (const auto& [key, table] : j.at("tables").items()) {
    std::size_t c = 0;
    try {
      c = std::stoull(key);
    } catch (const std::exception&) {
      raise(ErrorCode::Usage, "table keys must be context indices, got '" + key + "'");
    }
    if (c >= em.tables.size()) raise(ErrorCode::Usage, "table index " + key + " out of range");
    if (!table.is_object()) raise(ErrorCode::Usage, "table " + key + " must be an object");
    for (const auto& [tkey, w] : table.items()) {
      std::string ws = w.is_string() ? w.get<std::string>() : w.dump();
      if (ws.find('.') != std::string::npos || ws.find('e') != std::string::npos ||
          ws.find('E') != std::string::npos)
        saw_decimal = true;
      em.tables[c][parse_tuple(tkey)] = rat_from_string(ws);
    }
  }
  if (j.contains("exact"))
    em.exact = field<bool>(j, "exact");
  else
    em.exact = !saw_decimal;
  return em;
}

MerminArgument argument_from_json(const Json& j, const Theory** theory_out) {
  FinAbGroup K = FinAbGroup::parse(field<std::string>(j, "group"));
  const Json& sys = j.contains("system") ? j.at("system") : Json();
  if (!sys.is_array() || sys.empty())
    raise(ErrorCode::Usage, "field 'system' must be a non-empty array of equations");
  EquationSystem S;
  for (const auto& row : sys) {
    auto coeffs = field<std::vector<long long>>(row, "coeffs");
    S.variables = std::max(S.variables, coeffs.size());
    GroupElement rhs = GroupElement::zero(K);
    const Json& r = row.contains("rhs") ? row.at("rhs") : Json();
    if (r.is_number_integer())
      rhs = GroupElement::from_index(K, r.get<long long>());
    else if (r.is_array())
      rhs = GroupElement(K, r.get<std::vector<long long>>());
    else
      raise(ErrorCode::Usage, "equation rhs must be an element index or coordinate array");
    S.rows.push_back(Equation{std::move(coeffs), rhs});
  }
  for (auto& row : S.rows) row.coeffs.resize(S.variables, 0);
  std::optional<std::size_t> N;
  if (j.contains("N")) N = field<std::size_t>(j, "N");
  const Theory* t = nullptr;
  if (j.contains("theory")) t = Theory::parse(field<std::string>(j, "theory"));
  if (theory_out) *theory_out = t;
  return build_argument(K, S, N, t);
}

PeriodicRep rep_from_json(const Json& j) {
  auto T = field<std::size_t>(j, "T");
  auto dim = field<std::size_t>(j, "dim");
  if (!j.contains("U1")) raise(ErrorCode::Usage, "missing field 'U1'");
  return PeriodicRep{T, dim, complex_rows(j.at("U1"), dim, dim, "U1")};
}

CyclicCircuit circuit_from_json(const Json& j) {
  auto T = field<std::size_t>(j, "T");
  if (!j.contains("gates") || !j.at("gates").is_array() || j.at("gates").empty())
    raise(ErrorCode::Usage, "field 'gates' must be a non-empty array");
  const Json& gates = j.at("gates");
  if (!gates[0].is_array() || gates[0].empty())
    raise(ErrorCode::Usage, "each gate must be an array of rows");
  std::size_t dim = gates[0].size();
  if (j.contains("dim")) dim = field<std::size_t>(j, "dim");
  CyclicCircuit circ{T, dim, {}};
  for (std::size_t g = 0; g < gates.size(); ++g)
    circ.gates.push_back(complex_rows(gates[g], dim, dim, "gate"));
  return circ;
}

std::pair<std::vector<AvnEquation>, std::optional<FinAbGroup>> avn_equations_from_json(
    const Json& j) {
  std::optional<FinAbGroup> module;
  if (j.contains("module")) module = FinAbGroup::parse(field<std::string>(j, "module"));
  if (!j.contains("equations") || !j.at("equations").is_array())
    raise(ErrorCode::Usage, "field 'equations' must be an array");
  std::vector<AvnEquation> eqs;
  for (const auto& row : j.at("equations")) {
    AvnEquation eq;
    eq.context = field<std::size_t>(row, "context");
    eq.coeffs = field<std::vector<long long>>(row, "coeffs");
    const Json& r = row.contains("rhs") ? row.at("rhs") : Json();
    if (r.is_number_integer())
      eq.rhs = {r.get<long long>()};
    else if (r.is_array())
      eq.rhs = r.get<std::vector<long long>>();
    else
      raise(ErrorCode::Usage, "equation rhs must be an integer or coordinate array");
    eqs.push_back(std::move(eq));
  }
  return {std::move(eqs), std::move(module)};
}

Json transcript_to_json(const Transcript& t) {
  Json j;
  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    Json jr;
    jr["context"] = r.context;
    jr["outcomes"] = r.outcomes;
    jr["kind"] = r.test ? "test" : "secret";
    if (r.ciphertext) jr["ciphertext"] = *r.ciphertext;
    if (r.s_value) jr["s"] = *r.s_value;
    rounds.push_back(jr);
  }
  j["rounds"] = rounds;
  Json observed = Json::object();
  for (std::size_t c = 0; c < t.observed.size(); ++c) {
    Json table = Json::object();
    for (const auto& [tuple, w] : t.observed[c]) table[tuple_string(tuple)] = rat_string(w);
    observed[std::to_string(c)] = table;
  }
  j["observed"] = observed;
  j["epsilon"] = double_string(t.epsilon);
  j["success"] = t.success;
  j["plaintext"] = t.plaintext;
  j["decoded"] = t.decoded;
  j["pad"] = t.pad;
  j["pad_broadcast"] = t.pad_broadcast;
  return j;
}

Json json_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::Usage, "cannot open '" + path + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) raise(ErrorCode::Usage, "invalid JSON in '" + path + "'");
  return j;
}

}  // namespace cqmkit
