#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "cqmkit/contextuality.hpp"

using namespace cqmkit;

namespace {

long long ipow(long long b, std::size_t e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::vector<long long>> all_tuples(long long d, std::size_t n) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> t(n, 0);
  for (long long c = 0; c < ipow(d, n); ++c) {
    out.push_back(t);
    for (std::size_t v = n; v-- > 0;) {
      if (++t[v] < d) break;
      t[v] = 0;
    }
  }
  return out;
}

// uniform distribution on { tuples with sum = rhs mod d } per context
EmpiricalModel coset_model(long long d, std::size_t n,
                           std::vector<std::vector<std::size_t>> contexts,
                           const std::vector<long long>& rhs) {
  Scenario sc{n, std::vector<std::size_t>(n, 2), FinAbGroup({d}), std::move(contexts)};
  EmpiricalModel em{sc, {}, true};
  Rat w = Rat(1) / Rat(ipow(d, n - 1));
  for (std::size_t c = 0; c < sc.contexts.size(); ++c) {
    std::map<std::vector<long long>, Rat> table;
    for (const std::vector<long long>& t : all_tuples(d, n)) {
      long long sum = 0;
      for (long long o : t) sum += o;
      if (sum % d == rhs[c]) table[t] = w;
    }
    em.tables.push_back(std::move(table));
  }
  return em;
}

EmpiricalModel ghz_z2() { return coset_model(2, 3, {{0, 0, 0}, {0, 1, 1}, {1, 1, 0}, {1, 0, 1}}, {0, 1, 1, 1}); }

EmpiricalModel worked_z3() {
  return coset_model(3, 4, {{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 1}},
                     {0, 1, 1, 1, 1});
}

EmpiricalModel worked_z4() {
  return coset_model(
      4, 5,
      {{0, 0, 0, 0, 0}, {0, 0, 0, 1, 1}, {0, 0, 1, 1, 0}, {0, 1, 1, 0, 0}, {1, 1, 0, 0, 0}, {1, 0, 0, 0, 1}},
      {0, 1, 1, 1, 1, 1});
}

// 2 parties x 2 choices over Z2, one row of four weights per context in
// outcome order (0,0) (0,1) (1,0) (1,1)
EmpiricalModel two_party_model(const std::vector<std::vector<Rat>>& rows) {
  Scenario sc{2, {2, 2}, FinAbGroup({2}), {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  EmpiricalModel em{sc, {}, true};
  for (const std::vector<Rat>& row : rows) {
    std::map<std::vector<long long>, Rat> table;
    std::vector<std::vector<long long>> keys = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t i = 0; i < 4; ++i)
      if (row[i] != 0) table[keys[i]] = row[i];
    em.tables.push_back(std::move(table));
  }
  return em;
}

EmpiricalModel bell_model() {
  Rat e = Rat(1, 8);
  return two_party_model({{Rat(1, 2), 0, 0, Rat(1, 2)},
                          {3 * e, e, e, 3 * e},
                          {3 * e, e, e, 3 * e},
                          {e, 3 * e, 3 * e, e}});
}

EmpiricalModel pr_box() {
  Rat h = Rat(1, 2);
  return two_party_model({{h, 0, 0, h}, {h, 0, 0, h}, {h, 0, 0, h}, {0, h, h, 0}});
}

bool tables_match(const std::vector<std::map<std::vector<long long>, Rat>>& a,
                  const std::vector<std::map<std::vector<long long>, Rat>>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t c = 0; c < a.size(); ++c) {
    std::set<std::vector<long long>> keys;
    for (const auto& [k, _] : a[c]) keys.insert(k);
    for (const auto& [k, _] : b[c]) keys.insert(k);
    for (const std::vector<long long>& k : keys) {
      Rat wa = a[c].count(k) ? a[c].at(k) : Rat(0);
      Rat wb = b[c].count(k) ? b[c].at(k) : Rat(0);
      if (tol == 0.0) {
        if (wa != wb) return false;
      } else if (std::abs((wa - wb).convert_to<double>()) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool in_all_supports(const EmpiricalModel& em, const GlobalAssignment& ga) {
  for (std::size_t c = 0; c < em.scenario.contexts.size(); ++c)
    if (!support_of(em, c).count(ga.restrict_to(em.scenario.contexts[c]))) return false;
  return true;
}

std::vector<AvnEquation> sum_equations(std::size_t parties, const std::vector<long long>& rhs) {
  std::vector<AvnEquation> eqs;
  for (std::size_t c = 0; c < rhs.size(); ++c)
    eqs.push_back({c, std::vector<long long>(parties, 1), {rhs[c]}});
  return eqs;
}

}  // namespace

TEST_CASE("model validation catches structural problems") {
  EmpiricalModel em = ghz_z2();
  validate_model(em);

  SUBCASE("missing cover") {
    em.scenario.contexts = {{0, 0, 0}, {0, 1, 1}};
    em.tables.resize(2);
    CHECK_THROWS_AS(validate_model(em), Error);
  }
  SUBCASE("choice out of range") {
    em.scenario.contexts[1] = {0, 2, 1};
    CHECK_THROWS_AS(validate_model(em), Error);
  }
  SUBCASE("tuple length mismatch") {
    em.tables[0][{0, 1}] = Rat(1, 4);
    CHECK_THROWS_AS(validate_model(em), Error);
  }
  SUBCASE("outcome out of range") {
    em.tables[0][{0, 0, 5}] = Rat(1, 4);
    CHECK_THROWS_AS(validate_model(em), Error);
  }
  SUBCASE("negative weight") {
    em.tables[0][{0, 0, 0}] = Rat(-1, 4);
    CHECK_THROWS_AS(validate_model(em), Error);
  }
  SUBCASE("table count mismatch") {
    em.tables.pop_back();
    CHECK_THROWS_AS(validate_model(em), Error);
  }
}

TEST_CASE("no-signalling verification") {
  CHECK(check_no_signalling(ghz_z2()).pass);
  CHECK(check_no_signalling(bell_model()).pass);
  CHECK(check_no_signalling(pr_box()).pass);
  CHECK(check_no_signalling(worked_z3()).pass);
  CHECK(check_no_signalling(worked_z4()).pass);

  SUBCASE("independent product distributions pass") {
    // party 1 outputs 0 with weight 1/3 whatever it measures, party 2 with 1/4
    std::vector<Rat> p = {Rat(1, 3), Rat(2, 3)};
    std::vector<Rat> q = {Rat(1, 4), Rat(3, 4)};
    Scenario sc{2, {2, 2}, FinAbGroup({2}), {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    EmpiricalModel em{sc, {}, true};
    for (std::size_t c = 0; c < 4; ++c) {
      std::map<std::vector<long long>, Rat> table;
      for (long long x = 0; x < 2; ++x)
        for (long long y = 0; y < 2; ++y) table[{x, y}] = p[static_cast<std::size_t>(x)] * q[static_cast<std::size_t>(y)];
      em.tables.push_back(std::move(table));
    }
    NoSignallingReport r = check_no_signalling(em);
    CHECK(r.pass);
    CHECK(r.violations.empty());
  }

  SUBCASE("a signalling table is located") {
    // party 1's outcome flips with party 2's choice
    EmpiricalModel em = two_party_model({{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}});
    NoSignallingReport r = check_no_signalling(em);
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.violations.empty());
    bool located = false;
    for (const SignallingViolation& v : r.violations)
      if (v.context_a == 0 && v.context_b == 1 &&
          v.shared == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}})
        located = true;
    CHECK(located);
    CHECK(r.max_violation == doctest::Approx(1.0));
  }

  SUBCASE("unnormalized tables are flagged") {
    EmpiricalModel em = ghz_z2();
    em.tables[2][{0, 0, 1}] = Rat(1, 2);
    NoSignallingReport r = check_no_signalling(em);
    CHECK_FALSE(r.pass);
    CHECK(r.unnormalized == std::vector<std::size_t>{2});
  }
}

TEST_CASE("probabilistic LHV feasibility") {
  SUBCASE("the solvable d=3 argument has an exact mixture") {
    EmpiricalModel em = worked_z3();
    std::optional<WeightedAssignments> mix = probabilistic_lhv(em);
    REQUIRE(mix.has_value());
    Rat total = 0;
    for (const auto& [ga, q] : *mix) {
      CHECK(q > 0);
      total += q;
      CHECK(in_all_supports(em, ga));
    }
    CHECK(total == 1);
    CHECK(tables_match(mixture_tables(em.scenario, *mix), em.tables, 0.0));
  }

  SUBCASE("the GHZ model has none") { CHECK_FALSE(probabilistic_lhv(ghz_z2()).has_value()); }

  SUBCASE("the Bell model is contextual despite full possibilistic support") {
    CHECK_FALSE(probabilistic_lhv(bell_model()).has_value());
    CHECK_FALSE(probabilistic_lhv(pr_box()).has_value());
  }

  SUBCASE("a single context is always extendable") {
    Scenario sc{2, {1, 1}, FinAbGroup({2}), {{0, 0}}};
    EmpiricalModel em{sc, {{{{0, 1}, Rat(1, 3)}, {{1, 0}, Rat(2, 3)}}}, true};
    std::optional<WeightedAssignments> mix = probabilistic_lhv(em);
    REQUIRE(mix.has_value());
    CHECK(tables_match(mixture_tables(sc, *mix), em.tables, 0.0));
  }

  SUBCASE("a product model is local") {
    std::vector<Rat> p = {Rat(1, 3), Rat(2, 3)};
    Scenario sc{2, {2, 2}, FinAbGroup({2}), {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    EmpiricalModel em{sc, {}, true};
    for (std::size_t c = 0; c < 4; ++c) {
      std::map<std::vector<long long>, Rat> table;
      for (long long x = 0; x < 2; ++x)
        for (long long y = 0; y < 2; ++y)
          table[{x, y}] = p[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(y)];
      em.tables.push_back(std::move(table));
    }
    std::optional<WeightedAssignments> mix = probabilistic_lhv(em);
    REQUIRE(mix.has_value());
    CHECK(tables_match(mixture_tables(sc, *mix), em.tables, 0.0));
  }

  SUBCASE("float mode tolerates Born noise") {
    EmpiricalModel em = worked_z3();
    em.exact = false;
    for (auto& table : em.tables)
      for (auto& [k, w] : table) w = Rat(w.convert_to<double>());
    std::optional<WeightedAssignments> mix = probabilistic_lhv(em);
    REQUIRE(mix.has_value());
    CHECK(tables_match(mixture_tables(em.scenario, *mix), em.tables, 1e-7));
  }

  SUBCASE("the assignment count is capped") {
    std::size_t m = 21;
    Scenario sc{1, {m}, FinAbGroup({2}), {}};
    for (std::size_t c = 0; c < m; ++c) sc.contexts.push_back({c});
    EmpiricalModel em{sc, {}, true};
    for (std::size_t c = 0; c < m; ++c)
      em.tables.push_back({{{0}, Rat(1, 2)}, {{1}, Rat(1, 2)}});
    CHECK_THROWS_AS(probabilistic_lhv(em), Error);
    try {
      probabilistic_lhv(em);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooLarge);
    }
  }
}

TEST_CASE("strong contextuality search") {
  SUBCASE("GHZ admits no consistent global assignment") {
    StrongContextualityResult r = strong_contextuality(ghz_z2());
    CHECK(r.strongly_contextual);
    CHECK_FALSE(r.section.has_value());
  }
  SUBCASE("the d=4 worked example is strongly contextual") {
    CHECK(strong_contextuality(worked_z4()).strongly_contextual);
  }
  SUBCASE("the PR box is strongly contextual") {
    CHECK(strong_contextuality(pr_box()).strongly_contextual);
  }
  SUBCASE("the Bell model has a possibilistic section") {
    EmpiricalModel em = bell_model();
    StrongContextualityResult r = strong_contextuality(em);
    CHECK_FALSE(r.strongly_contextual);
    REQUIRE(r.section.has_value());
    CHECK(in_all_supports(em, *r.section));
    // lexicographically first section is all zeros
    CHECK(r.section->value == std::vector<std::vector<long long>>{{0, 0}, {0, 0}});
  }
  SUBCASE("the solvable d=3 argument has a section") {
    EmpiricalModel em = worked_z3();
    StrongContextualityResult r = strong_contextuality(em);
    CHECK_FALSE(r.strongly_contextual);
    CHECK(in_all_supports(em, *r.section));
  }
}

TEST_CASE("signed global sections") {
  SUBCASE("the PR box needs negative weights") {
    EmpiricalModel em = pr_box();
    WeightedAssignments w = signed_global_section(em);
    CHECK(tables_match(mixture_tables(em.scenario, w), em.tables, 0.0));
    Rat total = 0;
    bool negative = false;
    for (const auto& [ga, q] : w) {
      total += q;
      if (q < 0) negative = true;
    }
    CHECK(total == 1);
    CHECK(negative);
  }
  SUBCASE("GHZ has a signed section but no nonnegative one") {
    EmpiricalModel em = ghz_z2();
    WeightedAssignments w = signed_global_section(em);
    CHECK(tables_match(mixture_tables(em.scenario, w), em.tables, 0.0));
    bool negative = false;
    for (const auto& [ga, q] : w)
      if (q < 0) negative = true;
    CHECK(negative);
    CHECK_FALSE(probabilistic_lhv(em).has_value());
  }
  SUBCASE("the Bell model reproduces exactly") {
    EmpiricalModel em = bell_model();
    WeightedAssignments w = signed_global_section(em);
    CHECK(tables_match(mixture_tables(em.scenario, w), em.tables, 0.0));
  }
  SUBCASE("an LHV model solves too") {
    std::vector<Rat> p = {Rat(1, 4), Rat(3, 4)};
    Scenario sc{2, {2, 2}, FinAbGroup({2}), {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    EmpiricalModel em{sc, {}, true};
    for (std::size_t c = 0; c < 4; ++c) {
      std::map<std::vector<long long>, Rat> table;
      for (long long x = 0; x < 2; ++x)
        for (long long y = 0; y < 2; ++y)
          table[{x, y}] = p[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(y)];
      em.tables.push_back(std::move(table));
    }
    WeightedAssignments w = signed_global_section(em);
    CHECK(tables_match(mixture_tables(sc, w), em.tables, 0.0));
  }
  SUBCASE("float mode stays within tolerance") {
    EmpiricalModel em = ghz_z2();
    em.exact = false;
    for (auto& table : em.tables)
      for (auto& [k, v] : table) v = Rat(v.convert_to<double>());
    WeightedAssignments w = signed_global_section(em);
    CHECK(tables_match(mixture_tables(em.scenario, w), em.tables, 1e-9));
  }
  SUBCASE("signalling input has no section") {
    EmpiricalModel em = two_party_model({{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}});
    CHECK_THROWS_AS(signed_global_section(em), Error);
    try {
      signed_global_section(em);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoSolution);
    }
  }
}

TEST_CASE("all-vs-nothing certification") {
  SUBCASE("the four GHZ parity equations have no joint solution") {
    EmpiricalModel em = ghz_z2();
    AvnResult r = avn_check(em, sum_equations(3, {0, 1, 1, 1}));
    CHECK(r.avn);
    CHECK_FALSE(r.witness.has_value());
    CHECK(r.equations.size() == 4);
  }
  SUBCASE("the d=4 control and variation equations are AvN") {
    AvnResult r = avn_check(worked_z4(), sum_equations(5, {0, 1, 1, 1, 1, 1}));
    CHECK(r.avn);
  }
  SUBCASE("the solvable d=3 system yields a witness") {
    EmpiricalModel em = worked_z3();
    AvnResult r = avn_check(em, sum_equations(4, {0, 1, 1, 1, 1}));
    CHECK_FALSE(r.avn);
    REQUIRE(r.witness.has_value());
    for (std::size_t c = 0; c < em.scenario.contexts.size(); ++c) {
      std::vector<long long> o = r.witness->restrict_to(em.scenario.contexts[c]);
      long long sum = 0;
      for (long long v : o) sum += v;
      CHECK(sum % 3 == std::vector<long long>{0, 1, 1, 1, 1}[c]);
    }
  }
  SUBCASE("equations must hold on their own support") {
    CHECK_THROWS_AS(avn_check(ghz_z2(), sum_equations(3, {1, 1, 1, 1})), Error);
    try {
      avn_check(ghz_z2(), sum_equations(3, {1, 1, 1, 1}));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidTheory);
    }
  }
  SUBCASE("the d=4 equations admit a Z3-valued assignment") {
    FinAbGroup z3({3});
    AvnResult r = avn_check(worked_z4(), sum_equations(5, {0, 1, 1, 1, 1, 1}), z3);
    CHECK_FALSE(r.avn);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->group == z3);
    for (std::size_t c = 0; c < 6; ++c) {
      std::vector<long long> o =
          r.witness->restrict_to(worked_z4().scenario.contexts[c]);
      long long sum = 0;
      for (long long v : o) sum += v;
      CHECK(sum % 3 == std::vector<long long>{0, 1, 1, 1, 1, 1}[c]);
    }
  }
  SUBCASE("AvN implies strong contextuality on these fixtures") {
    for (EmpiricalModel em : {ghz_z2(), worked_z4()}) {
      std::vector<long long> rhs(em.scenario.contexts.size(), 1);
      rhs[0] = 0;
      if (avn_check(em, sum_equations(em.scenario.parties, rhs)).avn)
        CHECK(strong_contextuality(em).strongly_contextual);
    }
  }
}
