#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "cqmkit/hsp.hpp"

using namespace cqmkit;

namespace {

std::size_t bitval(const std::string& s) {
  std::size_t v = 0;
  for (char c : s) v = v * 2 + (c == '1');
  return v;
}

bool kills_subgroup(const DualElement& chi, const Subgroup& H) {
  for (const GroupElement& h : H.elements())
    if (char_eval(chi, h) != 0) return false;
  return true;
}

double as_prob(const Scalar& w) {
  if (w.theory()->kind() == TheoryKind::Complex) return w.as_complex().real();
  return w.as_real();
}

}  // namespace

TEST_CASE("hiding function labels cosets by least representative") {
  FinAbGroup g8({2, 2, 2});
  Subgroup h(g8, {GroupElement(g8, {1, 1, 0})});
  HidingFunction f = make_hiding_function(g8, h);

  CHECK(f.n_bits == 3);
  REQUIRE(f.labels.size() == 4);
  CHECK(f.labels[0] == "000");
  CHECK(f.labels[1] == "001");
  CHECK(f.labels[2] == "010");
  CHECK(f.labels[3] == "011");
  // cosets {0,6} {1,7} {2,4} {3,5}, ranked by least element
  std::vector<std::string> expect = {"000", "001", "010", "011", "010", "011", "000", "001"};
  CHECK(f.f == expect);

  // constant exactly on cosets, distinct across them
  for (long long a = 0; a < 8; ++a)
    for (long long b = 0; b < 8; ++b) {
      GroupElement ga = GroupElement::from_index(g8, a), gb = GroupElement::from_index(g8, b);
      bool same_coset = h.contains(ga - gb);
      CHECK((f.f[static_cast<std::size_t>(a)] == f.f[static_cast<std::size_t>(b)]) == same_coset);
    }

  SUBCASE("full subgroup gives one constant label") {
    HidingFunction c = make_hiding_function(g8, Subgroup::full(g8));
    CHECK(c.labels == std::vector<std::string>{"000"});
    for (const std::string& s : c.f) CHECK(s == "000");
  }
  SUBCASE("trivial subgroup gives a bijection") {
    HidingFunction b = make_hiding_function(g8, Subgroup::trivial(g8));
    CHECK(b.labels.size() == 8);
    std::set<std::string> distinct(b.f.begin(), b.f.end());
    CHECK(distinct.size() == 8);
    for (long long g = 0; g < 8; ++g)
      CHECK(b.f[static_cast<std::size_t>(g)] == b.labels[static_cast<std::size_t>(g)]);
  }
  SUBCASE("n_bits covers non-power-of-two orders") {
    FinAbGroup z6 = FinAbGroup::parse("Z6");
    HidingFunction s = make_hiding_function(z6, Subgroup::trivial(z6));
    CHECK(s.n_bits == 3);
    CHECK(s.labels.size() == 6);
    FinAbGroup z1({1});
    CHECK(make_hiding_function(z1, Subgroup::full(z1)).n_bits == 1);
  }
  SUBCASE("foreign subgroup is rejected") {
    FinAbGroup z2 = FinAbGroup::parse("Z2");
    Subgroup other = Subgroup::full(z2);
    CHECK_THROWS_WITH_AS(make_hiding_function(g8, other), doctest::Contains("parent"), Error);
  }
}

TEST_CASE("oracle is the copy-evaluate-xor permutation") {
  const Theory* c = Theory::complex_theory();
  FinAbGroup g4({2, 2});
  Subgroup diag(g4, {GroupElement(g4, {1, 1})});
  HidingFunction f = make_hiding_function(g4, diag);
  // f: (0,0),(1,1) -> "00"; (0,1),(1,0) -> "01"
  REQUIRE(f.f == std::vector<std::string>{"00", "01", "01", "00"});

  Mat u = build_oracle(f, c);
  REQUIRE(u.rows() == 16);
  REQUIRE(u.cols() == 16);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t gp = 0; gp < 4; ++gp)
        for (std::size_t tp = 0; tp < 4; ++tp) {
          bool hit = gp == g && tp == (t ^ bitval(f.f[g]));
          CHECK(u.at(gp * 4 + tp, g * 4 + t) ==
                (hit ? Scalar::one(c) : Scalar::zero(c)));
        }

  SUBCASE("constant function gives the identity oracle") {
    FinAbGroup z4 = FinAbGroup::parse("Z4");
    Mat id = build_oracle(make_hiding_function(z4, Subgroup::full(z4)), c);
    CHECK(id == Mat::identity(c, 16));
  }
  SUBCASE("the oracle exists over phase-free theories") {
    Mat ub = build_oracle(f, Theory::boolean_theory());
    const Theory* bt = Theory::boolean_theory();
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 16; ++j)
        if (ub.at(i, j) == Scalar::one(bt)) ++ones;
    CHECK(ones == 16);
  }
  SUBCASE("finite-field oracle is exact") {
    const Theory* f9 = Theory::finite_field(3, 1, 2);
    FinAbGroup z4 = FinAbGroup::parse("Z4");
    Subgroup h(z4, {GroupElement(z4, {2})});
    Mat uf = build_oracle(make_hiding_function(z4, h), f9);
    CHECK(uf.at(0 * 4 + 0, 0 * 4 + 0) == Scalar::one(f9));
    CHECK(uf.at(1 * 4 + 1, 1 * 4 + 0) == Scalar::one(f9));
    CHECK(uf.at(2 * 4 + 0, 2 * 4 + 0) == Scalar::one(f9));
    CHECK(uf.at(3 * 4 + 1, 3 * 4 + 0) == Scalar::one(f9));
  }
  SUBCASE("joint dimension is capped") {
    FinAbGroup g64({2, 2, 2, 2, 2, 2});
    HidingFunction big = make_hiding_function(g64, Subgroup::trivial(g64));
    CHECK_THROWS_AS(build_oracle(big, c), Error);
    try {
      build_oracle(big, c);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooLarge);
    }
  }
}

TEST_CASE("subroutine weights land on annihilator pairs") {
  FinAbGroup g8({2, 2, 2});
  Subgroup h(g8, {GroupElement(g8, {1, 1, 0})});
  HidingFunction f = make_hiding_function(g8, h);
  std::set<std::size_t> ann = {0, 1, 6, 7};
  std::set<std::string> image(f.labels.begin(), f.labels.end());

  for (const Theory* t : {Theory::complex_theory(), Theory::real_theory()}) {
    CAPTURE(t->spec_string());
    std::vector<HspOutcome> out = run_subroutine(f, t);
    REQUIRE(out.size() == 64);

    std::size_t supported = 0;
    double total = 0;
    std::map<std::string, double> b_marginal;
    std::map<long long, double> chi_marginal;
    for (const HspOutcome& o : out) {
      double p = as_prob(o.weight);
      total += p;
      b_marginal[o.b] += p;
      chi_marginal[o.chi.index()] += p;
      bool valid = image.count(o.b) && ann.count(static_cast<std::size_t>(o.chi.index()));
      CHECK(std::abs(p - (valid ? 1.0 / 16 : 0.0)) < 1e-9);
      CHECK(valid == (kills_subgroup(o.chi, h) && image.count(o.b) > 0));
      if (p > 1e-9) ++supported;
    }
    CHECK(supported == 16);
    CHECK(std::abs(total - 1.0) < 1e-9);
    for (const std::string& b : image) CHECK(std::abs(b_marginal[b] - 0.25) < 1e-9);
    for (std::size_t k : ann) CHECK(std::abs(chi_marginal[static_cast<long long>(k)] - 0.25) < 1e-9);
  }
}

TEST_CASE("finite-field subroutine is exact") {
  const Theory* f9 = Theory::finite_field(3, 1, 2);
  FinAbGroup z4 = FinAbGroup::parse("Z4");
  Subgroup h(z4, {GroupElement(z4, {2})});
  HidingFunction f = make_hiding_function(z4, h);

  std::vector<HspOutcome> out = run_subroutine(f, f9);
  REQUIRE(out.size() == 16);
  std::size_t valid = 0;
  for (const HspOutcome& o : out) {
    bool v = (o.b == "00" || o.b == "01") && (o.chi.index() == 0 || o.chi.index() == 2);
    if (v) {
      CHECK(o.weight == Scalar::one(f9));
      ++valid;
    } else {
      CHECK(o.weight == Scalar::zero(f9));
    }
  }
  CHECK(valid == 4);
  CHECK(theorem_residual(f, f9, out) == 0.0);
}

TEST_CASE("simulated distribution matches the theorem statement") {
  const Theory* c = Theory::complex_theory();
  struct Case {
    const Theory* t;
    std::string group;
    std::string gens;
  };
  std::vector<Case> cases = {
      {c, "Z6", "[(3)]"},
      {c, "Z2xZ4", "[(1,2)]"},
      {c, "Z5", "[]"},
      {c, "Z8", "[(1)]"},
      {c, "Z3xZ3", "[(1,2)]"},
      {Theory::real_theory(), "Z2xZ2", "[(1,0)]"},
      {Theory::finite_field(3, 1, 2), "Z2", "[]"},
      {Theory::finite_field(3, 1, 2), "Z4", "[(2)]"},
      {Theory::finite_field(3, 2, 5), "Z5", "[(1)]"},
      {Theory::finite_field(3, 2, 5), "Z10", "[(5)]"},
  };
  for (const Case& cs : cases) {
    CAPTURE(cs.t->spec_string());
    CAPTURE(cs.group);
    FinAbGroup g = FinAbGroup::parse(cs.group);
    HidingFunction f = make_hiding_function(g, parse_subgroup(g, cs.gens));
    std::vector<HspOutcome> out = run_subroutine(f, cs.t);
    CHECK(theorem_residual(f, cs.t, out) < 1e-9);
  }

  SUBCASE("a 64-element group stays fast and exact") {
    FinAbGroup g64({2, 2, 2, 2, 2, 2});
    Subgroup h(g64, {GroupElement(g64, {1, 1, 0, 0, 0, 0}), GroupElement(g64, {0, 0, 1, 1, 0, 0})});
    HidingFunction f = make_hiding_function(g64, h);
    std::vector<HspOutcome> out = run_subroutine(f, c);
    CHECK(out.size() == 4096);
    CHECK(theorem_residual(f, c, out) < 1e-9);
    double total = 0;
    for (const HspOutcome& o : out) total += as_prob(o.weight);
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("character kernels reconstruct the subgroup") {
  FinAbGroup g8({2, 2, 2});
  Subgroup h(g8, {GroupElement(g8, {1, 1, 0})});

  SUBCASE("the full annihilator pins the subgroup down") {
    std::vector<DualElement> ann;
    for (long long k : {0, 1, 6, 7}) ann.push_back(DualElement::from_index(g8, k));
    CHECK(reconstruct_subgroup(ann, g8) == h);
  }
  SUBCASE("two independent characters suffice") {
    std::vector<DualElement> two = {DualElement::from_index(g8, 1), DualElement::from_index(g8, 6)};
    CHECK(reconstruct_subgroup(two, g8) == h);
  }
  SUBCASE("trivial evidence reconstructs everything") {
    CHECK(reconstruct_subgroup({}, g8) == Subgroup::full(g8));
    CHECK(reconstruct_subgroup({DualElement::trivial(g8)}, g8) == Subgroup::full(g8));
  }
}

TEST_CASE("seeded sampling is deterministic and recovers the subgroup") {
  const Theory* c = Theory::complex_theory();
  FinAbGroup g8({2, 2, 2});
  Subgroup h(g8, {GroupElement(g8, {1, 1, 0})});
  HidingFunction f = make_hiding_function(g8, h);
  std::vector<HspOutcome> out = run_subroutine(f, c);

  std::vector<DualElement> s1 = sample_characters(out, 18, 7);
  std::vector<DualElement> s2 = sample_characters(out, 18, 7);
  REQUIRE(s1.size() == 18);
  CHECK(s1 == s2);
  for (const DualElement& chi : s1) CHECK(kills_subgroup(chi, h));
  CHECK(reconstruct_subgroup(s1, g8) == h);

  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    if (reconstruct_subgroup(sample_characters(out, 18, seed), g8) == h) ++hits;
  CHECK(hits >= 38);
}

TEST_CASE("phaseless theories refuse the subroutine, unreal weights refuse sampling") {
  FinAbGroup z2 = FinAbGroup::parse("Z2");
  HidingFunction f2 = make_hiding_function(z2, Subgroup::trivial(z2));
  CHECK_THROWS_AS(run_subroutine(f2, Theory::boolean_theory()), Error);

  const Theory* f9 = Theory::finite_field(3, 1, 2);
  FinAbGroup z3 = FinAbGroup::parse("Z3");
  // 3 does not divide p^n + 1 = 4, so Z3 has no coherent form over F9
  CHECK_THROWS_AS(run_subroutine(make_hiding_function(z3, Subgroup::trivial(z3)), f9), Error);

  FinAbGroup z4 = FinAbGroup::parse("Z4");
  Subgroup h4(z4, {GroupElement(z4, {2})});
  std::vector<HspOutcome> ffout = run_subroutine(make_hiding_function(z4, h4), f9);
  CHECK_THROWS_AS(sample_characters(ffout, 5, 0), Error);
  try {
    sample_characters(ffout, 5, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotApplicable);
  }

  std::vector<HspOutcome> dead = {
      {"0", DualElement::trivial(z2), Scalar::zero(Theory::complex_theory())}};
  CHECK_THROWS_AS(sample_characters(dead, 1, 0), Error);
}
