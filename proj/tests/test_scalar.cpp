#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "cqmkit/scalar.hpp"

using namespace cqmkit;

namespace {

Scalar random_scalar(const Theory* t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> bit(0, 1);
  switch (t->kind()) {
    case TheoryKind::Complex: return Scalar::complex(u(rng), u(rng));
    case TheoryKind::Real: return Scalar::real(u(rng));
    case TheoryKind::Boolean: return Scalar::boolean(bit(rng));
    case TheoryKind::Parity: return Scalar::parity_bit(bit(rng));
    case TheoryKind::SplitComplex: return Scalar::split(u(rng), u(rng));
    case TheoryKind::FiniteField: {
      std::uniform_int_distribution<std::uint64_t> f(0, t->field_order() - 1);
      return Scalar::ff(t, f(rng), f(rng));
    }
    case TheoryKind::Tropical: {
      if (bit(rng) && bit(rng)) return Scalar::tropical_inf();
      std::uniform_int_distribution<int> n(-12, 12);
      return Scalar::tropical(Rat(n(rng), 1 + bit(rng)));
    }
  }
  return Scalar();
}

std::vector<const Theory*> all_theories() {
  return {Theory::complex_theory(), Theory::real_theory(),   Theory::boolean_theory(),
          Theory::split_complex(),  Theory::parity(),        Theory::finite_field(3, 1, 2),
          Theory::tropical()};
}

}  // namespace

TEST_CASE("involution") {
  auto c = involve(Scalar::complex(3, 4));
  CHECK(c.equals(Scalar::complex(3, -4), 0));

  double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  Scalar b = Scalar::split(1 / r2, r3 / r2);
  CHECK(involve(b).equals(Scalar::split(1 / r2, -r3 / r2), 0));

  CHECK(involve(Scalar::boolean(true)).as_bit());

  std::mt19937_64 rng(7);
  for (const Theory* t : all_theories())
    for (int i = 0; i < 50; ++i) {
      Scalar x = random_scalar(t, rng), y = random_scalar(t, rng);
      CHECK(involve(involve(x)).equals(x, 1e-12));
      CHECK(involve(x * y).equals(involve(x) * involve(y), 1e-12));
      CHECK(involve(x + y).equals(involve(x) + involve(y), 1e-12));
    }
}

TEST_CASE("born_norm") {
  double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  Scalar b = Scalar::split(1 / r2, r3 / r2);
  CHECK(born_norm(b).equals(Scalar::split(-1, 0), 1e-12));

  for (double th : {0.3, 1.1, -2.5}) {
    Scalar u = Scalar::complex(std::cos(th), std::sin(th));
    CHECK(born_norm(u).equals(Scalar::complex(1, 0), 1e-12));
  }

  const Theory* f9 = Theory::finite_field(3, 1, 2);
  Scalar sqrt_eps = Scalar::ff(f9, 0, 1);
  CHECK(born_norm(sqrt_eps).equals(Scalar::ff(f9, 1, 0), 0));  // -eps = -2 = 1 in F_3
}

TEST_CASE("phase_of_order") {
  auto i4 = phase_of_order(Theory::complex_theory(), 4);
  REQUIRE(i4.has_value());
  CHECK(i4->equals(Scalar::complex(0, 1), 0));

  const Theory* f9 = Theory::finite_field(3, 1, 2);
  // norm-1 group of F_3[sqrt(2)] is Z_4 generated by sqrt(2) = (0,1)
  auto g = phase_of_order(f9, 4);
  REQUIRE(g.has_value());
  CHECK(g->equals(Scalar::ff(f9, 0, 1), 0));
  Scalar g2 = *g * *g, g3 = g2 * *g, g4 = g3 * *g;
  CHECK(g2.equals(Scalar::ff(f9, 2, 0), 0));
  CHECK(g3.equals(Scalar::ff(f9, 0, 2), 0));
  CHECK(g4.equals(Scalar::ff(f9, 1, 0), 0));
  CHECK(born_norm(*g).equals(Scalar::one(f9), 0));
  CHECK(!phase_of_order(f9, 3).has_value());
  auto h2 = phase_of_order(f9, 2);
  REQUIRE(h2.has_value());
  CHECK(h2->equals(Scalar::ff(f9, 2, 0), 0));

  CHECK(!phase_of_order(Theory::boolean_theory(), 2).has_value());
  CHECK(!phase_of_order(Theory::real_theory(), 3).has_value());
  CHECK(phase_of_order(Theory::real_theory(), 2)->equals(Scalar::real(-1), 0));
  CHECK(phase_of_order(Theory::split_complex(), 2)->equals(Scalar::split(-1, 0), 0));
  CHECK(!phase_of_order(Theory::split_complex(), 4).has_value());
  CHECK(phase_of_order(Theory::tropical(), 1)->equals(Scalar::one(Theory::tropical()), 0));
  CHECK(!phase_of_order(Theory::tropical(), 2).has_value());

  for (std::uint64_t d : {1ull, 2ull, 3ull, 5ull, 8ull}) {
    auto z = phase_of_order(Theory::complex_theory(), d);
    REQUIRE(z.has_value());
    Scalar acc = Scalar::complex(1, 0);
    for (std::uint64_t k = 1; k < d; ++k) {
      acc = acc * *z;
      CHECK(!acc.equals(Scalar::complex(1, 0), 1e-6));
    }
    CHECK((acc * *z).equals(Scalar::complex(1, 0), 1e-12));
  }
}

TEST_CASE("invertibility") {
  Scalar eight = Scalar::complex(8, 0);
  CHECK(is_invertible(eight));
  CHECK(invert(eight).equals(Scalar::complex(0.125, 0), 1e-15));

  CHECK(is_invertible(Scalar::boolean(true)));
  CHECK(invert(Scalar::boolean(true)).as_bit());
  CHECK(!is_invertible(Scalar::boolean(false)));
  CHECK_THROWS_AS(invert(Scalar::boolean(false)), Error);

  const Theory* f9 = Theory::finite_field(3, 1, 2);
  CHECK(!is_invertible(Scalar::from_int(f9, 3)));  // 3 = 0 in characteristic 3
  CHECK_THROWS_AS(invert(Scalar::from_int(f9, 3)), Error);

  std::mt19937_64 rng(11);
  for (const Theory* t : all_theories())
    for (int i = 0; i < 40; ++i) {
      Scalar x = random_scalar(t, rng);
      if (!is_invertible(x)) continue;
      CHECK((invert(x) * x).equals(Scalar::one(t), 1e-9));
    }

  // split-complex zero divisors 1 +- j are not invertible
  CHECK(!is_invertible(Scalar::split(1, 1)));
  CHECK(!is_invertible(Scalar::split(1, -1)));
  CHECK((Scalar::split(1, 1) * Scalar::split(1, -1)).equals(Scalar::split(0, 0), 0));
}

TEST_CASE("semiring axioms on random triples") {
  std::mt19937_64 rng(3);
  for (const Theory* t : all_theories()) {
    double tol = t->exact() ? 0.0 : 1e-12;
    Scalar z = Scalar::zero(t), e = Scalar::one(t);
    for (int i = 0; i < 60; ++i) {
      Scalar a = random_scalar(t, rng), b = random_scalar(t, rng), c = random_scalar(t, rng);
      CHECK(((a + b) + c).equals(a + (b + c), tol));
      CHECK((a + b).equals(b + a, tol));
      CHECK(((a * b) * c).equals(a * (b * c), tol));
      CHECK((a * b).equals(b * a, tol));
      CHECK((a * (b + c)).equals(a * b + a * c, tol));
      CHECK((a + z).equals(a, 0));
      CHECK((a * e).equals(a, tol));
      CHECK((a * z).equals(z, 0));
    }
  }
}

TEST_CASE("additively idempotent units") {
  Scalar b1 = Scalar::boolean(true);
  CHECK((b1 + b1).equals(b1, 0));
  Scalar t1 = Scalar::one(Theory::tropical());
  CHECK((t1 + t1).equals(t1, 0));
  // but not in the others
  CHECK(!(Scalar::complex(1, 0) + Scalar::complex(1, 0)).equals(Scalar::complex(1, 0), 0.5));
  CHECK((Scalar::parity_bit(true) + Scalar::parity_bit(true)).equals(Scalar::parity_bit(false), 0));
}

TEST_CASE("positivity closure for exact theories") {
  // the set {x*x} is already additively and multiplicatively closed in these theories
  for (const Theory* t :
       {Theory::boolean_theory(), Theory::parity(), Theory::finite_field(3, 1, 2)}) {
    std::vector<Scalar> elems;
    if (t->kind() == TheoryKind::FiniteField) {
      for (std::uint64_t x = 0; x < 3; ++x)
        for (std::uint64_t y = 0; y < 3; ++y) elems.push_back(Scalar::ff(t, x, y));
    } else {
      elems = {Scalar::zero(t), Scalar::one(t)};
    }
    std::vector<Scalar> norms;
    for (const Scalar& x : elems) {
      Scalar n = born_norm(x);
      bool seen = false;
      for (const Scalar& m : norms) seen = seen || m.equals(n, 0);
      if (!seen) norms.push_back(n);
    }
    auto in_norms = [&](const Scalar& v) {
      for (const Scalar& m : norms)
        if (m.equals(v, 0)) return true;
      return false;
    };
    for (const Scalar& a : norms)
      for (const Scalar& b : norms) {
        CHECK(in_norms(a + b));
        CHECK(in_norms(a * b));
      }
  }
}

TEST_CASE("finite field validation") {
  CHECK_THROWS_AS(Theory::finite_field(4, 1, 2), Error);   // p not prime
  CHECK_THROWS_AS(Theory::finite_field(2, 1, 1), Error);   // p = 2 excluded
  CHECK_THROWS_AS(Theory::finite_field(3, 1, 1), Error);   // 1 not primitive
  CHECK_THROWS_AS(Theory::finite_field(3, 1, 0), Error);   // 0 not primitive
  CHECK_THROWS_AS(Theory::finite_field(7, 1, 2), Error);   // 2 has order 3 mod 7
  CHECK_NOTHROW(Theory::finite_field(7, 1, 3));            // 3 is primitive mod 7
  CHECK_NOTHROW(Theory::finite_field(5, 1, 2));
  CHECK_THROWS_AS(Theory::finite_field(3, 2, 3), Error);   // X has order 4 in F_9, not primitive

  // F_9 = F_3[X]/(X^2+1): deterministic lowest modulus
  const Theory* f9 = Theory::finite_field(3, 2, 5);  // 5 decodes to X + 2... check primitivity below
  CHECK(f9->field_order() == 9);
  CHECK(f9->modulus() == std::vector<std::uint64_t>{1, 0, 1});
  // (X+2)^2 = X^2 + 4X + 4 = -1 + X + 1 = X: order(X) = 4, so order(X+2) = 8: primitive
  CHECK(f9->fmul(5, 5) == 3);
  CHECK(f9->phase_group_order() == 10);
  auto z = phase_of_order(f9, 10);
  REQUIRE(z.has_value());
  Scalar acc = Scalar::one(f9);
  for (int k = 0; k < 9; ++k) {
    acc = acc * *z;
    CHECK(!acc.equals(Scalar::one(f9), 0));
  }
  CHECK((acc * *z).equals(Scalar::one(f9), 0));
  CHECK(!phase_of_order(f9, 4).has_value());
  CHECK(phase_of_order(f9, 5).has_value());
}

TEST_CASE("theory interning and parsing") {
  CHECK(Theory::parse("complex") == Theory::complex_theory());
  CHECK(Theory::parse("bool") == Theory::boolean_theory());
  CHECK(Theory::parse("ff:3^1:2") == Theory::finite_field(3, 1, 2));
  CHECK(Theory::parse("ff:3^1:2")->spec_string() == "ff:3^1:2");
  CHECK_THROWS_AS(Theory::parse("octonion"), Error);
  CHECK_THROWS_AS(Theory::parse("ff:3:2"), Error);
  for (const Theory* t : all_theories()) CHECK(Theory::parse(t->spec_string()) == t);
}

TEST_CASE("scalar string round trip") {
  std::mt19937_64 rng(19);
  for (const Theory* t : all_theories())
    for (int i = 0; i < 30; ++i) {
      Scalar x = random_scalar(t, rng);
      Scalar back = Scalar::parse(t, x.str());
      CHECK(back.equals(x, 1e-12));
    }
  CHECK(parse_rational("3/4").value() == Rat(3, 4));
  CHECK(parse_rational("0.25").value() == Rat(1, 4));
  CHECK(parse_rational("-1.5e-2").value() == Rat(-3, 200));
  CHECK(!parse_rational("x").has_value());
}

TEST_CASE("integer images and negation") {
  CHECK(Scalar::from_int(Theory::boolean_theory(), 2).as_bit());
  CHECK(Scalar::from_int(Theory::tropical(), 3).equals(Scalar::one(Theory::tropical()), 0));
  CHECK(Scalar::from_int(Theory::parity(), 2).equals(Scalar::zero(Theory::parity()), 0));
  const Theory* f9 = Theory::finite_field(3, 1, 2);
  CHECK(Scalar::from_int(f9, -1).equals(Scalar::ff(f9, 2, 0), 0));
  CHECK_THROWS_AS(neg(Scalar::boolean(true)), Error);
  CHECK_NOTHROW(neg(Scalar::boolean(false)));
  CHECK(neg(Scalar::parity_bit(true)).as_bit());
  CHECK((neg(Scalar::complex(2, 1)) + Scalar::complex(2, 1)).equals(Scalar::complex(0, 0), 0));
}
