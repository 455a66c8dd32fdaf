#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqmkit/error.hpp"

namespace cqmkit {

using Rat = boost::multiprecision::cpp_rational;

enum class TheoryKind { Complex, Real, Boolean, SplitComplex, Parity, FiniteField, Tropical };

// x + y*sqrt(eps) with x, y in F_{p^n}. Field elements are packed as base-p
// digit encodings of their polynomial coordinates (c_0 + c_1 X + ... maps to
// sum c_i p^i), so the packed value of a constant is just the residue itself.
struct FFElem {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool operator==(const FFElem&) const = default;
};

struct SplitElem {  // x + j*y with j^2 = 1, conjugate x - j*y
  double x = 0;
  double y = 0;
};

struct TropElem {  // min-plus; inf marks the additive unit
  bool inf = true;
  Rat v{};
  bool operator==(const TropElem&) const = default;
};

// Interned theory descriptor; all Scalars hold a pointer to one of these.
// Interning makes theory identity a pointer comparison and gives FiniteField
// theories a place to cache the irreducible modulus and the canonical phase
// generator.
class Theory {
public:
  TheoryKind kind() const { return kind_; }
  bool exact() const {
    return kind_ != TheoryKind::Complex && kind_ != TheoryKind::Real &&
           kind_ != TheoryKind::SplitComplex;
  }
  std::string spec_string() const;

  std::uint64_t p() const { return p_; }
  unsigned n() const { return n_; }
  std::uint64_t eps() const { return eps_; }
  std::uint64_t field_order() const { return q_; }        // p^n
  std::uint64_t phase_group_order() const { return q_ + 1; }
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  FFElem phase_generator() const { return gen_; }  // norm-1 element of order p^n+1

  // base-field F_{p^n} arithmetic on packed encodings
  std::uint64_t fadd(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t fneg(std::uint64_t a) const;
  std::uint64_t fmul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t finv(std::uint64_t a) const;  // Error NotInvertible on 0

  static const Theory* complex_theory();
  static const Theory* real_theory();
  static const Theory* boolean_theory();
  static const Theory* split_complex();
  static const Theory* parity();
  static const Theory* finite_field(std::uint64_t p, unsigned n, std::uint64_t eps);
  static const Theory* tropical();
  // grammar: complex | real | bool | splitc | parity | ff:p^n:eps | tropical
  static const Theory* parse(const std::string& spec);

private:
  Theory() = default;
  TheoryKind kind_ = TheoryKind::Complex;
  std::uint64_t p_ = 0;
  unsigned n_ = 0;
  std::uint64_t eps_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> modulus_;  // monic irreducible coefficients c_0..c_n, n >= 2 only
  FFElem gen_;
  friend class TheoryRegistry;
};

class Scalar {
public:
  Scalar();  // Complex 0; containers need a default
  static Scalar zero(const Theory* t);
  static Scalar one(const Theory* t);
  static Scalar from_int(const Theory* t, long long k);  // image of k under N/Z -> S
  static Scalar complex(double re, double im = 0.0);
  static Scalar real(double v);
  static Scalar boolean(bool b);
  static Scalar parity_bit(bool b);
  static Scalar split(double x, double y);
  static Scalar ff(const Theory* t, std::uint64_t x, std::uint64_t y = 0);
  static Scalar tropical(const Rat& v);
  static Scalar tropical_inf();

  const Theory* theory() const { return theory_; }

  std::complex<double> as_complex() const;
  double as_real() const;
  bool as_bit() const;
  SplitElem as_split() const;
  FFElem as_ff() const;
  TropElem as_trop() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  bool equals(const Scalar& b, double tol) const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.equals(b, tolerance()); }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  // 0 for exact equal, 1 for exact unequal; max-component distance for floats
  double distance(const Scalar& b) const;
  bool is_zero() const { return equals(zero(theory_), tolerance()); }
  bool is_one() const { return equals(one(theory_), tolerance()); }

  std::string str() const;
  static Scalar parse(const Theory* t, const std::string& s);

private:
  const Theory* theory_;
  std::variant<std::complex<double>, double, unsigned char, SplitElem, FFElem, TropElem> v_;
};

Scalar involve(const Scalar& x);
Scalar born_norm(const Scalar& x);  // involve(x) * x
bool is_invertible(const Scalar& x);
Scalar invert(const Scalar& x);  // Error NotInvertible
// additive inverse; Error NotApplicable for Boolean/Tropical nonzero
Scalar neg(const Scalar& x);

// A phase of multiplicative order exactly d with involve(z)*z = 1, or absent.
// Complex: always e^{2pi i/d}. Real/SplitComplex: d <= 2. Boolean/Parity/
// Tropical: d = 1 only. FiniteField: present iff d divides p^n+1, realized as
// a power of the canonical norm-1 generator.
std::optional<Scalar> phase_of_order(const Theory* t, std::uint64_t d);

// Parses "p/q", an integer, or decimal/scientific notation into an exact rational.
std::optional<Rat> parse_rational(const std::string& s);
double rat_to_double(const Rat& r);

}  // namespace cqmkit
