#include "cqmkit/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

namespace cqmkit {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::InvalidSubgroup: return "InvalidSubgroup";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::NotEnoughPhases: return "NotEnoughPhases";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::Unsolvable: return "Unsolvable";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotAPhase: return "NotAPhase";
    case ErrorCode::IncompleteBasis: return "IncompleteBasis";
    case ErrorCode::NonInvertibleNorm: return "NonInvertibleNorm";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::NotCyclic: return "NotCyclic";
    case ErrorCode::IncompleteFamily: return "IncompleteFamily";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::InvalidTheory: return "InvalidTheory";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

double& tolerance() {
  static double tol = [] {
    if (const char* env = std::getenv("CQMKIT_TOL")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      fs.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) fs.push_back(m);
  return fs;
}

using Poly = std::vector<std::uint64_t>;  // coefficients, constant first

Poly decode_poly(std::uint64_t a, std::uint64_t p, unsigned n) {
  Poly c(n, 0);
  for (unsigned i = 0; i < n; ++i) {
    c[i] = a % p;
    a /= p;
  }
  return c;
}

std::uint64_t encode_poly(const Poly& c, std::uint64_t p, unsigned n) {
  std::uint64_t a = 0;
  for (unsigned i = n; i-- > 0;) a = a * p + (i < c.size() ? c[i] : 0);
  return a;
}

// remainder of c modulo the monic poly m (degree = m.size()-1), in place
void poly_mod(Poly& c, const Poly& m, std::uint64_t p) {
  const std::size_t deg_m = m.size() - 1;
  while (c.size() > deg_m) {
    std::uint64_t lead = c.back();
    std::size_t shift = c.size() - 1 - deg_m;
    if (lead != 0)
      for (std::size_t i = 0; i < deg_m; ++i)
        c[shift + i] = (c[shift + i] + (p - m[i] % p) * lead) % p;
    c.pop_back();
  }
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

bool poly_divides(const Poly& d, Poly f, std::uint64_t p) {
  poly_mod(f, d, p);
  return std::all_of(f.begin(), f.end(), [](std::uint64_t c) { return c == 0; });
}

}  // namespace

class TheoryRegistry {
public:
  static const Theory* simple(TheoryKind k) {
    static TheoryRegistry reg;
    std::lock_guard<std::mutex> lock(reg.mu_);
    auto& slot = reg.simple_[static_cast<int>(k)];
    if (!slot) {
      slot.reset(new Theory());
      slot->kind_ = k;
    }
    return slot.get();
  }

  static const Theory* finite_field(std::uint64_t p, unsigned n, std::uint64_t eps) {
    static TheoryRegistry reg;
    std::lock_guard<std::mutex> lock(reg.mu_);
    auto key = std::make_tuple(p, n, eps);
    auto it = reg.fields_.find(key);
    if (it != reg.fields_.end()) return it->second.get();
    std::unique_ptr<Theory> t(new Theory());
    build_field(*t, p, n, eps);
    return reg.fields_.emplace(key, std::move(t)).first->second.get();
  }

private:
  static void build_field(Theory& t, std::uint64_t p, unsigned n, std::uint64_t eps);
  std::mutex mu_;
  std::unique_ptr<Theory> simple_[7];
  std::map<std::tuple<std::uint64_t, unsigned, std::uint64_t>, std::unique_ptr<Theory>> fields_;
};

namespace {

FFElem smul(const Theory* t, FFElem a, FFElem b) {
  std::uint64_t x = t->fadd(t->fmul(a.x, b.x), t->fmul(t->eps(), t->fmul(a.y, b.y)));
  std::uint64_t y = t->fadd(t->fmul(a.x, b.y), t->fmul(a.y, b.x));
  return {x, y};
}

FFElem spow(const Theory* t, FFElem a, std::uint64_t e) {
  FFElem r{1, 0};
  while (e) {
    if (e & 1) r = smul(t, r, a);
    a = smul(t, a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t fpow(const Theory* t, std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = t->fmul(r, a);
    a = t->fmul(a, a);
    e >>= 1;
  }
  return r;
}

}  // namespace

void TheoryRegistry::build_field(Theory& t, std::uint64_t p, unsigned n, std::uint64_t eps) {
  if (!is_prime(p) || p == 2)
    raise(ErrorCode::InvalidTheory, "finite-field theory needs an odd prime p");
  if (n == 0) raise(ErrorCode::InvalidTheory, "finite-field extension degree must be positive");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (q > 4096 / p) raise(ErrorCode::TooLarge, "finite fields supported up to p^n <= 4096");
    q *= p;
  }
  t.kind_ = TheoryKind::FiniteField;
  t.p_ = p;
  t.n_ = n;
  t.q_ = q;
  if (n >= 2) {
    // deterministic modulus: first monic irreducible in base-p counting order
    for (std::uint64_t k = 0;; ++k) {
      Poly f = decode_poly(k, p, n);
      f.push_back(1);
      bool irreducible = true;
      for (unsigned d = 1; irreducible && 2 * d <= n; ++d) {
        std::uint64_t pd = 1;
        for (unsigned i = 0; i < d; ++i) pd *= p;
        for (std::uint64_t j = 0; j < pd; ++j) {
          Poly div = decode_poly(j, p, d);
          div.push_back(1);
          if (poly_divides(div, f, p)) {
            irreducible = false;
            break;
          }
        }
      }
      if (irreducible) {
        t.modulus_ = f;
        break;
      }
    }
  }
  if (eps >= q) raise(ErrorCode::InvalidTheory, "epsilon out of range");
  // epsilon must be primitive: multiplicative order exactly q-1
  if (eps == 0) raise(ErrorCode::InvalidTheory, "epsilon must be nonzero");
  for (std::uint64_t r : prime_factors(q - 1))
    if (fpow(&t, eps, (q - 1) / r) == 1)
      raise(ErrorCode::InvalidTheory, "epsilon is not a primitive element");
  t.eps_ = eps;
  // canonical phase generator: first norm-1 element (x + q*y key order) of order q+1
  auto factors = prime_factors(q + 1);
  for (std::uint64_t key = 0; key < q * q; ++key) {
    FFElem z{key % q, key / q};
    std::uint64_t norm = t.fadd(t.fmul(z.x, z.x), t.fneg(t.fmul(eps, t.fmul(z.y, z.y))));
    if (norm != 1) continue;
    bool full_order = true;
    for (std::uint64_t r : factors)
      if (spow(&t, z, (q + 1) / r) == FFElem{1, 0}) {
        full_order = false;
        break;
      }
    if (full_order) {
      t.gen_ = z;
      return;
    }
  }
  raise(ErrorCode::InvalidTheory, "no norm-1 generator found");
}

std::uint64_t Theory::fadd(std::uint64_t a, std::uint64_t b) const {
  if (n_ == 1) return (a + b) % p_;
  Poly ca = decode_poly(a, p_, n_), cb = decode_poly(b, p_, n_);
  for (unsigned i = 0; i < n_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
  return encode_poly(ca, p_, n_);
}

std::uint64_t Theory::fneg(std::uint64_t a) const {
  if (n_ == 1) return (p_ - a % p_) % p_;
  Poly c = decode_poly(a, p_, n_);
  for (unsigned i = 0; i < n_; ++i) c[i] = (p_ - c[i]) % p_;
  return encode_poly(c, p_, n_);
}

std::uint64_t Theory::fmul(std::uint64_t a, std::uint64_t b) const {
  if (n_ == 1) return (a * b) % p_;
  Poly r = poly_mul(decode_poly(a, p_, n_), decode_poly(b, p_, n_), p_);
  poly_mod(r, modulus_, p_);
  return encode_poly(r, p_, n_);
}

std::uint64_t Theory::finv(std::uint64_t a) const {
  if (a == 0) raise(ErrorCode::NotInvertible, "zero in F_{p^n}");
  return fpow(this, a, q_ - 2);
}

std::string Theory::spec_string() const {
  switch (kind_) {
    case TheoryKind::Complex: return "complex";
    case TheoryKind::Real: return "real";
    case TheoryKind::Boolean: return "bool";
    case TheoryKind::SplitComplex: return "splitc";
    case TheoryKind::Parity: return "parity";
    case TheoryKind::Tropical: return "tropical";
    case TheoryKind::FiniteField: {
      std::ostringstream os;
      os << "ff:" << p_ << "^" << n_ << ":" << eps_;
      return os.str();
    }
  }
  return "?";
}

const Theory* Theory::complex_theory() { return TheoryRegistry::simple(TheoryKind::Complex); }
const Theory* Theory::real_theory() { return TheoryRegistry::simple(TheoryKind::Real); }
const Theory* Theory::boolean_theory() { return TheoryRegistry::simple(TheoryKind::Boolean); }
const Theory* Theory::split_complex() { return TheoryRegistry::simple(TheoryKind::SplitComplex); }
const Theory* Theory::parity() { return TheoryRegistry::simple(TheoryKind::Parity); }
const Theory* Theory::tropical() { return TheoryRegistry::simple(TheoryKind::Tropical); }
const Theory* Theory::finite_field(std::uint64_t p, unsigned n, std::uint64_t eps) {
  return TheoryRegistry::finite_field(p, n, eps);
}

const Theory* Theory::parse(const std::string& spec) {
  if (spec == "complex") return complex_theory();
  if (spec == "real") return real_theory();
  if (spec == "bool") return boolean_theory();
  if (spec == "splitc") return split_complex();
  if (spec == "parity") return parity();
  if (spec == "tropical") return tropical();
  if (spec.rfind("ff:", 0) == 0) {
    std::uint64_t p = 0, eps = 0;
    unsigned n = 0;
    char sep = 0;
    std::istringstream is(spec.substr(3));
    if ((is >> p >> sep) && sep == '^' && (is >> n >> sep) && sep == ':' && (is >> eps) &&
        is.eof())
      return finite_field(p, n, eps);
    raise(ErrorCode::Usage, "bad finite-field spec, expected ff:p^n:eps");
  }
  raise(ErrorCode::Usage, "unknown theory spec '" + spec + "'");
}

// ---------------------------------------------------------------------------

Scalar::Scalar() : theory_(Theory::complex_theory()), v_(std::complex<double>(0, 0)) {}

Scalar Scalar::zero(const Theory* t) {
  Scalar s;
  s.theory_ = t;
  switch (t->kind()) {
    case TheoryKind::Complex: s.v_ = std::complex<double>(0, 0); break;
    case TheoryKind::Real: s.v_ = 0.0; break;
    case TheoryKind::Boolean:
    case TheoryKind::Parity: s.v_ = static_cast<unsigned char>(0); break;
    case TheoryKind::SplitComplex: s.v_ = SplitElem{0, 0}; break;
    case TheoryKind::FiniteField: s.v_ = FFElem{0, 0}; break;
    case TheoryKind::Tropical: s.v_ = TropElem{true, Rat(0)}; break;
  }
  return s;
}

Scalar Scalar::one(const Theory* t) {
  Scalar s = zero(t);
  switch (t->kind()) {
    case TheoryKind::Complex: s.v_ = std::complex<double>(1, 0); break;
    case TheoryKind::Real: s.v_ = 1.0; break;
    case TheoryKind::Boolean:
    case TheoryKind::Parity: s.v_ = static_cast<unsigned char>(1); break;
    case TheoryKind::SplitComplex: s.v_ = SplitElem{1, 0}; break;
    case TheoryKind::FiniteField: s.v_ = FFElem{1, 0}; break;
    case TheoryKind::Tropical: s.v_ = TropElem{false, Rat(0)}; break;
  }
  return s;
}

Scalar Scalar::from_int(const Theory* t, long long k) {
  switch (t->kind()) {
    case TheoryKind::Complex: return complex(static_cast<double>(k), 0);
    case TheoryKind::Real: return real(static_cast<double>(k));
    case TheoryKind::SplitComplex: return split(static_cast<double>(k), 0);
    case TheoryKind::Parity: return parity_bit(k & 1);
    case TheoryKind::FiniteField: {
      long long p = static_cast<long long>(t->p());
      return ff(t, static_cast<std::uint64_t>(((k % p) + p) % p), 0);
    }
    case TheoryKind::Boolean:
      if (k < 0) raise(ErrorCode::NotApplicable, "negative integer in Boolean theory");
      return boolean(k > 0);
    case TheoryKind::Tropical:
      if (k < 0) raise(ErrorCode::NotApplicable, "negative integer in tropical theory");
      return k == 0 ? zero(t) : one(t);
  }
  raise(ErrorCode::Usage, "bad theory");
}

Scalar Scalar::complex(double re, double im) {
  Scalar s;
  s.v_ = std::complex<double>(re, im);
  return s;
}
Scalar Scalar::real(double v) {
  Scalar s;
  s.theory_ = Theory::real_theory();
  s.v_ = v;
  return s;
}
Scalar Scalar::boolean(bool b) {
  Scalar s;
  s.theory_ = Theory::boolean_theory();
  s.v_ = static_cast<unsigned char>(b);
  return s;
}
Scalar Scalar::parity_bit(bool b) {
  Scalar s;
  s.theory_ = Theory::parity();
  s.v_ = static_cast<unsigned char>(b);
  return s;
}
Scalar Scalar::split(double x, double y) {
  Scalar s;
  s.theory_ = Theory::split_complex();
  s.v_ = SplitElem{x, y};
  return s;
}
Scalar Scalar::ff(const Theory* t, std::uint64_t x, std::uint64_t y) {
  if (t->kind() != TheoryKind::FiniteField) raise(ErrorCode::Usage, "not a finite-field theory");
  Scalar s;
  s.theory_ = t;
  s.v_ = FFElem{x % t->field_order(), y % t->field_order()};
  return s;
}
Scalar Scalar::tropical(const Rat& v) {
  Scalar s;
  s.theory_ = Theory::tropical();
  s.v_ = TropElem{false, v};
  return s;
}
Scalar Scalar::tropical_inf() { return zero(Theory::tropical()); }

std::complex<double> Scalar::as_complex() const { return std::get<std::complex<double>>(v_); }
double Scalar::as_real() const { return std::get<double>(v_); }
bool Scalar::as_bit() const { return std::get<unsigned char>(v_) != 0; }
SplitElem Scalar::as_split() const { return std::get<SplitElem>(v_); }
FFElem Scalar::as_ff() const { return std::get<FFElem>(v_); }
TropElem Scalar::as_trop() const { return std::get<TropElem>(v_); }

namespace {
void require_same(const Scalar& a, const Scalar& b) {
  if (a.theory() != b.theory())
    raise(ErrorCode::Usage, "theory mismatch between scalar operands");
}
}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  const Theory* t = a.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: {
      auto z = a.as_complex() + b.as_complex();
      return Scalar::complex(z.real(), z.imag());
    }
    case TheoryKind::Real: return Scalar::real(a.as_real() + b.as_real());
    case TheoryKind::Boolean: return Scalar::boolean(a.as_bit() || b.as_bit());
    case TheoryKind::Parity: return Scalar::parity_bit(a.as_bit() != b.as_bit());
    case TheoryKind::SplitComplex: {
      auto x = a.as_split(), y = b.as_split();
      return Scalar::split(x.x + y.x, x.y + y.y);
    }
    case TheoryKind::FiniteField: {
      auto x = a.as_ff(), y = b.as_ff();
      return Scalar::ff(t, t->fadd(x.x, y.x), t->fadd(x.y, y.y));
    }
    case TheoryKind::Tropical: {
      auto x = a.as_trop(), y = b.as_trop();
      if (x.inf) return b;
      if (y.inf) return a;
      return Scalar::tropical(std::min(x.v, y.v));
    }
  }
  raise(ErrorCode::Usage, "bad theory");
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  const Theory* t = a.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: {
      auto z = a.as_complex() * b.as_complex();
      return Scalar::complex(z.real(), z.imag());
    }
    case TheoryKind::Real: return Scalar::real(a.as_real() * b.as_real());
    case TheoryKind::Boolean: return Scalar::boolean(a.as_bit() && b.as_bit());
    case TheoryKind::Parity: return Scalar::parity_bit(a.as_bit() && b.as_bit());
    case TheoryKind::SplitComplex: {
      auto x = a.as_split(), y = b.as_split();  // (x1+jy1)(x2+jy2), j^2 = 1
      return Scalar::split(x.x * y.x + x.y * y.y, x.x * y.y + x.y * y.x);
    }
    case TheoryKind::FiniteField: {
      FFElem r = smul(t, a.as_ff(), b.as_ff());
      return Scalar::ff(t, r.x, r.y);
    }
    case TheoryKind::Tropical: {
      auto x = a.as_trop(), y = b.as_trop();
      if (x.inf || y.inf) return Scalar::tropical_inf();
      return Scalar::tropical(x.v + y.v);
    }
  }
  raise(ErrorCode::Usage, "bad theory");
}

bool Scalar::equals(const Scalar& b, double tol) const {
  if (theory_ != b.theory_) return false;
  return distance(b) <= tol;
}

double Scalar::distance(const Scalar& b) const {
  if (theory_ != b.theory_) return 1.0;
  switch (theory_->kind()) {
    case TheoryKind::Complex: {
      auto d = as_complex() - b.as_complex();
      return std::max(std::fabs(d.real()), std::fabs(d.imag()));
    }
    case TheoryKind::Real: return std::fabs(as_real() - b.as_real());
    case TheoryKind::SplitComplex: {
      auto x = as_split(), y = b.as_split();
      return std::max(std::fabs(x.x - y.x), std::fabs(x.y - y.y));
    }
    case TheoryKind::Boolean:
    case TheoryKind::Parity: return as_bit() == b.as_bit() ? 0.0 : 1.0;
    case TheoryKind::FiniteField: return as_ff() == b.as_ff() ? 0.0 : 1.0;
    case TheoryKind::Tropical: return as_trop() == b.as_trop() ? 0.0 : 1.0;
  }
  return 1.0;
}

Scalar involve(const Scalar& x) {
  const Theory* t = x.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: {
      auto z = std::conj(x.as_complex());
      return Scalar::complex(z.real(), z.imag());
    }
    case TheoryKind::SplitComplex: {
      auto s = x.as_split();
      return Scalar::split(s.x, -s.y);
    }
    case TheoryKind::FiniteField: {
      auto f = x.as_ff();
      return Scalar::ff(t, f.x, t->fneg(f.y));
    }
    default: return x;  // trivial involution
  }
}

Scalar born_norm(const Scalar& x) { return involve(x) * x; }

bool is_invertible(const Scalar& x) {
  const Theory* t = x.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: return std::abs(x.as_complex()) > tolerance();
    case TheoryKind::Real: return std::fabs(x.as_real()) > tolerance();
    case TheoryKind::Boolean:
    case TheoryKind::Parity: return x.as_bit();
    case TheoryKind::SplitComplex: {
      auto s = x.as_split();  // invertible iff the norm x^2 - y^2 is nonzero
      return std::fabs(s.x * s.x - s.y * s.y) > tolerance();
    }
    case TheoryKind::FiniteField: {
      auto f = x.as_ff();
      return !(f.x == 0 && f.y == 0);
    }
    case TheoryKind::Tropical: return !x.as_trop().inf;
  }
  return false;
}

Scalar invert(const Scalar& x) {
  if (!is_invertible(x)) raise(ErrorCode::NotInvertible, "scalar has no inverse");
  const Theory* t = x.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: {
      auto z = 1.0 / x.as_complex();
      return Scalar::complex(z.real(), z.imag());
    }
    case TheoryKind::Real: return Scalar::real(1.0 / x.as_real());
    case TheoryKind::Boolean: return Scalar::boolean(true);
    case TheoryKind::Parity: return Scalar::parity_bit(true);
    case TheoryKind::SplitComplex: {
      auto s = x.as_split();
      double nrm = s.x * s.x - s.y * s.y;
      return Scalar::split(s.x / nrm, -s.y / nrm);
    }
    case TheoryKind::FiniteField: {
      auto f = x.as_ff();  // (x - y sqrt(eps)) / (x^2 - eps y^2)
      std::uint64_t nrm = t->fadd(t->fmul(f.x, f.x), t->fneg(t->fmul(t->eps(), t->fmul(f.y, f.y))));
      std::uint64_t ninv = t->finv(nrm);
      return Scalar::ff(t, t->fmul(f.x, ninv), t->fmul(t->fneg(f.y), ninv));
    }
    case TheoryKind::Tropical: return Scalar::tropical(-x.as_trop().v);
  }
  raise(ErrorCode::Usage, "bad theory");
}

Scalar neg(const Scalar& x) {
  const Theory* t = x.theory();
  switch (t->kind()) {
    case TheoryKind::Complex: {
      auto z = -x.as_complex();
      return Scalar::complex(z.real(), z.imag());
    }
    case TheoryKind::Real: return Scalar::real(-x.as_real());
    case TheoryKind::Parity: return x;
    case TheoryKind::SplitComplex: {
      auto s = x.as_split();
      return Scalar::split(-s.x, -s.y);
    }
    case TheoryKind::FiniteField: {
      auto f = x.as_ff();
      return Scalar::ff(t, t->fneg(f.x), t->fneg(f.y));
    }
    case TheoryKind::Boolean:
    case TheoryKind::Tropical:
      if (x.is_zero()) return x;
      raise(ErrorCode::NotApplicable, "no additive inverses in this semiring");
  }
  raise(ErrorCode::Usage, "bad theory");
}

std::optional<Scalar> phase_of_order(const Theory* t, std::uint64_t d) {
  if (d == 0) raise(ErrorCode::Usage, "phase order must be positive");
  switch (t->kind()) {
    case TheoryKind::Complex:
      if (d == 1) return Scalar::complex(1, 0);
      if (d == 2) return Scalar::complex(-1, 0);
      if (d == 4) return Scalar::complex(0, 1);
      return Scalar::complex(std::cos(2 * std::numbers::pi / static_cast<double>(d)),
                             std::sin(2 * std::numbers::pi / static_cast<double>(d)));
    case TheoryKind::Real:
      if (d == 1) return Scalar::real(1);
      if (d == 2) return Scalar::real(-1);
      return std::nullopt;
    case TheoryKind::SplitComplex:
      if (d == 1) return Scalar::split(1, 0);
      if (d == 2) return Scalar::split(-1, 0);
      return std::nullopt;
    case TheoryKind::Boolean:
    case TheoryKind::Parity:
    case TheoryKind::Tropical:
      if (d == 1) return Scalar::one(t);
      return std::nullopt;
    case TheoryKind::FiniteField: {
      std::uint64_t m = t->phase_group_order();
      if (m % d != 0) return std::nullopt;
      FFElem z = spow(t, t->phase_generator(), m / d);
      return Scalar::ff(t, z.x, z.y);
    }
  }
  return std::nullopt;
}

namespace {

std::string fmt_double(double v) {
  if (v == 0) v = 0;  // canonicalize -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Scalar::str() const {
  switch (theory_->kind()) {
    case TheoryKind::Complex: {
      auto z = as_complex();
      if (z.imag() == 0) return fmt_double(z.real());
      return "(" + fmt_double(z.real()) + "," + fmt_double(z.imag()) + ")";
    }
    case TheoryKind::Real: return fmt_double(as_real());
    case TheoryKind::Boolean:
    case TheoryKind::Parity: return as_bit() ? "1" : "0";
    case TheoryKind::SplitComplex: {
      auto s = as_split();
      if (s.y == 0) return fmt_double(s.x);
      return "(" + fmt_double(s.x) + "," + fmt_double(s.y) + "j)";
    }
    case TheoryKind::FiniteField: {
      auto f = as_ff();
      if (f.y == 0) return std::to_string(f.x);
      return "(" + std::to_string(f.x) + "," + std::to_string(f.y) + ")";
    }
    case TheoryKind::Tropical: {
      auto v = as_trop();
      if (v.inf) return "inf";
      std::ostringstream os;
      os << v.v;
      return os.str();
    }
  }
  return "?";
}

std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto a = parse_rational(s.substr(0, slash)), b = parse_rational(s.substr(slash + 1));
    if (!a || !b || *b == 0) return std::nullopt;
    return *a / *b;
  }
  // sign, integer part, optional fraction, optional exponent
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  boost::multiprecision::cpp_int num = 0;
  long long scale = 0;
  bool any_digit = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    num = num * 10 + (s[i] - '0');
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    for (++i; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      num = num * 10 + (s[i] - '0');
      --scale;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    long long e = 0;
    bool edigit = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      e = e * 10 + (s[i] - '0');
      edigit = true;
    }
    if (!edigit) return std::nullopt;
    scale += eneg ? -e : e;
  }
  if (i != s.size()) return std::nullopt;
  Rat r(num);
  boost::multiprecision::cpp_int ten = 10;
  for (long long k = 0; k < std::llabs(scale); ++k) {
    if (scale > 0)
      r *= ten;
    else
      r /= ten;
  }
  if (negative) r = -r;
  return r;
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

namespace {

std::optional<std::pair<double, double>> parse_pair(const std::string& s, char tail) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  std::string body = s.substr(1, s.size() - 2);
  if (tail && !body.empty() && body.back() == tail) body.pop_back();
  auto comma = body.find(',');
  if (comma == std::string::npos) return std::nullopt;
  auto a = parse_rational(body.substr(0, comma)), b = parse_rational(body.substr(comma + 1));
  if (!a || !b) return std::nullopt;
  return std::make_pair(rat_to_double(*a), rat_to_double(*b));
}

}  // namespace

Scalar Scalar::parse(const Theory* t, const std::string& s) {
  switch (t->kind()) {
    case TheoryKind::Complex: {
      if (auto pr = parse_pair(s, 0)) return complex(pr->first, pr->second);
      if (auto r = parse_rational(s)) return complex(rat_to_double(*r), 0);
      break;
    }
    case TheoryKind::Real: {
      if (auto r = parse_rational(s)) return real(rat_to_double(*r));
      break;
    }
    case TheoryKind::Boolean:
    case TheoryKind::Parity: {
      if (s == "0") return t->kind() == TheoryKind::Boolean ? boolean(false) : parity_bit(false);
      if (s == "1") return t->kind() == TheoryKind::Boolean ? boolean(true) : parity_bit(true);
      break;
    }
    case TheoryKind::SplitComplex: {
      if (auto pr = parse_pair(s, 'j')) return split(pr->first, pr->second);
      if (auto r = parse_rational(s)) return split(rat_to_double(*r), 0);
      break;
    }
    case TheoryKind::FiniteField: {
      if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        std::string body = s.substr(1, s.size() - 2);
        auto comma = body.find(',');
        if (comma != std::string::npos) {
          try {
            std::uint64_t x = std::stoull(body.substr(0, comma));
            std::uint64_t y = std::stoull(body.substr(comma + 1));
            return ff(t, x, y);
          } catch (const std::exception&) {
          }
        }
      } else {
        try {
          return ff(t, std::stoull(s), 0);
        } catch (const std::exception&) {
        }
      }
      break;
    }
    case TheoryKind::Tropical: {
      if (s == "inf") return tropical_inf();
      if (auto r = parse_rational(s)) return tropical(*r);
      break;
    }
  }
  raise(ErrorCode::Usage, "cannot parse scalar '" + s + "' for theory " + t->spec_string());
}

}  // namespace cqmkit
