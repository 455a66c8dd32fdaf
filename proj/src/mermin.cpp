#include "cqmkit/mermin.hpp"

#include <numeric>

#include "cqmkit/error.hpp"

namespace cqmkit {

namespace {

constexpr long long kCosetCap = 1000000;   // enumerated coset tuples per context
constexpr long long kStateCap = 65536;     // state-vector dimension |K|^N

long long checked_pow(long long base, std::size_t e, long long cap, const char* what) {
  long long v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > cap / base) raise(ErrorCode::TooLarge, what);
    v *= base;
  }
  return v;
}

double weight_as_probability(const Scalar& w) {
  switch (w.theory()->kind()) {
    case TheoryKind::Complex: {
      auto c = w.as_complex();
      if (std::abs(c.imag()) > tolerance())
        raise(ErrorCode::NotApplicable, "weight has an imaginary part");
      return c.real();
    }
    case TheoryKind::Real:
      return w.as_real();
    case TheoryKind::SplitComplex: {
      auto s = w.as_split();
      if (std::abs(s.y) > tolerance())
        raise(ErrorCode::NotApplicable, "weight has a hyperbolic part");
      return s.x;
    }
    default:
      raise(ErrorCode::NotApplicable, "weights of this theory are not probabilities");
  }
}

// occurrence counts per equation, validated nonnegative in build_argument
long long count_sum(const Equation& eq) {
  long long s = 0;
  for (long long c : eq.coeffs) s += c;
  return s;
}

// decodes a flat key into the first N-1 outcome indices and appends the one
// element completing the sum to `target`; returns the full index tuple
std::vector<long long> coset_tuple(const FinAbGroup& K, std::size_t N, long long key,
                                   const GroupElement& target) {
  std::vector<long long> t(N, 0);
  GroupElement sum = GroupElement::zero(K);
  for (std::size_t j = N - 1; j-- > 0;) {
    t[j] = key % K.order();
    key /= K.order();
  }
  for (std::size_t j = 0; j + 1 < N; ++j) sum = sum + GroupElement::from_index(K, t[j]);
  t[N - 1] = (target - sum).index();
  return t;
}

}  // namespace

PhaseState embed_torus_phase(const Theory* t, const FinAbGroup& K, const TorusPoint& p) {
  if (static_cast<long long>(p.size()) != K.order() - 1)
    raise(ErrorCode::Usage, "torus point has the wrong number of coordinates");
  std::vector<Scalar> amps;
  amps.reserve(static_cast<std::size_t>(K.order()));
  amps.push_back(Scalar::one(t));
  for (const Rat& coord : p) {
    Rat q = frac_mod1(coord);
    long long den = boost::multiprecision::denominator(q).convert_to<long long>();
    long long num = boost::multiprecision::numerator(q).convert_to<long long>();
    auto zeta = phase_of_order(t, static_cast<std::uint64_t>(den));
    if (!zeta)
      raise(ErrorCode::NotRealizable,
            "theory has no phase of order " + std::to_string(den));
    Scalar a = Scalar::one(t);
    for (long long i = 0; i < num; ++i) a = a * *zeta;
    amps.push_back(a);
  }
  return PhaseState{static_cast<std::size_t>(K.order()), std::move(amps)};
}

MerminArgument build_argument(const FinAbGroup& K, const EquationSystem& system,
                              std::optional<std::size_t> N, const Theory* theory) {
  for (const Equation& eq : system.rows) {
    if (eq.coeffs.size() != system.variables)
      raise(ErrorCode::Usage, "equation width does not match the variable count");
    if (!(eq.rhs.group() == K))
      raise(ErrorCode::Usage, "equation right-hand side lives in a different group");
    for (long long c : eq.coeffs)
      if (c < 0) raise(ErrorCode::Usage, "coefficients are party counts and cannot be negative");
  }
  // a variable below a measured one must itself be measured somewhere, or the
  // emitted contexts would skip a measurement label
  std::size_t max_used = 0;
  for (std::size_t r = 0; r < system.variables; ++r)
    for (const Equation& eq : system.rows)
      if (eq.coeffs[r] > 0) max_used = r + 1;
  for (std::size_t r = 0; r < max_used; ++r) {
    bool used = false;
    for (const Equation& eq : system.rows) used = used || eq.coeffs[r] > 0;
    if (!used) raise(ErrorCode::Usage, "variable is never measured but a later one is");
  }

  long long need = 1;
  for (const Equation& eq : system.rows) need = std::max(need, count_sum(eq));
  long long exp = K.exponent();
  std::size_t n;
  if (N) {
    n = *N;
    if (n == 0 || std::gcd(static_cast<long long>(n), exp) != 1)
      raise(ErrorCode::BadN, "party count must be coprime to the group exponent");
    if (static_cast<long long>(n) < need)
      raise(ErrorCode::BadN, "party count is smaller than an equation's measurement count");
  } else {
    long long guess = need;
    while (std::gcd(guess, exp) != 1) ++guess;
    n = static_cast<std::size_t>(guess);
  }

  auto beta = solve_in_torus(system, K);
  if (!beta) raise(ErrorCode::Unsolvable, "system has no solution in the phase torus");
  for (long long k = 1; k < K.order(); ++k) {
    DualElement chi = DualElement::from_index(K, k);
    for (const Equation& eq : system.rows) {
      Rat lhs(0);
      for (std::size_t r = 0; r < system.variables; ++r)
        lhs += Rat(eq.coeffs[r]) * (*beta)[r][static_cast<std::size_t>(k - 1)];
      if (frac_mod1(lhs - char_eval(chi, eq.rhs)) != 0)
        raise(ErrorCode::PreconditionFailed, "torus solution fails re-evaluation");
    }
  }
  if (theory)
    for (const TorusPoint& p : *beta) embed_torus_phase(theory, K, p);

  MerminArgument arg{K, system, n, *beta, {}};
  for (const Equation& eq : system.rows)
    arg.zero_pad.push_back(static_cast<long long>(n) - count_sum(eq));
  return arg;
}

std::vector<std::vector<std::size_t>> contexts(const MerminArgument& arg) {
  std::vector<std::vector<std::size_t>> out;
  out.emplace_back(arg.N, 0);
  for (std::size_t s = 0; s < arg.system.rows.size(); ++s) {
    std::vector<std::size_t> first;
    first.reserve(arg.N);
    first.insert(first.end(), static_cast<std::size_t>(arg.zero_pad[s]), 0);
    for (std::size_t r = 0; r < arg.system.variables; ++r)
      first.insert(first.end(), static_cast<std::size_t>(arg.system.rows[s].coeffs[r]), r + 1);
    for (std::size_t k = 0; k < arg.N; ++k) {
      std::vector<std::size_t> ctx(arg.N);
      for (std::size_t j = 0; j < arg.N; ++j) ctx[j] = first[(j + k) % arg.N];
      out.push_back(std::move(ctx));
    }
  }
  return out;
}

Scenario scenario_of(const MerminArgument& arg) {
  auto ctxs = contexts(arg);
  std::size_t max_choice = 0;
  for (const auto& c : ctxs)
    for (std::size_t m : c) max_choice = std::max(max_choice, m);
  return Scenario{arg.N, std::vector<std::size_t>(arg.N, max_choice + 1), arg.K,
                  std::move(ctxs)};
}

EmpiricalModel analytic_model(const MerminArgument& arg) {
  Scenario sc = scenario_of(arg);
  long long coset = checked_pow(arg.K.order(), arg.N - 1, kCosetCap, "coset enumeration");
  Rat w = Rat(1) / Rat(coset);

  EmpiricalModel em{sc, {}, true};
  std::vector<GroupElement> targets{GroupElement::zero(arg.K)};
  for (const Equation& eq : arg.system.rows)
    targets.insert(targets.end(), arg.N, eq.rhs);
  for (const GroupElement& a : targets) {
    std::map<std::vector<long long>, Rat> table;
    for (long long key = 0; key < coset; ++key) table.emplace(coset_tuple(arg.K, arg.N, key, a), w);
    em.tables.push_back(std::move(table));
  }
  return em;
}

EmpiricalModel quantum_model(const MerminArgument& arg, const Theory* t) {
  long long d = arg.K.order();
  long long dim = checked_pow(d, arg.N, kStateCap, "state vector");
  CoherentGroupData cg = coherent_group(t, arg.K);
  std::vector<Mat> chars = classical_states_of_group_structure(cg);

  std::vector<std::vector<Scalar>> conj_char(
      static_cast<std::size_t>(d), std::vector<Scalar>(static_cast<std::size_t>(d), Scalar::zero(t)));
  for (long long k = 0; k < d; ++k)
    for (long long g = 0; g < d; ++g)
      conj_char[k][g] = involve(chars[static_cast<std::size_t>(k)].at(static_cast<std::size_t>(g), 0));

  std::vector<PhaseState> phi;
  phi.push_back(PhaseState{static_cast<std::size_t>(d),
                           std::vector<Scalar>(static_cast<std::size_t>(d), Scalar::one(t))});
  for (const TorusPoint& p : arg.beta) phi.push_back(embed_torus_phase(t, arg.K, p));

  Scenario sc = scenario_of(arg);
  Scalar inv_total = invert(Scalar::from_int(t, dim * d));
  long long diag_step = d > 1 ? (dim - 1) / (d - 1) : 1;

  EmpiricalModel em{sc, {}, false};
  for (const auto& ctx : sc.contexts) {
    std::vector<PhaseState> party_phases;
    party_phases.reserve(arg.N);
    for (std::size_t m : ctx) party_phases.push_back(phi[m]);
    Mat psi = ghz_with_phases(cg, arg.N, party_phases);
    std::vector<Scalar> diag;
    for (long long g = 0; g < d; ++g)
      diag.push_back(psi.at(static_cast<std::size_t>(g * diag_step), 0));

    std::map<std::vector<long long>, Rat> table;
    std::vector<long long> ks(arg.N, 0);
    for (long long outcome = 0; outcome < dim; ++outcome) {
      Scalar amp = Scalar::zero(t);
      for (long long g = 0; g < d; ++g) {
        Scalar prod = diag[static_cast<std::size_t>(g)];
        for (std::size_t j = 0; j < arg.N; ++j)
          prod = prod * conj_char[static_cast<std::size_t>(ks[j])][static_cast<std::size_t>(g)];
        amp = amp + prod;
      }
      double p = weight_as_probability(born_norm(amp) * inv_total);
      if (p != 0.0) table.emplace(ks, Rat(p));
      for (std::size_t j = arg.N; j-- > 0;) {
        if (++ks[j] < d) break;
        ks[j] = 0;
      }
    }
    em.tables.push_back(std::move(table));
  }
  return em;
}

ContextualityDecision decide_contextual(const MerminArgument& arg) {
  auto sol = solve_system(arg.system, arg.K);
  if (!sol) return ContextualityDecision{true, std::nullopt, std::nullopt};

  Scenario sc = scenario_of(arg);
  long long coset = checked_pow(arg.K.order(), arg.N - 1, kCosetCap, "hidden variable enumeration");
  Rat w = Rat(1) / Rat(coset);
  std::vector<GroupElement> b{GroupElement::zero(arg.K)};
  for (const GroupElement& br : *sol) b.push_back(br);

  WeightedAssignments lhv;
  lhv.reserve(static_cast<std::size_t>(coset));
  GroupElement zero = GroupElement::zero(arg.K);
  for (long long key = 0; key < coset; ++key) {
    std::vector<long long> h = coset_tuple(arg.K, arg.N, key, zero);
    GlobalAssignment ga{arg.K, {}};
    ga.value.reserve(arg.N);
    for (std::size_t j = 0; j < arg.N; ++j) {
      GroupElement hj = GroupElement::from_index(arg.K, h[j]);
      std::vector<long long> row;
      row.reserve(sc.choices[j]);
      for (std::size_t m = 0; m < sc.choices[j]; ++m) row.push_back((hj + b[m]).index());
      ga.value.push_back(std::move(row));
    }
    lhv.emplace_back(std::move(ga), w);
  }

  if (mixture_tables(sc, lhv) != analytic_model(arg).tables)
    raise(ErrorCode::PreconditionFailed, "constructed local model fails to reproduce the tables");
  return ContextualityDecision{false, std::move(*sol), std::move(lhv)};
}

AvnResult avn_certificate(const MerminArgument& arg) {
  EmpiricalModel em = analytic_model(arg);
  std::vector<AvnEquation> eqs;
  std::vector<long long> ones(arg.N, 1);
  eqs.push_back(AvnEquation{0, ones, GroupElement::zero(arg.K).coords()});
  for (std::size_t s = 0; s < arg.system.rows.size(); ++s)
    for (std::size_t k = 0; k < arg.N; ++k)
      eqs.push_back(AvnEquation{1 + s * arg.N + k, ones, arg.system.rows[s].rhs.coords()});
  return avn_check(em, eqs);
}

}  // namespace cqmkit
