#include "cqmkit/hbb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "cqmkit/error.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/rng.hpp"

namespace cqmkit {

namespace {

constexpr long long kCosetCap = 1000000;     // enumerated coset tuples per context
constexpr long long kInterceptCap = 256;     // state-vector dimension |K|^N for intercepts

long long checked_pow(long long base, std::size_t e, long long cap, const char* what) {
  long long r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && r > cap / base)
      raise(ErrorCode::TooLarge, std::string(what) + " exceeds the supported size");
    r *= base;
  }
  return r;
}

// independent per-round stream: splitmix64 of (seed, round)
std::uint64_t round_seed(std::uint64_t seed, std::uint64_t w) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (w + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

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

std::size_t s_of_context(std::size_t ctx, std::size_t N) {
  return ctx == 0 ? 0 : (ctx - 1) / N + 1;
}

GroupElement target_of_s(const MerminArgument& arg, std::size_t s) {
  return s == 0 ? GroupElement::zero(arg.K) : arg.system.rows[s - 1].rhs;
}

void validate_config(const ProtocolConfig& cfg) {
  if (cfg.players < 2 || cfg.players >= cfg.argument.N)
    raise(ErrorCode::Usage, "player count must satisfy 2 <= N' < N");
  if (!(cfg.tau > 0.0) || !(cfg.tau < 1.0))
    raise(ErrorCode::Usage, "test probability must lie strictly between 0 and 1");
  if (!(cfg.eps_max >= 0.0) || !(cfg.eps_max <= 1.0))
    raise(ErrorCode::Usage, "eps_max must lie in [0, 1]");
}

struct Sampler {
  std::vector<std::vector<long long>> outcomes;
  std::vector<double> cum;

  const std::vector<long long>& draw(double u) const {
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t i = it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
    return outcomes[i];
  }
};

Sampler make_sampler(const std::map<std::vector<long long>, Rat>& table) {
  Sampler s;
  double acc = 0;
  for (const auto& [k, w] : table) {
    acc += w.convert_to<double>();
    s.outcomes.push_back(k);
    s.cum.push_back(acc);
  }
  if (s.outcomes.empty()) raise(ErrorCode::PreconditionFailed, "empty outcome table");
  return s;
}

bool in_promised_support(const MerminArgument& arg, std::size_t s,
                         const std::vector<long long>& g) {
  GroupElement sum = GroupElement::zero(arg.K);
  for (long long gi : g) sum = sum + GroupElement::from_index(arg.K, gi);
  return sum == target_of_s(arg, s);
}

// shared round loop; gen(rng, ctx) produces the joint outcome tuple
template <typename Gen>
Transcript run_core(const ProtocolConfig& cfg, Gen&& gen) {
  const MerminArgument& arg = cfg.argument;
  auto ctxs = contexts(arg);
  long long order = arg.K.order();

  Transcript tr;
  std::vector<std::map<std::vector<long long>, long long>> counts(ctxs.size());
  std::vector<long long> tests(ctxs.size(), 0);
  for (std::size_t w = 0; w < cfg.rounds; ++w) {
    Rng rng(round_seed(cfg.seed, w));
    std::size_t ctx = static_cast<std::size_t>(rng.below(ctxs.size()));
    bool test = rng.uniform() < cfg.tau;
    std::vector<long long> g = gen(rng, ctx);
    RoundRecord rec{ctx, g, test, std::nullopt, std::nullopt};
    if (test) {
      ++counts[ctx][g];
      ++tests[ctx];
    } else {
      std::size_t s = s_of_context(ctx, arg.N);
      long long p = static_cast<long long>(rng.below(static_cast<std::uint64_t>(order)));
      long long pad = static_cast<long long>(rng.below(static_cast<std::uint64_t>(order)));
      GroupElement c = GroupElement::from_index(arg.K, p);
      for (std::size_t j = cfg.players; j < arg.N; ++j)
        c = c + GroupElement::from_index(arg.K, g[j]);
      rec.ciphertext = c.index();
      rec.s_value = s;
      tr.plaintext.push_back(p);
      tr.pad.push_back(pad);
      std::vector<long long> keys(g.begin(), g.begin() + static_cast<long long>(cfg.players));
      tr.decoded.push_back(decode_round(arg, s, c.index(), keys));
    }
    tr.rounds.push_back(std::move(rec));
  }

  // raw observed tables; epsilon pools each context's mass over its coset
  tr.observed.assign(ctxs.size(), {});
  double worst = 0.0;
  for (std::size_t c = 0; c < ctxs.size(); ++c) {
    if (tests[c] == 0) continue;
    long long in = 0;
    for (const auto& [g, n] : counts[c]) {
      tr.observed[c].emplace(g, Rat(n, tests[c]));
      if (in_promised_support(arg, s_of_context(c, arg.N), g)) in += n;
    }
    worst = std::max(worst, 1.0 - static_cast<double>(in) / static_cast<double>(tests[c]));
  }
  tr.epsilon = worst;
  tr.success = tr.epsilon <= cfg.eps_max;
  tr.pad_broadcast = tr.success;
  return tr;
}

// full-state simulation of one intercepted round
struct InterceptSim {
  std::size_t N = 0;
  long long order = 0;
  long long dim = 0;   // order^N
  long long rest = 0;  // order^(N-1)
  std::vector<std::vector<std::complex<double>>> chars;   // chars[k][g]
  std::vector<std::vector<std::complex<double>>> phases;  // phases[m][g]
  std::vector<std::vector<std::size_t>> ctxs;
  std::vector<long long> stride;  // stride[j] = order^(N-1-j)

  std::vector<long long> run_round(Rng& rng, std::size_t ctx) const {
    std::vector<std::complex<double>> psi(static_cast<std::size_t>(dim), 0.0);
    double a0 = 1.0 / std::sqrt(static_cast<double>(order));
    long long diag_step = order > 1 ? (dim - 1) / (order - 1) : 1;
    for (long long g = 0; g < order; ++g) psi[static_cast<std::size_t>(g * diag_step)] = a0;

    // the first player's subsystem collapses in the character basis
    std::vector<std::vector<std::complex<double>>> collapsed(
        static_cast<std::size_t>(order),
        std::vector<std::complex<double>>(static_cast<std::size_t>(dim), 0.0));
    std::vector<double> pe(static_cast<std::size_t>(order), 0.0);
    for (long long e = 0; e < order; ++e) {
      auto& phi = collapsed[static_cast<std::size_t>(e)];
      for (long long r = 0; r < rest; ++r) {
        std::complex<double> overlap = 0.0;
        for (long long g = 0; g < order; ++g)
          overlap += std::conj(chars[static_cast<std::size_t>(e)][static_cast<std::size_t>(g)]) *
                     psi[static_cast<std::size_t>(g * rest + r)];
        for (long long g = 0; g < order; ++g)
          phi[static_cast<std::size_t>(g * rest + r)] =
              chars[static_cast<std::size_t>(e)][static_cast<std::size_t>(g)] * overlap /
              static_cast<double>(order);
      }
      for (const auto& z : phi) pe[static_cast<std::size_t>(e)] += std::norm(z);
    }
    double u = rng.uniform();
    long long eve = order - 1;
    double acc = 0;
    for (long long e = 0; e < order; ++e) {
      acc += pe[static_cast<std::size_t>(e)];
      if (u < acc) {
        eve = e;
        break;
      }
    }
    double scale = 1.0 / std::sqrt(pe[static_cast<std::size_t>(eve)]);
    psi = collapsed[static_cast<std::size_t>(eve)];
    for (auto& z : psi) z *= scale;

    for (long long idx = 0; idx < dim; ++idx) {
      std::complex<double> f = 1.0;
      for (std::size_t j = 0; j < N; ++j) {
        long long digit = idx / stride[j] % order;
        f *= phases[ctxs[ctx][j]][static_cast<std::size_t>(digit)];
      }
      psi[static_cast<std::size_t>(idx)] *= f;
    }

    // joint character-basis measurement
    double u2 = rng.uniform();
    double cum = 0;
    double inv_total = 1.0 / static_cast<double>(dim);  // |K|^N from N basis normalizations
    for (long long t = 0; t < dim; ++t) {
      std::complex<double> amp = 0.0;
      for (long long idx = 0; idx < dim; ++idx) {
        std::complex<double> f = psi[static_cast<std::size_t>(idx)];
        for (std::size_t j = 0; j < N; ++j) {
          long long k = t / stride[j] % order;
          long long digit = idx / stride[j] % order;
          f *= std::conj(chars[static_cast<std::size_t>(k)][static_cast<std::size_t>(digit)]);
        }
        amp += f;
      }
      cum += std::norm(amp) * inv_total;
      if (u2 < cum || t == dim - 1) {
        std::vector<long long> out(N);
        for (std::size_t j = 0; j < N; ++j) out[j] = t / stride[j] % order;
        return out;
      }
    }
    raise(ErrorCode::PreconditionFailed, "outcome sampling fell through");
  }
};

}  // namespace

double noise_parameter(const std::vector<std::map<std::vector<long long>, Rat>>& observed,
                       const MerminArgument& argument) {
  auto ctxs = contexts(argument);
  if (observed.size() != ctxs.size())
    raise(ErrorCode::MissingContext, "observed tables must cover every context");
  long long coset =
      checked_pow(argument.K.order(), argument.N - 1, kCosetCap, "promised support");
  std::optional<Rat> min_weight;
  for (std::size_t c = 0; c < ctxs.size(); ++c) {
    if (observed[c].empty())
      raise(ErrorCode::MissingContext, "no observations for context " + std::to_string(c));
    GroupElement a = target_of_s(argument, s_of_context(c, argument.N));
    for (long long key = 0; key < coset; ++key) {
      auto it = observed[c].find(coset_tuple(argument.K, argument.N, key, a));
      Rat w = it == observed[c].end() ? Rat(0) : it->second;
      if (!min_weight || w < *min_weight) min_weight = w;
    }
  }
  Rat eps = Rat(1) - Rat(coset) * *min_weight;
  return eps.convert_to<double>();
}

long long decode_round(const MerminArgument& argument, std::size_t s_value, long long ciphertext,
                       const std::vector<long long>& player_keys) {
  if (s_value > argument.system.rows.size())
    raise(ErrorCode::Usage, "s value does not name an equation");
  GroupElement acc = GroupElement::from_index(argument.K, ciphertext);
  for (long long k : player_keys) acc = acc + GroupElement::from_index(argument.K, k);
  return (acc - target_of_s(argument, s_value)).index();
}

Transcript run_honest(const ProtocolConfig& cfg) {
  validate_config(cfg);
  EmpiricalModel qm = quantum_model(cfg.argument, Theory::complex_theory());
  std::vector<Sampler> samplers;
  for (const auto& table : qm.tables) samplers.push_back(make_sampler(table));
  return run_core(cfg, [&](Rng& rng, std::size_t ctx) { return samplers[ctx].draw(rng.uniform()); });
}

std::pair<Transcript, EveKnowledge> run_attack_noncontextual(const ProtocolConfig& cfg) {
  validate_config(cfg);
  const MerminArgument& arg = cfg.argument;
  ContextualityDecision dec = decide_contextual(arg);
  if (dec.contextual)
    raise(ErrorCode::PreconditionFailed,
          "the argument is contextual: the separable attack needs a solution in K");
  std::vector<GroupElement> b{GroupElement::zero(arg.K)};
  b.insert(b.end(), dec.solution->begin(), dec.solution->end());

  auto ctxs = contexts(arg);
  long long coset = checked_pow(arg.K.order(), arg.N - 1, kCosetCap, "hidden state space");
  GroupElement zero = GroupElement::zero(arg.K);
  EveKnowledge eve;
  Transcript tr = run_core(cfg, [&](Rng& rng, std::size_t ctx) {
    long long key = static_cast<long long>(rng.below(static_cast<std::uint64_t>(coset)));
    std::vector<long long> h = coset_tuple(arg.K, arg.N, key, zero);
    std::vector<long long> g(arg.N);
    for (std::size_t j = 0; j < arg.N; ++j)
      g[j] = (GroupElement::from_index(arg.K, h[j]) + b[ctxs[ctx][j]]).index();
    eve.keys.emplace_back(g.begin(), g.begin() + static_cast<long long>(cfg.players));
    return g;
  });

  // Eve decodes every broadcast ciphertext with the keys she inferred
  for (std::size_t w = 0; w < tr.rounds.size(); ++w) {
    const RoundRecord& rec = tr.rounds[w];
    if (rec.test) continue;
    eve.decoded.push_back(decode_round(arg, *rec.s_value, *rec.ciphertext, eve.keys[w]));
  }
  return {std::move(tr), std::move(eve)};
}

Transcript eavesdrop_intercept(const ProtocolConfig& cfg, double eavesdrop_rate) {
  validate_config(cfg);
  if (!(eavesdrop_rate >= 0.0) || !(eavesdrop_rate <= 1.0))
    raise(ErrorCode::Usage, "eavesdrop rate must lie in [0, 1]");
  const MerminArgument& arg = cfg.argument;
  EmpiricalModel qm = quantum_model(arg, Theory::complex_theory());
  std::vector<Sampler> samplers;
  for (const auto& table : qm.tables) samplers.push_back(make_sampler(table));

  InterceptSim sim;
  sim.N = arg.N;
  sim.order = arg.K.order();
  sim.dim = checked_pow(sim.order, arg.N, kInterceptCap, "intercept state vector");
  sim.rest = sim.dim / sim.order;
  sim.ctxs = contexts(arg);
  CoherentGroupData cg = coherent_group(Theory::complex_theory(), arg.K);
  for (const Mat& chi : classical_states_of_group_structure(cg)) {
    std::vector<std::complex<double>> col;
    for (std::size_t g = 0; g < chi.rows(); ++g) col.push_back(chi.at(g, 0).as_complex());
    sim.chars.push_back(std::move(col));
  }
  sim.phases.push_back(std::vector<std::complex<double>>(static_cast<std::size_t>(sim.order), 1.0));
  for (const TorusPoint& beta : arg.beta) {
    PhaseState ps = embed_torus_phase(Theory::complex_theory(), arg.K, beta);
    std::vector<std::complex<double>> col;
    for (const Scalar& a : ps.amplitudes) col.push_back(a.as_complex());
    sim.phases.push_back(std::move(col));
  }
  sim.stride.assign(arg.N, 1);
  for (std::size_t j = arg.N - 1; j-- > 0;) sim.stride[j] = sim.stride[j + 1] * sim.order;

  return run_core(cfg, [&](Rng& rng, std::size_t ctx) {
    bool intercept = rng.uniform() < eavesdrop_rate;
    if (intercept) return sim.run_round(rng, ctx);
    return samplers[ctx].draw(rng.uniform());
  });
}

}  // namespace cqmkit
