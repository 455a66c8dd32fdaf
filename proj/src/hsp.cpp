#include "cqmkit/hsp.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "cqmkit/error.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/rng.hpp"
#include "smat.hpp"

namespace cqmkit {

namespace {

std::string bits_of(std::size_t value, std::size_t n_bits) {
  std::string s(n_bits, '0');
  for (std::size_t i = 0; i < n_bits; ++i)
    if (value & (std::size_t{1} << (n_bits - 1 - i))) s[i] = '1';
  return s;
}

std::size_t bits_value(const std::string& s) {
  std::size_t v = 0;
  for (char c : s) v = v * 2 + (c == '1');
  return v;
}

Scalar order_scalar(const Theory* t, long long n) {
  Scalar acc = Scalar::zero(t);
  for (long long i = 0; i < n; ++i) acc += Scalar::one(t);
  return acc;
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
      raise(ErrorCode::NotApplicable, "weights of this theory are not samplable");
  }
}

}  // namespace

HidingFunction make_hiding_function(const FinAbGroup& G, const Subgroup& H) {
  if (H.parent() != G) raise(ErrorCode::InvalidSubgroup, "subgroup has a different parent group");
  const long long n = G.order();
  std::size_t n_bits = 1;
  while ((1ll << n_bits) < n) ++n_bits;

  // coset rank by least representative index, which is ascending-index first sight
  std::vector<long long> rep(static_cast<std::size_t>(n), -1);
  std::vector<long long> rank(static_cast<std::size_t>(n), -1);
  long long next = 0;
  for (long long g = 0; g < n; ++g) {
    GroupElement ge = GroupElement::from_index(G, g);
    long long least = g;
    for (const GroupElement& h : H.elements()) least = std::min(least, (ge + h).index());
    rep[static_cast<std::size_t>(g)] = least;
    if (least == g) rank[static_cast<std::size_t>(g)] = next++;
  }

  HidingFunction out{G, H, n_bits, {}, {}};
  out.labels.resize(static_cast<std::size_t>(next));
  for (long long g = 0; g < n; ++g)
    if (rank[static_cast<std::size_t>(g)] >= 0)
      out.labels[static_cast<std::size_t>(rank[static_cast<std::size_t>(g)])] =
          bits_of(static_cast<std::size_t>(rank[static_cast<std::size_t>(g)]), n_bits);
  for (long long g = 0; g < n; ++g)
    out.f.push_back(out.labels[static_cast<std::size_t>(
        rank[static_cast<std::size_t>(rep[static_cast<std::size_t>(g)])])]);
  return out;
}

Mat build_oracle(const HidingFunction& f, const Theory* t) {
  const std::size_t n = static_cast<std::size_t>(f.G.order());
  const std::size_t tgt = std::size_t{1} << f.n_bits;
  if (n * tgt > 1024) raise(ErrorCode::TooLarge, "joint oracle dimension above 1024");

  FrobeniusData xg = group_structure(t, f.G);  // realizability gates
  std::vector<long long> orders(f.n_bits, 2);
  FrobeniusData xt = group_structure(t, FinAbGroup(orders));

  SMat U(t, n * tgt, n * tgt);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t fg = bits_value(f.f[g]);
    for (std::size_t b = 0; b < tgt; ++b)
      U.row[g * tgt + (fg ^ b)].emplace(g * tgt + b, Scalar::one(t));
  }

  SMat id = SMat::eye(t, n * tgt);
  if (sresidual(smul(sdagger(U), U), id) > tolerance() ||
      sresidual(smul(U, sdagger(U)), id) > tolerance())
    raise(ErrorCode::PreconditionFailed, "oracle is not unitary");

  // copy the group register, push one copy through f, XOR it into the target
  SMat fhat(t, tgt, n);
  for (std::size_t g = 0; g < n; ++g) fhat.row[bits_value(f.f[g])].emplace(g, Scalar::one(t));
  SMat copy = SMat::from(classical_structure(t, n).comult);
  SMat xorm = SMat::from(xt.mult);
  SMat idg = SMat::eye(t, n), idt = SMat::eye(t, tgt);
  SMat dec = smul(stensor(idg, xorm),
                  smul(stensor(stensor(idg, fhat), idt), stensor(copy, idt)));
  if (sresidual(dec, U) > tolerance())
    raise(ErrorCode::PreconditionFailed, "oracle differs from its Frobenius decomposition");
  return U.dense();
}

namespace {

// verified character states, shared across repeated runs on the same group
const std::vector<Mat>& cached_characters(const Theory* t, const FinAbGroup& G) {
  static std::mutex mu;
  static std::map<std::pair<const Theory*, std::vector<long long>>, std::vector<Mat>> cache;
  std::pair<const Theory*, std::vector<long long>> key{t, G.orders()};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(std::move(key), classical_states_of_group_structure(coherent_group(t, G)))
             .first;
  return it->second;
}

}  // namespace

std::vector<HspOutcome> run_subroutine(const HidingFunction& f, const Theory* t) {
  const FinAbGroup& G = f.G;
  const std::size_t n = static_cast<std::size_t>(G.order());
  const std::size_t tgt = std::size_t{1} << f.n_bits;

  if (!is_invertible(order_scalar(t, static_cast<long long>(tgt))))
    raise(ErrorCode::NotRealizable, "group order is not invertible in the theory");
  const std::vector<Mat>& chars = cached_characters(t, G);

  // U_f (sum_g |g>|0>) has the single unit entry |g>|f(g)> per group element,
  // so each amplitude <chi_k, b| psi sums involve(chi_k[g]) over the f-fiber
  std::vector<std::size_t> value(n);
  for (std::size_t g = 0; g < n; ++g) value[g] = bits_value(f.f[g]);

  Scalar invN = invert(order_scalar(t, G.order()));
  std::vector<Scalar> amp(tgt * n, Scalar::zero(t));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t g = 0; g < n; ++g) amp[value[g] * n + k] += involve(chars[k].at(g, 0));

  std::vector<HspOutcome> out;
  Scalar total = Scalar::zero(t);
  for (std::size_t b = 0; b < tgt; ++b)
    for (long long k = 0; k < G.order(); ++k) {
      const Scalar& a = amp[b * n + static_cast<std::size_t>(k)];
      Scalar w = involve(a) * a * invN;
      total += w;
      out.push_back(HspOutcome{bits_of(b, f.n_bits), DualElement::from_index(G, k), w});
    }
  if (!is_invertible(total))
    raise(ErrorCode::PreconditionFailed, "total outcome weight is not invertible");
  Scalar scale = invert(total);
  for (HspOutcome& o : out) o.weight *= scale;
  return out;
}

Subgroup reconstruct_subgroup(const std::vector<DualElement>& samples, const FinAbGroup& G) {
  std::vector<GroupElement> kernel;
  for (long long g = 0; g < G.order(); ++g) {
    GroupElement ge = GroupElement::from_index(G, g);
    bool in_all = true;
    for (const DualElement& chi : samples)
      if (char_eval(chi, ge) != 0) {
        in_all = false;
        break;
      }
    if (in_all) kernel.push_back(ge);
  }
  return Subgroup::from_elements(G, std::move(kernel));
}

std::vector<DualElement> sample_characters(const std::vector<HspOutcome>& outcomes, std::size_t k,
                                           std::uint64_t seed) {
  std::vector<double> cumulative;
  double acc = 0;
  for (const HspOutcome& o : outcomes) {
    double p = weight_as_probability(o.weight);
    acc += std::max(p, 0.0);
    cumulative.push_back(acc);
  }
  if (acc <= 0) raise(ErrorCode::PreconditionFailed, "no positive weight to sample");

  Rng rng(seed);
  std::vector<DualElement> samples;
  for (std::size_t i = 0; i < k; ++i) {
    double u = rng.uniform() * acc;
    std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    if (idx >= outcomes.size()) idx = outcomes.size() - 1;
    samples.push_back(outcomes[idx].chi);
  }
  return samples;
}

double theorem_residual(const HidingFunction& f, const Theory* t,
                        const std::vector<HspOutcome>& outcomes) {
  Scalar h2 = order_scalar(t, f.H.order());
  h2 *= h2;
  Scalar invg = invert(order_scalar(t, f.G.order()));
  Scalar valid = h2 * invg * invg;

  double res = 0;
  for (const HspOutcome& o : outcomes) {
    bool in_image = std::find(f.labels.begin(), f.labels.end(), o.b) != f.labels.end();
    bool kills = true;
    for (const GroupElement& h : f.H.elements())
      if (char_eval(o.chi, h) != 0) {
        kills = false;
        break;
      }
    Scalar expect = (in_image && kills) ? valid : Scalar::zero(t);
    res = std::max(res, o.weight.distance(expect));
  }
  return res;
}

}  // namespace cqmkit
