#include "cqmkit/frobenius.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <utility>

#include "cqmkit/error.hpp"
#include "smat.hpp"

namespace cqmkit {

namespace {

SMat swap_factors(const Theory* t, std::size_t d) {
  return sperm(t, d * d, [d](std::size_t c) { return (c % d) * d + c / d; });
}

LawCheck law(const std::string& name, double residual) {
  return LawCheck{name, residual <= tolerance(), residual};
}

Scalar pow_scalar(const Scalar& base, long long e) {
  Scalar acc = Scalar::one(base.theory());
  for (long long i = 0; i < e; ++i) acc *= base;
  return acc;
}

Scalar order_scalar(const Theory* t, long long n) {
  Scalar acc = Scalar::zero(t);
  for (long long i = 0; i < n; ++i) acc += Scalar::one(t);
  return acc;
}

struct Structures {
  SMat mz, uz, dz, ez;  // point
  SMat mx, ux, dx, ex;  // group
  std::size_t d;
};

Structures split(const CoherentGroupData& cg) {
  return Structures{SMat::from(cg.point.mult),  SMat::from(cg.point.unit),
                    SMat::from(cg.point.comult), SMat::from(cg.point.counit),
                    SMat::from(cg.group.mult),  SMat::from(cg.group.unit),
                    SMat::from(cg.group.comult), SMat::from(cg.group.counit),
                    cg.point.dim};
}

SMat antipode_sparse(const CoherentGroupData& cg) {
  Structures s = split(cg);
  const Theory* t = cg.point.mult.theory();
  SMat id = SMat::eye(t, s.d);
  SMat cup_x = smul(s.dx, s.ux);  // d^2 x 1
  SMat cap_z = smul(s.ez, s.mz);  // 1 x d^2
  return smul(stensor(cap_z, id), stensor(id, cup_x));
}

double hopf_residual(const CoherentGroupData& cg, const SMat& s_map) {
  Structures s = split(cg);
  const Theory* t = cg.point.mult.theory();
  SMat id = SMat::eye(t, s.d);
  SMat rhs = smul(s.ux, s.ez);
  double r1 = sresidual(smul(s.mx, smul(stensor(s_map, id), s.dz)), rhs);
  double r2 = sresidual(smul(s.mx, smul(stensor(id, s_map), s.dz)), rhs);
  return std::max(r1, r2);
}

std::vector<Scalar> factor_phases(const Theory* t, const FinAbGroup& G) {
  std::vector<Scalar> zetas;
  for (long long n : G.orders()) {
    auto z = phase_of_order(t, n);
    if (!z) raise(ErrorCode::NotEnoughPhases, "theory has no phase of order " + std::to_string(n));
    zetas.push_back(*z);
  }
  return zetas;
}

Scalar character_amplitude(const Theory* t, const std::vector<Scalar>& zetas, const FinAbGroup& G,
                           const std::vector<long long>& k, const std::vector<long long>& g) {
  Scalar amp = Scalar::one(t);
  for (std::size_t d = 0; d < zetas.size(); ++d)
    amp *= pow_scalar(zetas[d], (k[d] * g[d]) % G.orders()[d]);
  return amp;
}

}  // namespace

bool LawReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.pass; });
}

const LawCheck* LawReport::find(const std::string& name) const {
  for (const LawCheck& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

FrobeniusData classical_structure(const Theory* t, std::size_t d) {
  if (d < 1) raise(ErrorCode::Usage, "dimension must be positive");
  Mat mult(t, d, d * d);
  Mat unit(t, d, 1);
  for (std::size_t x = 0; x < d; ++x) {
    mult.set(x, x * d + x, Scalar::one(t));
    unit.set(x, 0, Scalar::one(t));
  }
  return FrobeniusData{d, mult, unit, dagger(mult), dagger(unit), Scalar::one(t)};
}

FrobeniusData group_structure(const Theory* t, const FinAbGroup& G) {
  Scalar N = order_scalar(t, G.order());
  if (!is_invertible(N))
    raise(ErrorCode::NotRealizable, "group order is not invertible in the theory");
  const std::size_t d = static_cast<std::size_t>(G.order());
  Mat mult(t, d, d * d);
  for (std::size_t g = 0; g < d; ++g)
    for (std::size_t h = 0; h < d; ++h) {
      long long sum = (GroupElement::from_index(G, static_cast<long long>(g)) +
                       GroupElement::from_index(G, static_cast<long long>(h)))
                          .index();
      mult.set(static_cast<std::size_t>(sum), g * d + h, Scalar::one(t));
    }
  Mat unit = Mat::basis_column(t, d, 0);
  return FrobeniusData{d, mult, unit, dagger(mult), dagger(unit), N};
}

// memoized: the pair is a pure function of the interned theory and the orders,
// and rebuilding the d x d^2 structure maps dominates repeated callers
CoherentGroupData coherent_group(const Theory* t, const FinAbGroup& G) {
  static std::mutex mu;
  static std::map<std::pair<const Theory*, std::vector<long long>>, CoherentGroupData> cache;
  std::pair<const Theory*, std::vector<long long>> key{t, G.orders()};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  CoherentGroupData built{classical_structure(t, static_cast<std::size_t>(G.order())),
                          group_structure(t, G), G};
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::move(key), std::move(built)).first->second;
}

LawReport verify_laws(const FrobeniusData& F) {
  const Theory* t = F.mult.theory();
  const std::size_t d = F.dim;
  SMat m = SMat::from(F.mult), u = SMat::from(F.unit);
  SMat D = SMat::from(F.comult), e = SMat::from(F.counit);
  SMat id = SMat::eye(t, d);
  SMat sw = swap_factors(t, d);

  LawReport rep;
  rep.normalization = F.normalization;
  rep.checks.push_back(
      law("associativity", sresidual(smul(m, stensor(m, id)), smul(m, stensor(id, m)))));
  rep.checks.push_back(law("unit", std::max(sresidual(smul(m, stensor(u, id)), id),
                                            sresidual(smul(m, stensor(id, u)), id))));
  rep.checks.push_back(
      law("coassociativity", sresidual(smul(stensor(D, id), D), smul(stensor(id, D), D))));
  rep.checks.push_back(law("counit", std::max(sresidual(smul(stensor(e, id), D), id),
                                              sresidual(smul(stensor(id, e), D), id))));
  SMat center = smul(D, m);
  rep.checks.push_back(
      law("frobenius", std::max(sresidual(smul(stensor(id, m), stensor(D, id)), center),
                                sresidual(smul(stensor(m, id), stensor(id, D)), center))));
  rep.checks.push_back(law("quasi_special", sresidual(smul(m, D), id.scaled(F.normalization))));
  rep.checks.push_back(law("commutative", sresidual(smul(m, sw), m)));
  SMat cap = smul(e, m);
  rep.checks.push_back(law("symmetric", sresidual(smul(cap, sw), cap)));
  return rep;
}

Mat antipode(const CoherentGroupData& cg) { return antipode_sparse(cg).dense(); }

bool verify_hopf(const CoherentGroupData& cg) {
  SMat s = antipode_sparse(cg);
  return hopf_residual(cg, s) <= tolerance() && sresidual(s, sdagger(s)) <= tolerance();
}

LawReport verify_strong_complementarity(const CoherentGroupData& cg) {
  Structures s = split(cg);
  const Theory* t = cg.point.mult.theory();
  const std::size_t d = s.d;
  SMat id = SMat::eye(t, d);
  // id (x) swap (x) id on four factors
  SMat mid = sperm(t, d * d * d * d, [d](std::size_t c) {
    std::size_t a = c / (d * d * d), b = (c / (d * d)) % d, e2 = (c / d) % d, f = c % d;
    return ((a * d + e2) * d + b) * d + f;
  });

  LawReport rep;
  rep.normalization = cg.group.normalization;
  rep.checks.push_back(
      law("bialgebra", sresidual(smul(s.dz, s.mx),
                                 smul(smul(stensor(s.mx, s.mx), mid), stensor(s.dz, s.dz)))));
  rep.checks.push_back(law("group_unit_copied", sresidual(smul(s.dz, s.ux), stensor(s.ux, s.ux))));
  rep.checks.push_back(
      law("point_counit_multiplicative", sresidual(smul(s.ez, s.mx), stensor(s.ez, s.ez))));
  rep.checks.push_back(law("point_unit_cocopied", sresidual(smul(s.dx, s.uz), stensor(s.uz, s.uz))));
  rep.checks.push_back(
      law("group_counit_comultiplicative", sresidual(smul(s.ex, s.mz), stensor(s.ex, s.ex))));
  SMat one(t, 1, 1);
  one.row[0].emplace(0, Scalar::one(t));
  rep.checks.push_back(law("unit_counit_scalar", sresidual(smul(s.ez, s.ux), one)));
  SMat anti = antipode_sparse(cg);
  rep.checks.push_back(law("hopf", hopf_residual(cg, anti)));
  rep.checks.push_back(law("antipode_self_adjoint", sresidual(anti, sdagger(anti))));
  return rep;
}

std::vector<Mat> classical_states_of_group_structure(const CoherentGroupData& cg) {
  const Theory* t = cg.point.mult.theory();
  const FinAbGroup& G = cg.underlying;
  const std::size_t d = cg.point.dim;
  std::vector<Scalar> zetas = factor_phases(t, G);

  std::vector<Mat> states;
  for (long long k = 0; k < G.order(); ++k) {
    std::vector<long long> kc = G.coords_of(k);
    Mat chi(t, d, 1);
    for (long long g = 0; g < G.order(); ++g)
      chi.set(static_cast<std::size_t>(g), 0, character_amplitude(t, zetas, G, kc, G.coords_of(g)));
    states.push_back(chi);
  }

  Mat anti = antipode(cg);
  Scalar N = cg.group.normalization;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Mat& chi = states[k];
    Mat copied = cg.group.comult * chi;
    if (copied != tensor(chi, chi))
      raise(ErrorCode::PreconditionFailed, "character state not copied by the group structure");
    if ((cg.group.counit * chi).at(0, 0) != Scalar::one(t))
      raise(ErrorCode::PreconditionFailed, "character state not deleted by the group counit");
    if (conj_entries(chi) != anti * chi)
      raise(ErrorCode::PreconditionFailed, "character conjugate is not its antipode image");
    for (std::size_t j = 0; j < states.size(); ++j) {
      Scalar dot = (dagger(states[j]) * chi).at(0, 0);
      if (!dot.equals(j == k ? N : Scalar::zero(t), tolerance()))
        raise(ErrorCode::PreconditionFailed, "character states not orthogonal with norm |K|");
    }
  }
  return states;
}

Mat phase_gate(const PhaseState& p) {
  if (p.amplitudes.size() != p.dim || p.dim == 0)
    raise(ErrorCode::Usage, "phase state needs one amplitude per dimension");
  const Theory* t = p.amplitudes[0].theory();
  if (!p.amplitudes[0].equals(Scalar::one(t), tolerance()))
    raise(ErrorCode::NotAPhase, "leading amplitude must be 1");
  Mat gate(t, p.dim, p.dim);
  for (std::size_t i = 0; i < p.dim; ++i) {
    const Scalar& a = p.amplitudes[i];
    if (!born_norm(a).equals(Scalar::one(t), tolerance()))
      raise(ErrorCode::NotAPhase, "amplitude is not unit norm");
    gate.set(i, i, a);
  }
  return gate;
}

Mat ghz_with_phases(const CoherentGroupData& cg, std::size_t N,
                    const std::vector<PhaseState>& phases) {
  if (N < 1) raise(ErrorCode::Usage, "need at least one party");
  if (phases.size() != N) raise(ErrorCode::Usage, "need one phase state per party");
  const Theory* t = cg.point.mult.theory();
  const std::size_t d = cg.point.dim;
  double flat = 1;
  for (std::size_t i = 0; i < N; ++i) flat *= static_cast<double>(d);
  if (flat > (1 << 20)) raise(ErrorCode::TooLarge, "joint dimension above 2^20");
  const std::size_t total = static_cast<std::size_t>(flat);

  std::vector<Mat> gates;
  for (const PhaseState& p : phases) {
    if (p.dim != d) raise(ErrorCode::Usage, "phase state dimension differs from the group");
    gates.push_back(phase_gate(p));
  }

  // comult^(N-1) of the pointwise product of the phases
  Mat out(t, total, 1);
  for (std::size_t g = 0; g < d; ++g) {
    Scalar amp = Scalar::one(t);
    for (const Mat& gate : gates) amp *= gate.at(g, g);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < N; ++i) idx = idx * d + g;
    out.set(idx, 0, amp);
  }

  // cross-check: apply the gates to the plain GHZ state one axis at a time
  std::vector<Scalar> check(total, Scalar::zero(t));
  for (std::size_t g = 0; g < d; ++g) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < N; ++i) idx = idx * d + g;
    check[idx] = Scalar::one(t);
  }
  std::size_t stride = total;
  for (std::size_t party = 0; party < N; ++party) {
    stride /= d;
    for (std::size_t j = 0; j < total; ++j) {
      std::size_t digit = (j / stride) % d;
      check[j] *= gates[party].at(digit, digit);
    }
  }
  for (std::size_t j = 0; j < total; ++j)
    if (!out.at(j, 0).equals(check[j], tolerance()))
      raise(ErrorCode::PreconditionFailed, "phased state differs from gate application");
  return out;
}

bool verify_weyl_ccr(const CoherentGroupData& cg) {
  const Theory* t = cg.point.mult.theory();
  const FinAbGroup& G = cg.underlying;
  const std::size_t d = cg.point.dim;
  std::vector<Mat> chars = classical_states_of_group_structure(cg);

  for (long long gi = 0; gi < G.order(); ++gi) {
    Mat U(t, d, d);
    GroupElement g = GroupElement::from_index(G, gi);
    for (long long x = 0; x < G.order(); ++x)
      U.set(static_cast<std::size_t>((GroupElement::from_index(G, x) + g).index()),
            static_cast<std::size_t>(x), Scalar::one(t));
    for (long long k = 0; k < G.order(); ++k) {
      Mat V(t, d, d);
      for (std::size_t x = 0; x < d; ++x) V.set(x, x, chars[static_cast<std::size_t>(k)].at(x, 0));
      Scalar chi_g = chars[static_cast<std::size_t>(k)].at(static_cast<std::size_t>(gi), 0);
      if (V * U != (U * V).scaled(chi_g)) return false;
    }
  }
  return true;
}

bool verify_weak_uncertainty(const CoherentGroupData& cg) {
  const Theory* t = cg.point.mult.theory();
  const std::size_t d = cg.point.dim;
  std::vector<Mat> chars = classical_states_of_group_structure(cg);
  Scalar N = cg.group.normalization;

  std::vector<Mat> points;
  std::vector<Scalar> ones, norms;
  for (std::size_t x = 0; x < d; ++x) {
    points.push_back(Mat::basis_column(t, d, x));
    ones.push_back(Scalar::one(t));
    norms.push_back(N);
  }

  for (const Mat& chi : chars) {
    Distribution dist = born_distribution(chi, points, ones);
    for (std::size_t x = 1; x < d; ++x)
      if (dist.weights.at(static_cast<long long>(x)) != dist.weights.at(0)) return false;
  }
  for (const Mat& pt : points) {
    Distribution dist = born_distribution(pt, chars, norms);
    for (std::size_t x = 1; x < d; ++x)
      if (dist.weights.at(static_cast<long long>(x)) != dist.weights.at(0)) return false;
  }
  return true;
}

}  // namespace cqmkit
