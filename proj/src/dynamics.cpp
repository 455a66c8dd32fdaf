#include "cqmkit/dynamics.hpp"

#include <cmath>
#include <string>

#include "cqmkit/error.hpp"

namespace cqmkit {

namespace {

constexpr double kPeriodTol = 1e-8;  // input rejection; law residuals use tolerance()
const double kTau = 8 * std::atan(1.0);

const Theory* ctheory() { return Theory::complex_theory(); }

Scalar root_of_unity(long long num, std::size_t den) {
  double a = kTau * static_cast<double>(num) / static_cast<double>(den);
  return Scalar::complex(std::cos(a), std::sin(a));
}

void check_unitary(const Mat& u, const char* what) {
  Mat id = Mat::identity(u.theory(), u.rows());
  if (!(dagger(u) * u).equals(id, kPeriodTol) || !(u * dagger(u)).equals(id, kPeriodTol))
    raise(ErrorCode::PreconditionFailed, std::string(what) + " is not unitary");
}

std::vector<Mat> rep_powers(const PeriodicRep& rep) {
  if (rep.T == 0 || rep.dim == 0) raise(ErrorCode::Usage, "representation must have positive T and dim");
  if (rep.U1.theory() != ctheory()) raise(ErrorCode::Usage, "dynamics runs over the complex theory");
  if (rep.U1.rows() != rep.dim || rep.U1.cols() != rep.dim)
    raise(ErrorCode::Usage, "U1 shape does not match dim");
  check_unitary(rep.U1, "U1");
  std::vector<Mat> u{Mat::identity(ctheory(), rep.dim)};
  for (std::size_t t = 1; t < rep.T; ++t) u.push_back(rep.U1 * u.back());
  if (!(rep.U1 * u.back()).equals(u[0], kPeriodTol))
    raise(ErrorCode::NotPeriodic, "U1^T is not the identity");
  return u;
}

void check_projector_family(const std::vector<Mat>& p, const char* bad_code_msg, ErrorCode code) {
  std::size_t d = p[0].rows();
  Mat sum(ctheory(), d, d);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].rows() != d || p[k].cols() != d || p[k].theory() != ctheory())
      raise(code, bad_code_msg);
    if (!(p[k] * p[k]).equals(p[k], tolerance()) || !dagger(p[k]).equals(p[k], tolerance()))
      raise(code, bad_code_msg);
    for (std::size_t j = 0; j < k; ++j)
      if ((p[j] * p[k]).max_distance(Mat(ctheory(), d, d)) > tolerance()) raise(code, bad_code_msg);
    sum = sum + p[k];
  }
  if (!sum.equals(Mat::identity(ctheory(), d), tolerance())) raise(code, bad_code_msg);
}

double column_norm(const Mat& m, std::size_t c) {
  double acc = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto z = m.at(r, c).as_complex();
    acc += z.real() * z.real() + z.imag() * z.imag();
  }
  return std::sqrt(acc);
}

void validate_circuit(const CyclicCircuit& circ) {
  if (circ.T == 0 || circ.dim == 0) raise(ErrorCode::Usage, "circuit must have positive T and dim");
  if (circ.gates.size() != circ.T) raise(ErrorCode::Usage, "circuit needs one gate per time step");
  for (const Mat& g : circ.gates) {
    if (g.theory() != ctheory() || g.rows() != circ.dim || g.cols() != circ.dim)
      raise(ErrorCode::Usage, "gate shape does not match dim");
    check_unitary(g, "circuit gate");
  }
  Mat cycle = Mat::identity(ctheory(), circ.dim);
  for (std::size_t t = 0; t < circ.T; ++t) cycle = circ.gates[t] * cycle;
  if (!cycle.equals(Mat::identity(ctheory(), circ.dim), kPeriodTol))
    raise(ErrorCode::NotCyclic, "the gates do not compose to the identity over one period");
}

}  // namespace

std::vector<Mat> ergodic_projectors(const PeriodicRep& rep) {
  std::vector<Mat> u = rep_powers(rep);
  Scalar inv_t = Scalar::complex(1.0 / static_cast<double>(rep.T), 0);
  std::vector<Mat> projs;
  for (std::size_t k = 0; k < rep.T; ++k) {
    Mat acc(ctheory(), rep.dim, rep.dim);
    for (std::size_t t = 0; t < rep.T; ++t)
      acc = acc + u[t].scaled(root_of_unity(-static_cast<long long>(k * t), rep.T));
    projs.push_back(acc.scaled(inv_t));
  }
  check_projector_family(projs, "ergodic averages fail the projector-family laws",
                         ErrorCode::PreconditionFailed);
  return projs;
}

PeriodicRep stone_reconstruct(const std::vector<Mat>& projectors) {
  if (projectors.empty()) raise(ErrorCode::Usage, "empty projector family");
  check_projector_family(projectors, "not a complete orthogonal projector family",
                         ErrorCode::IncompleteFamily);
  std::size_t T = projectors.size();
  std::size_t dim = projectors[0].rows();
  Mat u1(ctheory(), dim, dim);
  for (std::size_t k = 0; k < T; ++k)
    u1 = u1 + projectors[k].scaled(root_of_unity(static_cast<long long>(k), T));
  return PeriodicRep{T, dim, u1};
}

Mat partial_product(const CyclicCircuit& circ, std::size_t t, std::size_t dt) {
  if (circ.T == 0 || circ.gates.size() != circ.T) raise(ErrorCode::Usage, "circuit needs one gate per time step");
  if (dt > 2 * circ.T) raise(ErrorCode::Usage, "dt out of range");
  Mat f = Mat::identity(ctheory(), circ.dim);
  for (std::size_t j = 0; j < dt; ++j) f = circ.gates[(t + j) % circ.T] * f;
  return f;
}

Mat feynman_propagator(const CyclicCircuit& circ) {
  validate_circuit(circ);
  std::size_t T = circ.T, d = circ.dim, n = d * T;

  std::vector<std::vector<Mat>> f(T, std::vector<Mat>());
  for (std::size_t t = 0; t < T; ++t) {
    f[t].push_back(Mat::identity(ctheory(), d));
    for (std::size_t dt = 1; dt <= 2 * T; ++dt)
      f[t].push_back(circ.gates[(t + dt - 1) % T] * f[t].back());
  }
  Mat id = Mat::identity(ctheory(), d);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t dt = 0; dt < T; ++dt) {
      if (!(dagger(f[t][dt]) * f[t][dt]).equals(id, tolerance()))
        raise(ErrorCode::PreconditionFailed, "iterated product is not unitary");
      for (std::size_t dt2 = 0; dt2 < T; ++dt2)
        if (!(f[(t + dt) % T][dt2] * f[t][dt]).equals(f[t][dt + dt2], tolerance()))
          raise(ErrorCode::PreconditionFailed, "iterated products fail to concatenate");
    }
  }

  Mat w1(ctheory(), n, n);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t s2 = 0; s2 < d; ++s2)
      for (std::size_t s = 0; s < d; ++s)
        w1.set(s2 * T + (t + 1) % T, s * T + t, circ.gates[t].at(s2, s));

  Mat wpow = Mat::identity(ctheory(), n);
  for (std::size_t t = 0; t < T; ++t) wpow = w1 * wpow;
  if (!wpow.equals(Mat::identity(ctheory(), n), tolerance()))
    raise(ErrorCode::PreconditionFailed, "propagator is not T-periodic");
  check_unitary(w1, "propagator");
  return w1;
}

Mat history_states(const CyclicCircuit& circ, const Mat& psi0) {
  validate_circuit(circ);
  if (psi0.theory() != ctheory() || psi0.rows() != circ.dim || psi0.cols() != 1)
    raise(ErrorCode::Usage, "psi0 must be a dim x 1 complex column");
  Mat state(ctheory(), circ.dim * circ.T, 1);
  Mat psi = psi0;
  for (std::size_t t = 0; t < circ.T; ++t) {
    for (std::size_t s = 0; s < circ.dim; ++s) state.set(s * circ.T + t, 0, psi.at(s, 0));
    psi = circ.gates[t] * psi;
  }
  return state;
}

bool verify_feynman(const CyclicCircuit& circ, const Mat& state) {
  Mat w1 = feynman_propagator(circ);
  if (state.rows() != w1.rows() || state.cols() != 1)
    raise(ErrorCode::Usage, "state must live on the composite space");
  return (w1 * state).max_distance(state) <= tolerance();
}

std::optional<InternalClock> internal_clock(const PeriodicRep& rep) {
  std::vector<Mat> projs = ergodic_projectors(rep);
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < rep.T; ++k) {
    double tr = 0;
    for (std::size_t i = 0; i < rep.dim; ++i) tr += projs[k].at(i, i).as_complex().real();
    long long rank = std::llround(tr);
    if (rank >= 2)
      raise(ErrorCode::DegenerateSpectrum, "energy level " + std::to_string(k) + " has rank " +
                                               std::to_string(rank));
    if (rank == 1) support.push_back(k);
  }
  for (std::size_t a : support)
    for (std::size_t b : support) {
      std::size_t c = (a + b) % rep.T;
      bool found = false;
      for (std::size_t s : support) found = found || s == c;
      if (!found) return std::nullopt;  // support is not a subgroup of the dual
    }

  std::size_t h = support.size();
  for (std::size_t kappa = 0; kappa < h; ++kappa)
    if (support[kappa] != kappa * (rep.T / h))
      raise(ErrorCode::PreconditionFailed, "subgroup support is not the expected cyclic one");

  // unit eigenvectors from the rank-one projectors
  std::vector<Mat> eig;
  for (std::size_t kappa = 0; kappa < h; ++kappa) {
    const Mat& p = projs[support[kappa]];
    std::size_t best = 0;
    for (std::size_t c = 1; c < rep.dim; ++c)
      if (column_norm(p, c) > column_norm(p, best)) best = c;
    double nrm = column_norm(p, best);
    if (nrm <= tolerance()) raise(ErrorCode::PreconditionFailed, "rank-one projector has no column");
    Mat u(ctheory(), rep.dim, 1);
    for (std::size_t r = 0; r < rep.dim; ++r)
      u.set(r, 0, p.at(r, best) * Scalar::complex(1.0 / nrm, 0));
    eig.push_back(u);
  }

  double inv_sqrt_h = 1.0 / std::sqrt(static_cast<double>(h));
  Mat basis(ctheory(), rep.dim, h);
  for (std::size_t tp = 0; tp < h; ++tp)
    for (std::size_t kappa = 0; kappa < h; ++kappa) {
      Scalar w = root_of_unity(static_cast<long long>(kappa * tp), h) *
                 Scalar::complex(inv_sqrt_h, 0);
      for (std::size_t r = 0; r < rep.dim; ++r)
        basis.set(r, tp, basis.at(r, tp) + eig[kappa].at(r, 0) * w);
    }
  check_unitary(basis, "internal time basis");

  // the dynamics must act as the regular shift on the time states
  Mat shift(ctheory(), h, h);
  for (std::size_t t = 0; t < h; ++t) shift.set((t + 1) % h, t, Scalar::one(ctheory()));
  if (!(rep.U1 * basis).equals(basis * shift, tolerance()))
    raise(ErrorCode::PreconditionFailed, "dynamics does not shift the internal time states");

  FinAbGroup zh = FinAbGroup::parse("Z" + std::to_string(h));
  CoherentGroupData cg = coherent_group(ctheory(), zh);
  Mat bdag = dagger(basis);
  auto transport = [&](const FrobeniusData& fd) {
    return FrobeniusData{fd.dim, basis * fd.mult * tensor(bdag, bdag), basis * fd.unit,
                         tensor(basis, basis) * fd.comult * bdag, fd.counit * bdag,
                         fd.normalization};
  };
  CoherentGroupData conjugated{transport(cg.point), transport(cg.group), zh};
  if (!verify_strong_complementarity(conjugated).all_pass())
    raise(ErrorCode::PreconditionFailed, "transported clock structure fails strong complementarity");

  std::vector<std::size_t> quotient;
  for (std::size_t t = 0; t < rep.T; ++t) quotient.push_back(t % h);
  return InternalClock{h, std::move(quotient), std::move(basis), std::move(conjugated)};
}

EmergentClock emergent_clock(const PeriodicRep& alpha, const PeriodicRep& beta,
                             const DualElement& chi_tot) {
  auto ic = internal_clock(alpha);
  if (!ic) raise(ErrorCode::PreconditionFailed, "alpha does not admit an internal clock");
  if (beta.T != alpha.T) raise(ErrorCode::Usage, "alpha and beta must share the external period");
  if (chi_tot.group().order() != static_cast<long long>(alpha.T))
    raise(ErrorCode::Usage, "total energy must be a character of Z_T");

  std::vector<Mat> q = ergodic_projectors(beta);
  std::size_t tp = ic->T_prime;
  std::size_t m = alpha.T / tp;
  std::size_t c = static_cast<std::size_t>(chi_tot.index());

  Mat p(ctheory(), beta.dim, beta.dim);
  Mat v1(ctheory(), beta.dim, beta.dim);
  for (std::size_t kappa = 0; kappa < tp; ++kappa) {
    const Mat& level = q[(m * kappa + c) % alpha.T];
    p = p + level;
    v1 = v1 + level.scaled(root_of_unity(static_cast<long long>(kappa), tp));
  }

  double tol = tolerance();
  if (!(p * p).equals(p, tol) || !dagger(p).equals(p, tol))
    raise(ErrorCode::PreconditionFailed, "compatible-level sum is not a projector");
  if (!(p * beta.U1).equals(beta.U1 * p, tol))
    raise(ErrorCode::PreconditionFailed, "projector does not commute with the dynamics");
  if (!(p * v1 * p).equals(v1, tol))
    raise(ErrorCode::PreconditionFailed, "internal step leaves the projected subspace");
  Mat vpow = p;
  for (std::size_t t = 0; t < tp; ++t) vpow = v1 * vpow;
  if (!vpow.equals(p, tol))
    raise(ErrorCode::PreconditionFailed, "internal step is not T'-periodic on the range");
  if (!(p * dagger(v1) * v1 * p).equals(p, tol))
    raise(ErrorCode::PreconditionFailed, "internal step is not unitary on the range");
  if (!(beta.U1 * p).equals(v1.scaled(root_of_unity(static_cast<long long>(c), alpha.T)), tol))
    raise(ErrorCode::PreconditionFailed,
          "projected dynamics is not the internal step up to the total-energy phase");

  return EmergentClock{std::move(p), tp, std::move(v1)};
}

}  // namespace cqmkit
