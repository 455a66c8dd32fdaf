#pragma once

#include <optional>
#include <vector>

#include "cqmkit/abgroup.hpp"
#include "cqmkit/contextuality.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/scalar.hpp"

namespace cqmkit {

// An N-party argument over outcome group K built from a system of Z-module
// equations sum_r n_r^s y_r = a^s. Coefficients are occurrence counts: n_r^s
// parties measure variable r in the s-th variation contexts. beta holds one
// torus solution per variable, in theory-free rational coordinates; it is
// embedded into a concrete theory's phases only on demand.
struct MerminArgument {
  FinAbGroup K;
  EquationSystem system;        // S rows, M variables, counts >= 0
  std::size_t N = 0;
  std::vector<TorusPoint> beta;      // beta[r-1] for variable r; beta_0 = 0 implied
  std::vector<long long> zero_pad;   // n_0^s = N - sum_r n_r^s per equation
};

// Invariants: gcd(N, exponent(K)) = 1 and N >= sum_r n_r^s for every s
// (else BadN); the system must be solvable in the torus (else Unsolvable).
// With a theory given, every beta coordinate must embed as one of its phases
// (else NotRealizable). Omitting N picks the smallest admissible value.
MerminArgument build_argument(const FinAbGroup& K, const EquationSystem& system,
                              std::optional<std::size_t> N = std::nullopt,
                              const Theory* theory = nullptr);

// 1 + N*S joint choices, each of length N with entries in {0..M}: the
// all-zeros control first, then for each equation its block pattern
// (n_0^s zeros, n_1^s ones, ...) followed by its N-1 cyclic rotations.
std::vector<std::vector<std::size_t>> contexts(const MerminArgument& arg);

Scenario scenario_of(const MerminArgument& arg);

// Exact tables: uniform 1/|K|^(N-1) on {sum g = 0} for the control and on
// {sum g = a^s} for every variation context of equation s.
EmpiricalModel analytic_model(const MerminArgument& arg);

// State-vector simulation: GHZ_N with the per-party phase gates of each
// context, every party measured in the character basis. Weights are cast to
// rationals, so the theory's Born weights must be real-valued scalars.
EmpiricalModel quantum_model(const MerminArgument& arg, const Theory* t);

// One unit-norm phase per basis element, amplitudes[g] of order den(p[g]).
PhaseState embed_torus_phase(const Theory* t, const FinAbGroup& K, const TorusPoint& p);

struct ContextualityDecision {
  bool contextual = false;
  std::optional<std::vector<GroupElement>> solution;  // b_r when local
  std::optional<WeightedAssignments> lhv;             // reproduces analytic_model exactly
};

// Contextual iff the system has no solution in K. A solution (b_r) yields the
// local model: hidden variable uniform on {sum h = 0}, party j answers
// h_j + b_m at choice m (b_0 = 0).
ContextualityDecision decide_contextual(const MerminArgument& arg);

// Feeds the defining equations (sum of outcomes = a^s on every context) to
// avn_check; the model is all-vs-nothing exactly when the argument is
// contextual.
AvnResult avn_certificate(const MerminArgument& arg);

}  // namespace cqmkit
