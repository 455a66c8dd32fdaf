#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cqmkit/abgroup.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/mat.hpp"

namespace cqmkit {

// Discrete periodic dynamics over the complex theory: U_t := U1^t is a
// unitary representation of Z_T once U1^T = id (within 1e-8).
struct PeriodicRep {
  std::size_t T = 0;
  std::size_t dim = 0;
  Mat U1;
};

// Time-dependent dynamics: gates[t] evolves step t, and the full cycle
// composes to the identity.
struct CyclicCircuit {
  std::size_t T = 0;
  std::size_t dim = 0;
  std::vector<Mat> gates;
};

// P_k = (1/T) sum_t conj(chi_k(t)) U1^t, indexed by the energy level k.
// The family is re-verified: idempotent, self-adjoint, mutually orthogonal,
// summing to the identity. NotPeriodic when U1^T strays from id.
std::vector<Mat> ergodic_projectors(const PeriodicRep& rep);

// U1 = sum_k chi_k(1) P_k from a complete orthogonal family of projectors;
// IncompleteFamily when the input fails the family axioms.
PeriodicRep stone_reconstruct(const std::vector<Mat>& projectors);

// Iterated product gates[t+dt-1] ... gates[t] (indices mod T), dt in [0, 2T].
Mat partial_product(const CyclicCircuit& circ, std::size_t t, std::size_t dt);

// One-step propagator W1 (|psi> (x) |t>) = gates[t]|psi> (x) |t+1> on the
// composite space of dimension dim*T, composite index s*T + t. The iterated
// products are verified to concatenate, to be trivial at dt = 0, and to be
// unitary; W1 itself generates a Z_T representation. NotCyclic when the full
// cycle is not the identity.
Mat feynman_propagator(const CyclicCircuit& circ);

// sum_t psi_t (x) |t> with psi_{t+1} = gates[t] psi_t.
Mat history_states(const CyclicCircuit& circ, const Mat& psi0);
// true iff W1 fixes the state, the defining property of history states
bool verify_feynman(const CyclicCircuit& circ, const Mat& state);

// A representation whose energy support H is a subgroup of the dual and whose
// nonzero projectors are rank one carries its own clock: T' = |H|, the
// quotient t -> t mod T', and a coherent group on the representation space
// whose time basis diagonalises the dynamics into the regular shift.
struct InternalClock {
  std::size_t T_prime = 0;
  std::vector<std::size_t> quotient;  // Z_T -> Z_T', t mod T'
  Mat time_basis;                     // unitary, columns are the time states
  CoherentGroupData data;             // verified strongly complementary
};

// Absent when the support is not a subgroup; DegenerateSpectrum when some
// energy level has rank two or more.
std::optional<InternalClock> internal_clock(const PeriodicRep& rep);

// Projection of a second system beta onto the energy levels compatible with
// alpha's internal clock, shifted by the total energy chi_tot. V1 is one
// internal-clock step on range(P); all representation identities are checked
// conjugated by P.
struct EmergentClock {
  Mat projector;
  std::size_t T_prime = 0;
  Mat V1;
};

EmergentClock emergent_clock(const PeriodicRep& alpha, const PeriodicRep& beta,
                             const DualElement& chi_tot);

}  // namespace cqmkit
