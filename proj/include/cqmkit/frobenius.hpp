#pragma once

#include <string>
#include <vector>

#include "cqmkit/abgroup.hpp"
#include "cqmkit/mat.hpp"

namespace cqmkit {

struct FrobeniusData {
  std::size_t dim = 0;
  Mat mult;     // dim x dim^2
  Mat unit;     // dim x 1
  Mat comult;   // dim^2 x dim, dagger of mult
  Mat counit;   // 1 x dim, dagger of unit
  Scalar normalization;  // N in mult . comult = N id
};

struct CoherentGroupData {
  FrobeniusData point;  // copy/delete of the standard basis
  FrobeniusData group;  // linear extension of the group addition
  FinAbGroup underlying;
};

struct PhaseState {
  std::size_t dim = 0;
  std::vector<Scalar> amplitudes;  // amplitudes[0] = 1 convention, each unit norm
};

struct LawCheck {
  std::string name;
  bool pass = false;
  double residual = 0;  // max-entry distance of the failed identity
};

struct LawReport {
  std::vector<LawCheck> checks;
  Scalar normalization;
  bool all_pass() const;
  const LawCheck* find(const std::string& name) const;
};

FrobeniusData classical_structure(const Theory* t, std::size_t d);
// NotRealizable when |G| is not invertible in the theory
FrobeniusData group_structure(const Theory* t, const FinAbGroup& G);
CoherentGroupData coherent_group(const Theory* t, const FinAbGroup& G);

// associativity, unit, coassociativity, counit, frobenius, quasi_special,
// commutative, symmetric
LawReport verify_laws(const FrobeniusData& F);

Mat antipode(const CoherentGroupData& cg);
bool verify_hopf(const CoherentGroupData& cg);

// bialgebra, the four unit/counit interaction laws, the unit-counit scalar,
// plus Hopf and antipode self-adjointness
LawReport verify_strong_complementarity(const CoherentGroupData& cg);

// character states |chi_k> = sum_g chi_k(g) |g>, one per k in G, each verified
// classical for the group structure; NotEnoughPhases if some cyclic order has
// no phase in the theory
std::vector<Mat> classical_states_of_group_structure(const CoherentGroupData& cg);

Mat phase_gate(const PhaseState& p);  // diagonal of amplitudes; NotAPhase on bad input
// (comult_point)^(N-1) of the pointwise product of the phase states; verified
// equal to applying the N phase gates to the plain GHZ state
Mat ghz_with_phases(const CoherentGroupData& cg, std::size_t N,
                    const std::vector<PhaseState>& phases);

// translation unitaries U_g |x> = |x + g| against character diagonals V_chi
bool verify_weyl_ccr(const CoherentGroupData& cg);
// character states measure uniformly in the point basis and vice versa
bool verify_weak_uncertainty(const CoherentGroupData& cg);

}  // namespace cqmkit
