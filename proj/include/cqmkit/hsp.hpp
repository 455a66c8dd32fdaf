#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cqmkit/abgroup.hpp"
#include "cqmkit/mat.hpp"

namespace cqmkit {

struct HidingFunction {
  FinAbGroup G;
  Subgroup H;
  std::size_t n_bits;              // ceil(log2 |G|), at least 1
  std::vector<std::string> labels; // coset rank (by least representative) -> bit string
  std::vector<std::string> f;      // element index -> bit string, f = labels of the coset
};

struct HspOutcome {
  std::string b;
  DualElement chi;
  Scalar weight;
};

HidingFunction make_hiding_function(const FinAbGroup& G, const Subgroup& H);

// the permutation |g>|t> -> |g>|f(g) xor t>, verified unitary and equal to the
// copy-then-XOR decomposition; joint dimension capped at 1024
Mat build_oracle(const HidingFunction& f, const Theory* t);

// exact joint outcome distribution of the subroutine by state-vector evolution:
// uniform superposition, oracle, character measurement on the group register
// and point measurement on the target register
std::vector<HspOutcome> run_subroutine(const HidingFunction& f, const Theory* t);

// intersection of character kernels
Subgroup reconstruct_subgroup(const std::vector<DualElement>& samples, const FinAbGroup& G);

// seeded sampling of the chi marginal; needs real-valued weights
std::vector<DualElement> sample_characters(const std::vector<HspOutcome>& outcomes, std::size_t k,
                                           std::uint64_t seed);

// largest distance between a simulated weight and |H|^2/|G|^2 [b in im s][chi kills H]
double theorem_residual(const HidingFunction& f, const Theory* t,
                        const std::vector<HspOutcome>& outcomes);

}  // namespace cqmkit
