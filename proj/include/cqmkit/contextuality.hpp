#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cqmkit/abgroup.hpp"
#include "cqmkit/scalar.hpp"

namespace cqmkit {

// Measurement scenario: N parties, M_j measurement choices for party j, all
// outcomes valued in one shared finite abelian group. Contexts are joint
// choices, one per party, and together they must cover every (party, choice)
// pair.
struct Scenario {
  std::size_t parties = 0;
  std::vector<std::size_t> choices;
  FinAbGroup outcome_group;
  std::vector<std::vector<std::size_t>> contexts;
};

// Per-context outcome tables. Weights are kept as exact rationals; `exact`
// records whether they really are exact (decimal/rational input, analytic
// models) or dyadic casts of floating-point Born weights. Exact models are
// compared and solved exactly, inexact ones with float tolerances.
struct EmpiricalModel {
  Scenario scenario;
  std::vector<std::map<std::vector<long long>, Rat>> tables;
  bool exact = true;
};

// A value for every (party, choice) pair. The group is normally the outcome
// group; AvN searches over other modules produce assignments valued there.
struct GlobalAssignment {
  FinAbGroup group;
  std::vector<std::vector<long long>> value;  // [party][choice] -> element index

  std::vector<long long> restrict_to(const std::vector<std::size_t>& context) const;
};

using WeightedAssignments = std::vector<std::pair<GlobalAssignment, Rat>>;

void validate_model(const EmpiricalModel& em);  // Error Usage on structural problems
std::set<std::vector<long long>> support_of(const EmpiricalModel& em, std::size_t context);

// expands a (possibly signed) mixture back into per-context tables
std::vector<std::map<std::vector<long long>, Rat>> mixture_tables(const Scenario& sc,
                                                                  const WeightedAssignments& wa);

struct SignallingViolation {
  std::size_t context_a = 0, context_b = 0;
  std::vector<std::pair<std::size_t, std::size_t>> shared;  // common (party, choice) pairs
  std::vector<long long> outcome;                           // outcomes on those pairs
  Rat lhs, rhs;
};

struct NoSignallingReport {
  bool pass = false;
  std::vector<std::size_t> unnormalized;  // contexts whose table does not sum to 1
  std::vector<SignallingViolation> violations;
  double max_violation = 0;
};

NoSignallingReport check_no_signalling(const EmpiricalModel& em);

// LP feasibility over mixtures of support-consistent deterministic global
// assignments; a witness mixture reproduces every table, absent means
// probabilistically contextual. Error TooLarge above 10^6 assignments.
std::optional<WeightedAssignments> probabilistic_lhv(const EmpiricalModel& em);

struct StrongContextualityResult {
  bool strongly_contextual = false;
  std::optional<GlobalAssignment> section;  // consistent with every support when found
};

StrongContextualityResult strong_contextuality(const EmpiricalModel& em);

// Linear solve for a signed mixture over all deterministic global assignments.
// No-signalling models always have one; Error NoSolution flags signalling
// input, Error TooLarge above 10^6 assignments.
WeightedAssignments signed_global_section(const EmpiricalModel& em);

// One Z-linear equation over the outcomes of a single context:
// sum_j coeffs[j] * s(j, m_j) = rhs in the target module.
struct AvnEquation {
  std::size_t context = 0;
  std::vector<long long> coeffs;
  std::vector<long long> rhs;  // coords in the target module
};

struct AvnResult {
  bool avn = false;
  std::optional<GlobalAssignment> witness;
  std::vector<AvnEquation> equations;
};

// Searches for a global assignment (valued in `module`, default the outcome
// group) satisfying all equations; none means the model is AvN for this list.
// When the module is the outcome group, each equation is first verified to
// hold on the support of its context (Error InvalidTheory otherwise).
AvnResult avn_check(const EmpiricalModel& em, const std::vector<AvnEquation>& equations);
AvnResult avn_check(const EmpiricalModel& em, const std::vector<AvnEquation>& equations,
                    const FinAbGroup& module);

}  // namespace cqmkit
