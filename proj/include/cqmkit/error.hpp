#pragma once

#include <stdexcept>
#include <string>

namespace cqmkit {

enum class ErrorCode {
  NotInvertible,
  InvalidSubgroup,
  NotRealizable,
  NotEnoughPhases,
  BadN,
  Unsolvable,
  PreconditionFailed,
  TooLarge,
  NotAPhase,
  IncompleteBasis,
  NonInvertibleNorm,
  DegenerateSpectrum,
  NotPeriodic,
  NotCyclic,
  IncompleteFamily,
  MissingContext,
  InvalidTheory,
  NotApplicable,
  NoSolution,
  Usage,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

// Global comparison tolerance for float-valued theories. Initialized from the
// CQMKIT_TOL environment variable when set, else 1e-9. Mutable so the CLI and
// tests can tighten or relax it.
double& tolerance();

}  // namespace cqmkit
