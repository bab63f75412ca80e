#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogloss {

enum class ErrorCode {
  InvalidParams,
  ComplexBranchPoints,
  OrderingViolation,
  BranchCut,
  DomainError,
  QuadratureFailure,
  SingularIntegrand,
  PoleEncountered,
  WrongRegime,
  DegenerateP1,
  OutOfRange,
  CriticalRegime,
  TruncationNotConverged,
  SingularSystem,
  InvalidHorizon,
  StateSpaceTooLarge,
  InvalidRerouteProbability,
  UnsupportedTopology,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI exit codes, Python bindings) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fogloss
