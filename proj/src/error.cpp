#include "fogloss/error.hpp"

namespace fogloss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ComplexBranchPoints: return "ComplexBranchPoints";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::SingularIntegrand: return "SingularIntegrand";
    case ErrorCode::PoleEncountered: return "PoleEncountered";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::DegenerateP1: return "DegenerateP1";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::CriticalRegime: return "CriticalRegime";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidHorizon: return "InvalidHorizon";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidRerouteProbability: return "InvalidRerouteProbability";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace fogloss
