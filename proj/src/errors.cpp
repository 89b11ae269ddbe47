#include "prering/errors.hpp"

namespace prering {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::UnsupportedDescriptor: return "UnsupportedDescriptor";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::StieltjesEndpointInD: return "StieltjesEndpointInD";
    case ErrorCode::CountingOnNonSingleton: return "CountingOnNonSingleton";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::DisjointnessViolation: return "DisjointnessViolation";
    case ErrorCode::ContainmentViolation: return "ContainmentViolation";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::DominationViolation: return "DominationViolation";
    case ErrorCode::RuleViolation: return "RuleViolation";
    case ErrorCode::LipschitzViolation: return "LipschitzViolation";
    case ErrorCode::GeneratorInvalid: return "GeneratorInvalid";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::OracleFailure: return "OracleFailure";
  }
  return "UnknownError";
}

bool is_verification_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::DisjointnessViolation:
    case ErrorCode::ContainmentViolation:
    case ErrorCode::MonotonicityViolation:
    case ErrorCode::DominationViolation:
    case ErrorCode::RuleViolation:
    case ErrorCode::LipschitzViolation:
    case ErrorCode::GeneratorInvalid:
    case ErrorCode::ToleranceUnreachable:
    case ErrorCode::OracleFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace prering
