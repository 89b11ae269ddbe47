#pragma once

#include <stdexcept>
#include <string>

namespace prering {

// Error taxonomy shared across the library. The CLI maps `input` class
// errors to exit code 1 and `verification` class errors to exit code 2.
enum class ErrorCode {
  // input / usage errors
  DimensionMismatch,
  UnsupportedKind,
  UnsupportedDescriptor,
  UnboundedDomain,
  StieltjesEndpointInD,
  CountingOnNonSingleton,
  BadInput,
  // verification failures
  DisjointnessViolation,
  ContainmentViolation,
  MonotonicityViolation,
  DominationViolation,
  RuleViolation,
  LipschitzViolation,
  GeneratorInvalid,
  ToleranceUnreachable,
  OracleFailure,
};

const char* error_code_name(ErrorCode c);
bool is_verification_error(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace prering
