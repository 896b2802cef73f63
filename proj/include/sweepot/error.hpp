#pragma once

#include <stdexcept>
#include <string>

namespace sweepot {

enum class ErrorCode {
  ZeroMass,
  InfeasibleGeometry,
  ParseError,
  NegativeHeight,
  DimensionMismatch,
  UnbalancedMass,
  TooLarge,
  CellOutsidePatch,
  EmptyPlan,
  NoNonTrivialEdge,
  Converged,
  SamplingExhausted,
  EmptyInput,
  ConfigError,
  InvalidArgument,
  Internal,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Every recoverable failure carries a code so
/// callers can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sweepot
