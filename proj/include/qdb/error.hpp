#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdb {

enum class ErrorCode {
  EmptyFocalSet,
  MassSumViolation,
  NegativeMass,
  NotSubsetOfFrame,
  DuplicateFocalSet,
  InvalidFrame,
  OutOfRange,
  NotHermitian,
  EigendecompositionFailure,
  DimensionMismatch,
  ZeroProbabilityBranch,
  ZeroEntropyDenominator,
  TargetUnreachable,
  NonMonotoneBracket,
  ParseError,
  InvariantViolation,
  EmptyReport,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdb
