#include "qdb/error.hpp"

namespace qdb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFocalSet: return "EmptyFocalSet";
    case ErrorCode::MassSumViolation: return "MassSumViolation";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::NotSubsetOfFrame: return "NotSubsetOfFrame";
    case ErrorCode::DuplicateFocalSet: return "DuplicateFocalSet";
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::EigendecompositionFailure: return "EigendecompositionFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::ZeroEntropyDenominator: return "ZeroEntropyDenominator";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::NonMonotoneBracket: return "NonMonotoneBracket";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::EmptyReport: return "EmptyReport";
  }
  return "Unknown";
}

}  // namespace qdb
