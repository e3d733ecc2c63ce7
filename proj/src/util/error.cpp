#include "specfun/error.hpp"

namespace specfun {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LowerBoundViolated: return "LowerBoundViolated";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NoPoincare: return "NoPoincare";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::ShiftInsideSpectrum: return "ShiftInsideSpectrum";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::NonContraction: return "NonContraction";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::MissingFile: return "MissingFile";
  }
  return "Unknown";
}

}  // namespace specfun
