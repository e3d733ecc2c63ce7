#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specfun {

enum class ErrorCode {
  NonFiniteEntry,
  NonFiniteValue,
  NoConvergence,
  NotPositiveDefinite,
  DimensionMismatch,
  InvalidExponent,
  InvalidArgument,
  LowerBoundViolated,
  ShapeMismatch,
  NoPoincare,
  BoundViolated,
  ShiftInsideSpectrum,
  BracketFailure,
  RadiusTooSmall,
  NonContraction,
  MaxIterExceeded,
  InvariantViolation,
  CountMismatch,
  ConfigParse,
  MissingFile,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// front ends can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specfun
