#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tubehs {

enum class ErrorCode {
  SingularGenerators,
  UnsupportedDimension,
  DimensionMismatch,
  NotInInterior,
  OutsideDualCone,
  OutsideSpectralSet,
  InvalidArgument,
  UnsupportedCone,
  TargetUnreachable,
  NonFiniteIntegrand,
  NoConvergence,
  RuleMismatch,
  OscillationBudgetExceeded,
  DegreeTooHigh,
  ParameterMismatch,
  NonFiniteSamples,
  SpectrumOutsideCones,
  WrongTube,
  GramIllConditioned,
  SymbolOutsideDualCone,
  NotSelfMap,
  NotInHalfPlane,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Thrown by every library operation that rejects its input or fails numerically.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tubehs
