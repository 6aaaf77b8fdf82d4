#include "tubehs/error.hpp"

namespace tubehs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularGenerators: return "SingularGenerators";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotInInterior: return "NotInInterior";
    case ErrorCode::OutsideDualCone: return "OutsideDualCone";
    case ErrorCode::OutsideSpectralSet: return "OutsideSpectralSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsupportedCone: return "UnsupportedCone";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RuleMismatch: return "RuleMismatch";
    case ErrorCode::OscillationBudgetExceeded: return "OscillationBudgetExceeded";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::NonFiniteSamples: return "NonFiniteSamples";
    case ErrorCode::SpectrumOutsideCones: return "SpectrumOutsideCones";
    case ErrorCode::WrongTube: return "WrongTube";
    case ErrorCode::GramIllConditioned: return "GramIllConditioned";
    case ErrorCode::SymbolOutsideDualCone: return "SymbolOutsideDualCone";
    case ErrorCode::NotSelfMap: return "NotSelfMap";
    case ErrorCode::NotInHalfPlane: return "NotInHalfPlane";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace tubehs
