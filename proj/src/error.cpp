#include "everett/error.hpp"

namespace everett {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::NotTunneling: return "NotTunneling";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::PacketOutOfDomain: return "PacketOutOfDomain";
    case ErrorCode::SolverBreakdown: return "SolverBreakdown";
    case ErrorCode::ScatteringIncomplete: return "ScatteringIncomplete";
    case ErrorCode::NoGrowth: return "NoGrowth";
    case ErrorCode::ZeroSeparation: return "ZeroSeparation";
    case ErrorCode::SubUnityEvents: return "SubUnityEvents";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
  }
  return "Unknown";
}

}  // namespace everett
