#include "sweepot/error.hpp"

namespace sweepot {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::InfeasibleGeometry: return "InfeasibleGeometry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeHeight: return "NegativeHeight";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnbalancedMass: return "UnbalancedMass";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::CellOutsidePatch: return "CellOutsidePatch";
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::NoNonTrivialEdge: return "NoNonTrivialEdge";
    case ErrorCode::Converged: return "Converged";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "UnknownError";
}

}  // namespace sweepot
