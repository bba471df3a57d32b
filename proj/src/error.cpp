#include "gtforge/error.hpp"

namespace gtforge {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorCode::OutOfZone: return "OutOfZone";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::MissingYawRate: return "MissingYawRate";
    case ErrorCode::ZoneMismatch: return "ZoneMismatch";
    case ErrorCode::TooFewPoses: return "TooFewPoses";
    case ErrorCode::DegenerateMotion: return "DegenerateMotion";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

}  // namespace gtforge
