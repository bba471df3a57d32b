#pragma once

#include <stdexcept>
#include <string>

namespace gtforge {

enum class ErrorCode {
  InvalidArgument,
  InvalidCoordinate,
  OutOfZone,
  ParseError,
  MissingColumn,
  NonMonotonicTimestamps,
  TooFewSamples,
  OutOfSupport,
  MissingYawRate,
  ZoneMismatch,
  TooFewPoses,
  DegenerateMotion,
  LengthMismatch,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace gtforge
