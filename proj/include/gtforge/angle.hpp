#pragma once

#include <numbers>

namespace gtforge {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Maps any finite angle to the half-open interval (-pi, pi].
double wrap_angle(double rad);

/// Difference a - b wrapped to (-pi, pi].
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

}  // namespace gtforge
