#pragma once

#include "gtforge/trajlog.hpp"

namespace gtforge {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Target kinematics in the ego frame: x forward along the ego heading,
/// y to the left. Velocity is as observed from the rotating ego frame.
struct RelativeState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double psi = 0.0;  // (-pi, pi]
};

// Relative kinematics of a target vehicle seen from the ego vehicle. Both
// samples must be taken at the same instant and expressed in the same UTM
// zone.

/// R(-psi_e) * (p_t - p_e).
Vec2 relative_position(const TrajectorySample& ego, const TrajectorySample& tgt);

/// R(-psi_e) * (v_t - v_e + psi_dot_e * [dy, -dx]).
/// Throws Error{MissingYawRate} when ego.psi_dot is absent.
Vec2 relative_velocity(const TrajectorySample& ego, const TrajectorySample& tgt);

/// psi_t - psi_e wrapped to (-pi, pi].
double relative_yaw(const TrajectorySample& ego, const TrajectorySample& tgt);

RelativeState relative_state(const TrajectorySample& ego, const TrajectorySample& tgt);

/// Inverse of relative_state: the UTM state of a target given the ego
/// state and the target's relative state. The result has no yaw rate.
TrajectorySample utm_from_relative(const TrajectorySample& ego, const RelativeState& rel);

}  // namespace gtforge
