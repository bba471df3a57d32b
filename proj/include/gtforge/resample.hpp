#pragma once

#include <optional>

#include "gtforge/spline.hpp"
#include "gtforge/trajlog.hpp"

namespace gtforge {

/// Per-channel natural cubic splines over a Trajectory.
///
/// Yaw is unwrapped before fitting and re-wrapped on evaluation. When the
/// log carries a yaw rate on every sample it gets its own spline; otherwise
/// the yaw rate is the analytic derivative of the yaw spline. Evaluation
/// outside [t_first, t_last] throws Error{OutOfSupport}.
class TrajectoryInterpolant {
 public:
  static constexpr size_t kMinSamples = 4;

  /// Throws Error{TooFewSamples} or Error{NonMonotonicTimestamps}.
  explicit TrajectoryInterpolant(const Trajectory& traj);

  TrajectorySample state_at(double t) const;

  bool contains(double t) const { return t >= t_first_ && t <= t_last_; }
  double t_first() const { return t_first_; }
  double t_last() const { return t_last_; }
  const std::string& vehicle_id() const { return vehicle_id_; }
  const std::optional<UtmZone>& zone() const { return zone_; }
  bool yaw_rate_logged() const { return psi_dot_.has_value(); }

  /// RMS difference, over the knots, between the logged velocity channels
  /// and the derivative of the position splines. A large value points at
  /// an inconsistent log; it is never an error.
  double velocity_consistency_rms() const;

 private:
  std::string vehicle_id_;
  std::optional<UtmZone> zone_;
  std::vector<double> knots_;
  double t_first_ = 0.0;
  double t_last_ = 0.0;
  CubicSpline x_, y_, vx_, vy_, psi_, alt_;
  std::optional<CubicSpline> psi_dot_;
};

/// Free-function spelling of the constructor.
inline TrajectoryInterpolant build_interpolant(const Trajectory& traj) { return TrajectoryInterpolant(traj); }

inline TrajectorySample state_at(const TrajectoryInterpolant& itp, double t) { return itp.state_at(t); }

}  // namespace gtforge
