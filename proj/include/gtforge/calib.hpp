#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "gtforge/egokin.hpp"

namespace gtforge::calib {

/// Planar rigid transform: rotation by `theta` followed by translation.
struct RigidTransform2D {
  double theta = 0.0;  // (-pi, pi]
  double tx = 0.0;
  double ty = 0.0;

  RigidTransform2D compose(const RigidTransform2D& rhs) const;  // this * rhs
  RigidTransform2D inverse() const;
  Vec2 apply(const Vec2& p) const;
};

struct Pose2D {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  RigidTransform2D transform() const { return {theta, x, y}; }
};

/// Relative pose between consecutive timestamps, in the earlier pose's frame.
struct MotionIncrement {
  double dtheta = 0.0;
  Vec2 dt_vec;
};

struct HandEyeResidual {
  size_t count = 0;
  double rotation_rms = 0.0;     // rad, |wrap(dtheta_a - dtheta_b)|
  double rotation_max = 0.0;
  double translation_rms = 0.0;  // m, |(R_a - I) t_x - R_x t_b + t_a|
  double translation_max = 0.0;
};

struct HandEyeResult {
  RigidTransform2D transform;
  HandEyeResidual residual;
};

/// Minimum summed |dtheta_a| for the lever arm to be observable.
inline constexpr double kMinTotalRotation = 0.1;

/// increment_i = pose_i^-1 * pose_{i+1}. Throws Error{TooFewPoses} or
/// Error{NonMonotonicTimestamps}.
std::vector<MotionIncrement> relative_motions(std::span<const Pose2D> poses);

/// Solves A_i X = X B_i for X, the pose of stream b's frame in stream a's
/// frame. Linear least squares in (t_x, cos, sin), projection of (cos, sin)
/// onto the unit circle, then a second solve for t_x with the rotation
/// fixed. Throws Error{LengthMismatch} or Error{DegenerateMotion}.
HandEyeResult solve_hand_eye(std::span<const MotionIncrement> a, std::span<const MotionIncrement> b);

/// Residuals of a candidate X on the given increments.
HandEyeResidual hand_eye_residual(std::span<const MotionIncrement> a, std::span<const MotionIncrement> b,
                                  const RigidTransform2D& x);

/// Spline-resamples `stream` (x, y, unwrapped theta) at `stamps`. Throws
/// Error{OutOfSupport} for stamps outside the stream.
std::vector<Pose2D> resample_poses(std::span<const Pose2D> stream, std::span<const double> stamps);

/// CSV `t,x,y,theta` (s, m, m, rad).
std::vector<Pose2D> read_pose_stream(std::istream& in);
std::vector<Pose2D> read_pose_stream_file(const std::filesystem::path& path);
void write_pose_stream(std::ostream& out, std::span<const Pose2D> poses);

}  // namespace gtforge::calib
