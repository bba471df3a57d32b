#include "gtforge/calib.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"
#include "gtforge/spline.hpp"

namespace gtforge::calib {

RigidTransform2D RigidTransform2D::compose(const RigidTransform2D& rhs) const {
  const Vec2 t = apply({rhs.tx, rhs.ty});
  return {wrap_angle(theta + rhs.theta), t.x, t.y};
}

RigidTransform2D RigidTransform2D::inverse() const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {wrap_angle(-theta), -(c * tx + s * ty), -(-s * tx + c * ty)};
}

Vec2 RigidTransform2D::apply(const Vec2& p) const {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x - s * p.y + tx, s * p.x + c * p.y + ty};
}

std::vector<MotionIncrement> relative_motions(std::span<const Pose2D> poses) {
  if (poses.size() < 2) throw Error(ErrorCode::TooFewPoses, "need at least 2 poses, got " + std::to_string(poses.size()));
  std::vector<MotionIncrement> out;
  out.reserve(poses.size() - 1);
  for (size_t i = 0; i + 1 < poses.size(); ++i) {
    if (!(poses[i + 1].t > poses[i].t)) {
      throw Error(ErrorCode::NonMonotonicTimestamps, "pose " + std::to_string(i + 1) + " does not advance in time");
    }
    const RigidTransform2D inc = poses[i].transform().inverse().compose(poses[i + 1].transform());
    out.push_back({inc.theta, {inc.tx, inc.ty}});
  }
  return out;
}

HandEyeResidual hand_eye_residual(std::span<const MotionIncrement> a, std::span<const MotionIncrement> b,
                                  const RigidTransform2D& x) {
  HandEyeResidual r;
  r.count = std::min(a.size(), b.size());
  const double cx = std::cos(x.theta), sx = std::sin(x.theta);
  double rot2 = 0.0, trans2 = 0.0;
  for (size_t i = 0; i < r.count; ++i) {
    const double rot = std::abs(angle_diff(a[i].dtheta, b[i].dtheta));
    const double ca = std::cos(a[i].dtheta), sa = std::sin(a[i].dtheta);
    const double ex = (ca - 1.0) * x.tx - sa * x.ty - (cx * b[i].dt_vec.x - sx * b[i].dt_vec.y) + a[i].dt_vec.x;
    const double ey = sa * x.tx + (ca - 1.0) * x.ty - (sx * b[i].dt_vec.x + cx * b[i].dt_vec.y) + a[i].dt_vec.y;
    const double trans = std::hypot(ex, ey);
    rot2 += rot * rot;
    trans2 += trans * trans;
    r.rotation_max = std::max(r.rotation_max, rot);
    r.translation_max = std::max(r.translation_max, trans);
  }
  if (r.count > 0) {
    r.rotation_rms = std::sqrt(rot2 / static_cast<double>(r.count));
    r.translation_rms = std::sqrt(trans2 / static_cast<double>(r.count));
  }
  return r;
}

HandEyeResult solve_hand_eye(std::span<const MotionIncrement> a, std::span<const MotionIncrement> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(a.size()) + " increments in stream a, " + std::to_string(b.size()) + " in stream b");
  }
  double total_rotation = 0.0;
  for (const auto& m : a) total_rotation += std::abs(m.dtheta);
  if (total_rotation < kMinTotalRotation) {
    throw Error(ErrorCode::DegenerateMotion, "total rotation " + std::to_string(total_rotation) +
                                                 " rad is below " + std::to_string(kMinTotalRotation) +
                                                 "; the lever arm is unobservable");
  }

  // Rows per increment: (R_a - I) t_x - M(t_b) [c, s]^T = -t_a,
  // M(u) = [[u_x, -u_y], [u_y, u_x]].
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd A(2 * n, 4);
  Eigen::VectorXd rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ma = a[static_cast<size_t>(i)];
    const auto& mb = b[static_cast<size_t>(i)];
    const double ca = std::cos(ma.dtheta), sa = std::sin(ma.dtheta);
    const double ux = mb.dt_vec.x, uy = mb.dt_vec.y;
    A.row(2 * i) << ca - 1.0, -sa, -ux, uy;
    A.row(2 * i + 1) << sa, ca - 1.0, -uy, -ux;
    rhs(2 * i) = -ma.dt_vec.x;
    rhs(2 * i + 1) = -ma.dt_vec.y;
  }
  const Eigen::Vector4d first = A.colPivHouseholderQr().solve(rhs);
  const double theta = std::atan2(first(3), first(2));
  const double c = std::cos(theta), s = std::sin(theta);

  // Rotation fixed: (R_a - I) t_x = R_x t_b - t_a.
  Eigen::MatrixXd At = A.leftCols<2>();
  Eigen::VectorXd rt(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ma = a[static_cast<size_t>(i)];
    const auto& mb = b[static_cast<size_t>(i)];
    rt(2 * i) = c * mb.dt_vec.x - s * mb.dt_vec.y - ma.dt_vec.x;
    rt(2 * i + 1) = s * mb.dt_vec.x + c * mb.dt_vec.y - ma.dt_vec.y;
  }
  const Eigen::Vector2d t = At.colPivHouseholderQr().solve(rt);

  HandEyeResult result;
  result.transform = {wrap_angle(theta), t(0), t(1)};
  result.residual = hand_eye_residual(a, b, result.transform);
  return result;
}

std::vector<Pose2D> resample_poses(std::span<const Pose2D> stream, std::span<const double> stamps) {
  if (stream.size() < 2) throw Error(ErrorCode::TooFewPoses, "need at least 2 poses to resample");
  std::vector<double> t(stream.size()), x(stream.size()), y(stream.size()), th(stream.size());
  double unwrapped = stream[0].theta;
  for (size_t i = 0; i < stream.size(); ++i) {
    t[i] = stream[i].t;
    x[i] = stream[i].x;
    y[i] = stream[i].y;
    if (i > 0) unwrapped += angle_diff(stream[i].theta, stream[i - 1].theta);
    th[i] = unwrapped;
  }
  const CubicSpline sx(t, x), sy(t, y), sth(t, th);
  std::vector<Pose2D> out;
  out.reserve(stamps.size());
  for (double q : stamps) {
    if (!(q >= t.front() && q <= t.back())) {
      throw Error(ErrorCode::OutOfSupport, "pose stamp " + std::to_string(q) + " outside the stream");
    }
    out.push_back({q, sx.value(q), sy.value(q), wrap_angle(sth.value(q))});
  }
  return out;
}

std::vector<Pose2D> read_pose_stream(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "missing header");
  ++line_no;
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  if (line != "t,x,y,theta") {
    throw Error(ErrorCode::MissingColumn, "pose stream header must be 't,x,y,theta', got '" + line + "'");
  }
  std::vector<Pose2D> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    double v[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 4; ++k) {
      while (p < end && *p == ' ') ++p;
      auto [ptr, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc() || !std::isfinite(v[k])) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad field " + std::to_string(k + 1));
      }
      p = ptr;
      while (p < end && (*p == ' ' || *p == '\r')) ++p;
      if (k < 3) {
        if (p == end || *p != ',') {
          throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 4 fields");
        }
        ++p;
      }
    }
    if (p != end) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": trailing data");
    if (!out.empty() && !(v[0] > out.back().t)) {
      throw Error(ErrorCode::NonMonotonicTimestamps, "line " + std::to_string(line_no));
    }
    out.push_back({v[0], v[1], v[2], wrap_angle(v[3])});
  }
  return out;
}

std::vector<Pose2D> read_pose_stream_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  try {
    return read_pose_stream(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void write_pose_stream(std::ostream& out, std::span<const Pose2D> poses) {
  out << "t,x,y,theta\n";
  char buf[128];
  for (const auto& p : poses) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.t, p.x, p.y, p.theta);
    out << buf;
  }
}

}  // namespace gtforge::calib
