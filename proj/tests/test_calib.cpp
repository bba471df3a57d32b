#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gtforge/angle.hpp"
#include "gtforge/calib.hpp"
#include "support.hpp"

using namespace gtforge;
using namespace gtforge::calib;

namespace {

// Curvature-rich planar path.
std::vector<Pose2D> wiggle(size_t n, double dt) {
  std::vector<Pose2D> out;
  double x = 0.0, y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double th = 0.8 * std::sin(0.5 * t) + 0.3 * std::sin(1.3 * t);
    out.push_back({t, x, y, wrap_angle(th)});
    x += 10.0 * dt * std::cos(th);
    y += 10.0 * dt * std::sin(th);
  }
  return out;
}

std::vector<Pose2D> mounted(const std::vector<Pose2D>& a, const RigidTransform2D& world, const RigidTransform2D& x) {
  std::vector<Pose2D> out;
  for (const auto& p : a) {
    const RigidTransform2D b = world.compose(p.transform()).compose(x);
    out.push_back({p.t, b.tx, b.ty, b.theta});
  }
  return out;
}

}  // namespace

TEST_CASE("rigid transform algebra") {
  const RigidTransform2D a{0.4, 1.0, -2.0}, b{-1.1, 0.5, 3.0};
  const auto id = a.compose(a.inverse());
  CHECK(std::abs(id.theta) < 1e-15);
  CHECK(std::abs(id.tx) < 1e-15);
  CHECK(std::abs(id.ty) < 1e-15);
  const Vec2 p{2.0, 7.0};
  const Vec2 q = a.compose(b).apply(p), r = a.apply(b.apply(p));
  CHECK(q.x == doctest::Approx(r.x));
  CHECK(q.y == doctest::Approx(r.y));
}

TEST_CASE("relative motions") {
  std::vector<Pose2D> same{{0, 1, 2, 0.3}, {1, 1, 2, 0.3}};
  auto m = relative_motions(same);
  REQUIRE(m.size() == 1);
  CHECK(m[0].dtheta == 0.0);
  CHECK(m[0].dt_vec.x == 0.0);
  CHECK(m[0].dt_vec.y == 0.0);

  std::vector<Pose2D> line{{0, 0, 0, 0}, {1, 2, 0, 0}, {2, 4, 0, 0}};
  m = relative_motions(line);
  CHECK(m[1].dt_vec.x == 2.0);
  CHECK(m[1].dt_vec.y == 0.0);

  // Circle arc: constant increments that compose back to the last pose.
  std::vector<Pose2D> arc;
  for (int i = 0; i < 50; ++i) {
    const double phi = 0.05 * i;
    arc.push_back({double(i), 10 * std::sin(phi), 10 - 10 * std::cos(phi), phi});
  }
  m = relative_motions(arc);
  RigidTransform2D acc = arc.front().transform();
  for (const auto& inc : m) {
    CHECK(inc.dtheta == doctest::Approx(0.05));
    CHECK(inc.dt_vec.x == doctest::Approx(m[0].dt_vec.x));
    acc = acc.compose({inc.dtheta, inc.dt_vec.x, inc.dt_vec.y});
  }
  CHECK(acc.tx == doctest::Approx(arc.back().x));
  CHECK(acc.ty == doctest::Approx(arc.back().y));

  CHECK(testing::error_code_of([] { relative_motions(std::vector<Pose2D>{{0, 0, 0, 0}}); }) == ErrorCode::TooFewPoses);
}

TEST_CASE("hand-eye: identical streams") {
  const auto a = wiggle(200, 0.1);
  const auto m = relative_motions(a);
  const auto r = solve_hand_eye(m, m);
  CHECK(std::abs(r.transform.theta) < 1e-12);
  CHECK(std::abs(r.transform.tx) < 1e-9);
  CHECK(std::abs(r.transform.ty) < 1e-9);
  CHECK(r.residual.translation_max < 1e-9);
  CHECK(r.residual.rotation_max == 0.0);
}

TEST_CASE("hand-eye: noiseless recovery and equivariance") {
  const auto a = wiggle(300, 0.1);
  const RigidTransform2D x0{0.2, 1.5, -0.3};
  const auto b = mounted(a, {1.0, 100.0, -40.0}, x0);
  const auto r = solve_hand_eye(relative_motions(a), relative_motions(b));
  CHECK(std::abs(r.transform.theta - 0.2) <= 1e-9);
  CHECK(std::abs(r.transform.tx - 1.5) <= 1e-9);
  CHECK(std::abs(r.transform.ty + 0.3) <= 1e-9);
  CHECK(r.residual.translation_rms < 1e-9);
  CHECK(r.residual.rotation_rms < 1e-12);

  // A common change of the world frame changes nothing.
  const RigidTransform2D w{-2.0, 3.0, 9.0};
  const auto a2 = mounted(a, w, {}), b2 = mounted(b, w, {});
  const auto r2 = solve_hand_eye(relative_motions(a2), relative_motions(b2));
  CHECK(std::abs(r2.transform.theta - r.transform.theta) <= 1e-9);
  CHECK(std::abs(r2.transform.tx - r.transform.tx) <= 1e-9);
  CHECK(std::abs(r2.transform.ty - r.transform.ty) <= 1e-9);
}

TEST_CASE("hand-eye: residuals flag inconsistent streams") {
  const auto a = wiggle(100, 0.1);
  auto b = mounted(a, {}, {0.1, 0.5, 0.5});
  b[50].x += 0.3;
  const auto r = solve_hand_eye(relative_motions(a), relative_motions(b));
  CHECK(r.residual.translation_max > 0.01);
}

TEST_CASE("hand-eye: contract") {
  std::vector<Pose2D> straight;
  for (int i = 0; i < 20; ++i) straight.push_back({double(i), double(i), 0.0, 0.0});
  const auto m = relative_motions(straight);
  CHECK(testing::error_code_of([&] { solve_hand_eye(m, m); }) == ErrorCode::DegenerateMotion);
  const auto w = relative_motions(wiggle(50, 0.1));
  const auto shorter = std::span(w).first(10);
  CHECK(testing::error_code_of([&] { solve_hand_eye(w, shorter); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("pose streams") {
  const auto a = wiggle(100, 0.1);
  std::ostringstream out;
  write_pose_stream(out, a);
  std::istringstream in(out.str());
  const auto back = read_pose_stream(in);
  REQUIRE(back.size() == a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(back[i].t == a[i].t);
    CHECK(back[i].x == a[i].x);
    CHECK(back[i].theta == a[i].theta);
  }
  std::istringstream bad_header("t,x,y\n0,0,0\n");
  CHECK(testing::error_code_of([&] { read_pose_stream(bad_header); }) == ErrorCode::MissingColumn);
  std::istringstream bad_row("t,x,y,theta\n0,0,0,0\n1,0,0\n");
  CHECK(testing::error_code_of([&] { read_pose_stream(bad_row); }) == ErrorCode::ParseError);

  // Resampling at the knots is exact, between knots close to the path.
  std::vector<double> knots{a[3].t, a[50].t};
  auto r = resample_poses(a, knots);
  CHECK(r[0].x == a[3].x);
  CHECK(r[1].theta == doctest::Approx(a[50].theta));
  std::vector<double> outside{-1.0};
  CHECK(testing::error_code_of([&] { resample_poses(a, outside); }) == ErrorCode::OutOfSupport);
}
