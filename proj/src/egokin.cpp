#include "gtforge/egokin.hpp"

#include <cmath>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"

namespace gtforge {

Vec2 relative_position(const TrajectorySample& ego, const TrajectorySample& tgt) {
  const double dx = tgt.x - ego.x;
  const double dy = tgt.y - ego.y;
  const double c = std::cos(ego.psi), s = std::sin(ego.psi);
  return {dx * c + dy * s, dy * c - dx * s};
}

Vec2 relative_velocity(const TrajectorySample& ego, const TrajectorySample& tgt) {
  if (!ego.psi_dot) throw Error(ErrorCode::MissingYawRate, "ego sample has no yaw rate");
  const double w = *ego.psi_dot;
  const double dx = tgt.x - ego.x;
  const double dy = tgt.y - ego.y;
  const double ux = tgt.vx - ego.vx + w * dy;
  const double uy = tgt.vy - ego.vy - w * dx;
  const double c = std::cos(ego.psi), s = std::sin(ego.psi);
  return {ux * c + uy * s, uy * c - ux * s};
}

double relative_yaw(const TrajectorySample& ego, const TrajectorySample& tgt) {
  return angle_diff(tgt.psi, ego.psi);
}

RelativeState relative_state(const TrajectorySample& ego, const TrajectorySample& tgt) {
  const Vec2 p = relative_position(ego, tgt);
  const Vec2 v = relative_velocity(ego, tgt);
  return {p.x, p.y, v.x, v.y, relative_yaw(ego, tgt)};
}

TrajectorySample utm_from_relative(const TrajectorySample& ego, const RelativeState& rel) {
  if (!ego.psi_dot) throw Error(ErrorCode::MissingYawRate, "ego sample has no yaw rate");
  const double c = std::cos(ego.psi), s = std::sin(ego.psi);
  const double dx = rel.x * c - rel.y * s;
  const double dy = rel.x * s + rel.y * c;
  const double ux = rel.vx * c - rel.vy * s;
  const double uy = rel.vx * s + rel.vy * c;
  const double w = *ego.psi_dot;

  TrajectorySample tgt;
  tgt.t = ego.t;
  tgt.x = ego.x + dx;
  tgt.y = ego.y + dy;
  tgt.vx = ego.vx + ux - w * dy;
  tgt.vy = ego.vy + uy + w * dx;
  tgt.psi = wrap_angle(ego.psi + rel.psi);
  tgt.alt = ego.alt;
  return tgt;
}

}  // namespace gtforge
