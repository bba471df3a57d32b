#include "gtforge/resample.hpp"

#include <cmath>
#include <cstdio>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"

namespace gtforge {

TrajectoryInterpolant::TrajectoryInterpolant(const Trajectory& traj)
    : vehicle_id_(traj.vehicle_id), zone_(traj.zone) {
  const auto& s = traj.samples;
  if (s.size() < kMinSamples) {
    throw Error(ErrorCode::TooFewSamples, traj.vehicle_id + ": " + std::to_string(s.size()) +
                                              " samples, need at least " + std::to_string(kMinSamples));
  }
  validate_trajectory(traj);

  const size_t n = s.size();
  knots_.resize(n);
  std::vector<double> x(n), y(n), vx(n), vy(n), psi(n), alt(n), rate(n);
  bool all_rates = true;
  double unwrapped = s[0].psi;
  for (size_t i = 0; i < n; ++i) {
    knots_[i] = s[i].t;
    x[i] = s[i].x;
    y[i] = s[i].y;
    vx[i] = s[i].vx;
    vy[i] = s[i].vy;
    alt[i] = s[i].alt;
    if (i > 0) unwrapped += angle_diff(s[i].psi, s[i - 1].psi);
    psi[i] = unwrapped;
    if (s[i].psi_dot) {
      rate[i] = *s[i].psi_dot;
    } else {
      all_rates = false;
    }
  }
  t_first_ = knots_.front();
  t_last_ = knots_.back();
  x_ = CubicSpline(knots_, x);
  y_ = CubicSpline(knots_, y);
  vx_ = CubicSpline(knots_, vx);
  vy_ = CubicSpline(knots_, vy);
  psi_ = CubicSpline(knots_, psi);
  alt_ = CubicSpline(knots_, alt);
  if (all_rates) psi_dot_ = CubicSpline(knots_, rate);
}

TrajectorySample TrajectoryInterpolant::state_at(double t) const {
  if (!contains(t)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: t=%.9f outside support [%.9f, %.9f]", vehicle_id_.c_str(), t,
                  t_first_, t_last_);
    throw Error(ErrorCode::OutOfSupport, buf);
  }
  TrajectorySample out;
  out.t = t;
  out.x = x_.value(t);
  out.y = y_.value(t);
  out.vx = vx_.value(t);
  out.vy = vy_.value(t);
  out.psi = wrap_angle(psi_.value(t));
  out.psi_dot = psi_dot_ ? psi_dot_->value(t) : psi_.derivative(t);
  out.alt = alt_.value(t);
  return out;
}

double TrajectoryInterpolant::velocity_consistency_rms() const {
  double sum = 0.0;
  for (double t : knots_) {
    const double ex = x_.derivative(t) - vx_.value(t);
    const double ey = y_.derivative(t) - vy_.value(t);
    sum += ex * ex + ey * ey;
  }
  return std::sqrt(sum / static_cast<double>(knots_.size()));
}

}  // namespace gtforge
