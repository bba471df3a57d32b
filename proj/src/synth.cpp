#include "gtforge/synth.hpp"

#include <cmath>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"
#include "gtforge/montecarlo.hpp"

namespace gtforge::synth {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

void validate(const TrackSpec& spec) {
  require(std::isfinite(spec.straight_len) && spec.straight_len > 0.0, "straight_len must be > 0");
  require(std::isfinite(spec.curve_radius) && spec.curve_radius > 0.0, "curve_radius must be > 0");
  require(std::isfinite(spec.origin_x) && std::isfinite(spec.origin_y) && std::isfinite(spec.heading),
          "track origin must be finite");
}

void validate(const RunSpec& run) {
  require(std::isfinite(run.initial_speed) && run.initial_speed >= 0.0, run.vehicle_id + ": speeds must be >= 0");
  require(std::isfinite(run.rate) && run.rate > 0.0, run.vehicle_id + ": rate must be > 0");
  require(std::isfinite(run.duration) && run.duration >= 0.0, run.vehicle_id + ": duration must be >= 0");
  require(std::isfinite(run.t0) && std::isfinite(run.start_offset) && std::isfinite(run.lateral_offset),
          run.vehicle_id + ": non-finite run parameter");
  double busy_until = run.t0;
  for (const auto& c : run.changes) {
    require(std::isfinite(c.speed) && c.speed >= 0.0, run.vehicle_id + ": speeds must be >= 0");
    require(std::isfinite(c.ramp) && c.ramp >= 0.0, run.vehicle_id + ": ramp must be >= 0");
    require(std::isfinite(c.t) && c.t >= busy_until, run.vehicle_id + ": speed changes overlap or are unsorted");
    busy_until = c.t + c.ramp;
  }
}

Track::Track(const TrackSpec& spec) : spec_(spec) {
  validate(spec);
  length_ = 2.0 * spec.straight_len + kTwoPi * spec.curve_radius;
}

TrackPoint Track::at(double s) const {
  const double L = spec_.straight_len;
  const double R = spec_.curve_radius;
  double u = std::fmod(s, length_);
  if (u < 0.0) u += length_;

  // Local frame: first straight along +x from the origin, turning left.
  double lx = 0.0, ly = 0.0, h = 0.0, k = 0.0;
  if (u < L) {
    lx = u;
  } else if (u < L + kPi * R) {
    const double phi = (u - L) / R;
    lx = L + R * std::sin(phi);
    ly = R - R * std::cos(phi);
    h = phi;
    k = 1.0 / R;
  } else if (u < 2.0 * L + kPi * R) {
    lx = L - (u - L - kPi * R);
    ly = 2.0 * R;
    h = kPi;
  } else {
    const double phi = (u - 2.0 * L - kPi * R) / R;
    lx = -R * std::sin(phi);
    ly = R + R * std::cos(phi);
    h = kPi + phi;
    k = 1.0 / R;
  }
  const double c = std::cos(spec_.heading), sn = std::sin(spec_.heading);
  return {spec_.origin_x + c * lx - sn * ly, spec_.origin_y + sn * lx + c * ly, wrap_angle(h + spec_.heading), k};
}

std::vector<double> sample_times(double t0, double duration, double rate) {
  const auto count = static_cast<size_t>(std::floor(duration * rate + 1e-9)) + 1;
  std::vector<double> t(count);
  for (size_t k = 0; k < count; ++k) t[k] = t0 + static_cast<double>(k) / rate;
  return t;
}

ArcState arc_state(const RunSpec& run, double t) {
  // Piecewise-linear speed: hold, ramp, hold, ...
  double s = 0.0;
  double v = run.initial_speed;
  double tc = run.t0;
  for (const auto& c : run.changes) {
    if (t <= c.t) break;
    s += v * (c.t - tc);
    if (c.ramp > 0.0 && t < c.t + c.ramp) {
      const double tau = t - c.t;
      const double acc = (c.speed - v) / c.ramp;
      return {s + v * tau + 0.5 * acc * tau * tau, v + acc * tau};
    }
    s += 0.5 * (v + c.speed) * c.ramp;
    v = c.speed;
    tc = c.t + c.ramp;
  }
  s += v * (t - tc);
  return {s, v};
}

TrajectorySample state_on_track(const Track& track, const RunSpec& run, double t) {
  const ArcState arc = arc_state(run, t);
  const TrackPoint p = track.at(run.start_offset + arc.s);
  const double c = std::cos(p.heading), s = std::sin(p.heading);
  const double o = run.lateral_offset;
  const double path_speed = arc.speed * (1.0 - p.curvature * o);

  TrajectorySample out;
  out.t = t;
  out.x = p.x - o * s;
  out.y = p.y + o * c;
  out.vx = path_speed * c;
  out.vy = path_speed * s;
  out.psi = p.heading;
  out.psi_dot = p.curvature * arc.speed;
  return out;
}

Trajectory simulate_run(const Track& track, const RunSpec& run) {
  validate(run);
  Trajectory traj;
  traj.vehicle_id = run.vehicle_id;
  for (double t : sample_times(run.t0, run.duration, run.rate)) traj.samples.push_back(state_on_track(track, run, t));
  return traj;
}

Trajectory corrupt(const Trajectory& traj, const uncert::NoiseModel& nm, const ClockModel& clock, uint64_t seed) {
  uncert::validate(nm);
  mc::NormalStream rng(seed, 0);
  Trajectory out = traj;
  for (auto& s : out.samples) {
    s.x = rng(s.x, nm.sigma_pos);
    s.y = rng(s.y, nm.sigma_pos);
    s.vx = rng(s.vx, nm.sigma_vel);
    s.vy = rng(s.vy, nm.sigma_vel);
    s.psi = wrap_angle(rng(s.psi, nm.sigma_psi));
    const double rate_noise = rng(0.0, nm.sigma_psi_dot);
    if (s.psi_dot) *s.psi_dot += rate_noise;
  }
  return apply_clock_model(out, inverse_clock_model(clock));
}

std::vector<SimulatedVehicle> simulate_scenario(const Scenario& scenario) {
  const Track track(scenario.track);
  std::vector<SimulatedVehicle> out;
  out.reserve(scenario.vehicles.size());
  for (size_t i = 0; i < scenario.vehicles.size(); ++i) {
    const auto& v = scenario.vehicles[i];
    SimulatedVehicle sim;
    sim.clean = simulate_run(track, v.run);
    sim.corrupted = corrupt(sim.clean, scenario.noise, v.clock, mc::derive_seed(scenario.seed, i));
    out.push_back(std::move(sim));
  }
  return out;
}

}  // namespace gtforge::synth
