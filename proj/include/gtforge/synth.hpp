#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtforge/angle.hpp"
#include "gtforge/trajlog.hpp"
#include "gtforge/uncert.hpp"

namespace gtforge::synth {

/// Stadium track: two straights joined by two half-circles, driven
/// counter-clockwise. The first straight starts at `origin` and points
/// along `heading`.
struct TrackSpec {
  double straight_len = 1100.0;
  double curve_radius = 1000.0 / kTwoPi;  // 3.2 km lap
  double origin_x = 0.0;
  double origin_y = 0.0;
  double heading = 0.0;  // rad, CCW from east
};

struct TrackPoint {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // (-pi, pi]
  double curvature = 0.0;
};

class Track {
 public:
  explicit Track(const TrackSpec& spec);

  double length() const { return length_; }
  const TrackSpec& spec() const { return spec_; }
  /// Centerline at arc length s (periodic).
  TrackPoint at(double s) const;

 private:
  TrackSpec spec_;
  double length_ = 0.0;
};

inline Track make_track(const TrackSpec& spec) { return Track(spec); }

/// Speed change starting at `t`, reaching `speed` linearly after `ramp` s.
struct SpeedChange {
  double t = 0.0;
  double speed = 0.0;
  double ramp = 0.0;
};

struct RunSpec {
  std::string vehicle_id = "vehicle";
  double initial_speed = 0.0;        // m/s along the centerline
  std::vector<SpeedChange> changes;  // sorted, non-overlapping
  double start_offset = 0.0;         // m of arc length at t0
  double lateral_offset = 0.0;       // m, left of the centerline
  double t0 = 0.0;                   // s
  double duration = 60.0;            // s
  double rate = 100.0;               // Hz
};

void validate(const TrackSpec& spec);
void validate(const RunSpec& run);

/// Sample times t0 + k / rate for k = 0 .. floor(duration * rate).
std::vector<double> sample_times(double t0, double duration, double rate);

/// Arc length travelled since t0 and the centerline speed at time t.
struct ArcState {
  double s = 0.0;
  double speed = 0.0;
};
ArcState arc_state(const RunSpec& run, double t);

/// Exact state at time t.
TrajectorySample state_on_track(const Track& track, const RunSpec& run, double t);

/// Noiseless trajectory with analytically consistent channels.
Trajectory simulate_run(const Track& track, const RunSpec& run);

/// Adds white Gaussian noise per `nm` to every channel, then applies the
/// clock error `clock` so that apply_clock_model(result, clock) restores the
/// true timestamps. Deterministic per seed.
Trajectory corrupt(const Trajectory& traj, const uncert::NoiseModel& nm, const ClockModel& clock, uint64_t seed);

struct ScenarioVehicle {
  RunSpec run;
  ClockModel clock;
};

struct Scenario {
  TrackSpec track;
  std::vector<ScenarioVehicle> vehicles;
  uncert::NoiseModel noise;
  uint64_t seed = 0;
};

struct SimulatedVehicle {
  Trajectory clean;
  Trajectory corrupted;
};

/// Vehicle i is corrupted with the stream derived from (seed, i).
std::vector<SimulatedVehicle> simulate_scenario(const Scenario& scenario);

}  // namespace gtforge::synth
