#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gtforge/geodesy.hpp"

namespace gtforge {

/// Full planar vehicle state in the UTM grid frame.
///
/// Positions are grid meters, velocities are grid east/north components,
/// `psi` is the yaw counter-clockwise from the grid easting axis in
/// (-pi, pi]. `psi_dot` is absent when the log did not provide a yaw rate.
struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double psi = 0.0;
  std::optional<double> psi_dot;
  double alt = 0.0;

  bool operator==(const TrajectorySample&) const = default;
};

struct UtmZone {
  int zone = 0;
  geodesy::Hemisphere hemisphere = geodesy::Hemisphere::North;
  bool operator==(const UtmZone&) const = default;
};

struct Trajectory {
  std::string vehicle_id;
  std::vector<TrajectorySample> samples;
  /// Known only when the log was projected from geodetic coordinates.
  std::optional<UtmZone> zone;

  double t_first() const { return samples.front().t; }
  double t_last() const { return samples.back().t; }
};

/// Constant bias and linear drift of a vehicle clock against the reference.
struct ClockModel {
  double offset = 0.0;  // s
  double drift = 0.0;   // s/s
};

enum class LogFrame { Geodetic, Utm };

/// Checks finiteness, yaw range and strictly increasing timestamps.
/// Throws Error{NonMonotonicTimestamps} or Error{InvalidArgument}.
void validate_trajectory(const Trajectory& traj);

/// Guesses the frame from a CSV header line.
std::optional<LogFrame> detect_frame(const std::string& header_line);

/// Parses a trajectory CSV.
///
/// Geodetic logs are projected into UTM: the whole file uses `forced_zone`
/// when given, otherwise the zone of its first row. Heading (degrees,
/// clockwise from true north) becomes grid yaw (radians, counter-clockwise
/// from grid east) including meridian convergence; velocities are rotated
/// into the grid and scaled by the point scale factor. `yaw_rate` is taken
/// as the counter-clockwise (z-up) rate.
///
/// Throws Error{ParseError} (with line number), Error{MissingColumn},
/// Error{NonMonotonicTimestamps}.
Trajectory parse_trajectory_log(std::istream& in, LogFrame frame,
                                std::optional<int> forced_zone = std::nullopt,
                                std::string vehicle_id = {});

/// Reads a file; vehicle id defaults to the file stem. When `frame` is not
/// given it is detected from the header.
Trajectory read_trajectory_file(const std::filesystem::path& path,
                                std::optional<LogFrame> frame = std::nullopt,
                                std::optional<int> forced_zone = std::nullopt);

/// Writes the UTM schema with round-trip exact number formatting.
void write_trajectory_log(std::ostream& out, const Trajectory& traj);
void write_trajectory_file(const std::filesystem::path& path, const Trajectory& traj);

/// Maps logged timestamps onto the reference clock:
/// t' = t - offset - drift * (t - t0), t0 the first logged timestamp.
Trajectory apply_clock_model(const Trajectory& traj, const ClockModel& clock);

/// The clock model that undoes apply_clock_model(., clock) when applied to
/// its output. Requires |drift| < 1.
ClockModel inverse_clock_model(const ClockModel& clock);

void validate_clock_model(const ClockModel& clock);

}  // namespace gtforge
