#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtforge/egokin.hpp"
#include "gtforge/trajlog.hpp"
#include "gtforge/uncert.hpp"

namespace gtforge {

struct VehicleGeometry {
  double length = 4.5;  // m
  double width = 1.8;   // m
  /// Offset from the logged reference point to the box center, in the
  /// vehicle's own frame.
  Vec2 ref_to_center;
};

/// Corners in the ego frame: front-left, front-right, rear-right, rear-left
/// of the target's own frame.
using BoundingBox = std::array<Vec2, 4>;

struct GroundTruthRecord {
  double t = 0.0;
  std::string target_id;
  RelativeState rel;
  BoundingBox bbox;
  // Present iff a noise model was supplied.
  std::optional<uncert::CovBound2> pos_bound;
  std::optional<uncert::CovBound2> vel_bound;
  std::optional<double> yaw_var;
};

struct GenerateOptions {
  /// Geometry per target id; `default_geometry` for the rest.
  std::map<std::string, VehicleGeometry> geometries;
  VehicleGeometry default_geometry;
  /// Clock model per vehicle id (ego included); identity when absent.
  std::map<std::string, ClockModel> clocks;
  std::optional<uncert::NoiseModel> noise;
  uncert::ScenarioEnvelope envelope;
  uncert::ExponentConvention convention = uncert::ExponentConvention::HalfExponent;
};

void validate(const VehicleGeometry& geom);

BoundingBox bbox_footprint(const RelativeState& rel, const VehicleGeometry& geom);

/// Clock-corrects every trajectory, interpolates all of them at each stamp
/// and evaluates the relative state of each target. Records are ordered by
/// (t, target_id). Bounds are dataset-level constants.
///
/// Throws Error{OutOfSupport} naming the stamps outside any trajectory's
/// support, Error{ZoneMismatch} when the logs were projected into different
/// UTM zones.
std::vector<GroundTruthRecord> generate_records(const Trajectory& ego, std::span<const Trajectory> targets,
                                                std::span<const double> stamps, const GenerateOptions& options);

/// One float per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_stamps(std::istream& in);

/// t_begin + k / rate for every k with the result <= t_end.
std::vector<double> stamps_at_rate(double t_begin, double t_end, double rate);

/// JSON-lines, one record per line, floats with 9 significant digits.
void write_records_jsonl(std::ostream& out, std::span<const GroundTruthRecord> records);
std::vector<GroundTruthRecord> read_records_jsonl(std::istream& in);

}  // namespace gtforge
