#pragma once

#include <optional>

namespace gtforge::geodesy {

// WGS84 ellipsoid.
inline constexpr double kSemiMajorAxis = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;

inline constexpr double kUtmScale = 0.9996;
inline constexpr double kFalseEasting = 500000.0;
inline constexpr double kFalseNorthingSouth = 10000000.0;

enum class Hemisphere { North, South };

struct GeodeticPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180)
  double alt = 0.0;  // meters, never projected
};

struct UtmPoint {
  double easting = 0.0;
  double northing = 0.0;
  int zone = 0;
  Hemisphere hemisphere = Hemisphere::North;
  double alt = 0.0;
};

/// Local properties of the projection at a point.
struct GridFactors {
  /// Bearing of grid north measured clockwise from true north, radians.
  double convergence = 0.0;
  /// Point scale factor (grid distance / ellipsoid distance).
  double scale = 1.0;
};

/// Standard zone containing `lon_deg` (no Norway/Svalbard exceptions).
int zone_for_longitude(double lon_deg);

double central_meridian(int zone);

/// Projects a geodetic point into UTM. With `forced_zone` the point is
/// projected into that zone; it must lie within 7 degrees of its meridian.
/// Throws Error{InvalidCoordinate} or Error{OutOfZone}.
UtmPoint wgs84_to_utm(const GeodeticPoint& p, std::optional<int> forced_zone = std::nullopt);

/// Same as wgs84_to_utm, additionally returning the grid convergence and
/// point scale at the point.
UtmPoint wgs84_to_utm(const GeodeticPoint& p, std::optional<int> forced_zone, GridFactors& factors);

/// Inverse projection. Throws Error{InvalidCoordinate}.
GeodeticPoint utm_to_wgs84(const UtmPoint& p);

}  // namespace gtforge::geodesy
