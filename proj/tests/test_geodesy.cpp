#include <doctest.h>

#include <cmath>
#include <random>

#include "gtforge/angle.hpp"
#include "gtforge/geodesy.hpp"
#include "support.hpp"

using namespace gtforge;
using namespace gtforge::geodesy;

namespace {

// Independent reference values (PROJ, EPSG:326xx / 327xx), 1e-6 m printed.
struct Pinned {
  double lat, lon;
  int zone;
  double easting, northing, convergence_deg, scale;
};
const Pinned kPinned[] = {
    {48.8, 2.13, 31, 436111.930760, 5405588.089744, -0.6546229907, 0.999650143882},
    {48.7712, 2.0842, 31, 432710.168457, 5402426.143210, -0.6887839736, 0.999655626346},
    {0.0, 3.0, 31, 500000.000000, 0.000000, 0.0, 0.999600000051},
    {-33.8688, 151.2093, 56, 334368.633648, 6250948.345385, 0.9981718559, 0.999938200544},
    {60.0, -3.0, 30, 500000.000000, 6651411.190363, 0.0, 0.999599999968},
    {45.0, 9.5, 32, 539407.649017, 4983071.987592, 0.3535579236, 0.999619095168},
    {-45.0, -70.0, 19, 421184.697083, 5016563.231651, 0.7071430456, 0.999676381334},
};

}  // namespace

TEST_CASE("zone numbering and central meridians") {
  CHECK(zone_for_longitude(2.13) == 31);
  CHECK(zone_for_longitude(-180.0) == 1);
  CHECK(zone_for_longitude(179.999) == 60);
  CHECK(zone_for_longitude(0.0) == 31);
  CHECK(central_meridian(31) == 3.0);
  CHECK(central_meridian(1) == -177.0);
}

TEST_CASE("equator on the central meridian maps to the false origin") {
  const UtmPoint u = wgs84_to_utm({0.0, 3.0, 12.5});
  CHECK(u.zone == 31);
  CHECK(u.hemisphere == Hemisphere::North);
  CHECK(std::abs(u.easting - 500000.0) < 1e-9);
  CHECK(std::abs(u.northing) < 1e-9);
  CHECK(u.alt == 12.5);

  const GeodeticPoint g = utm_to_wgs84({500000.0, 0.0, 31, Hemisphere::North, 0.0});
  CHECK(std::abs(g.lat) < 1e-12);
  CHECK(std::abs(g.lon - 3.0) < 1e-12);
}

TEST_CASE("pinned projection vectors") {
  for (const auto& p : kPinned) {
    CAPTURE(p.lat);
    CAPTURE(p.lon);
    GridFactors f;
    const UtmPoint u = wgs84_to_utm({p.lat, p.lon, 0.0}, std::nullopt, f);
    CHECK(u.zone == p.zone);
    CHECK(u.hemisphere == (p.lat < 0 ? Hemisphere::South : Hemisphere::North));
    CHECK(std::abs(u.easting - p.easting) < 1e-4);
    CHECK(std::abs(u.northing - p.northing) < 1e-4);
    CHECK(std::abs(f.convergence * kRadToDeg - p.convergence_deg) < 1e-8);
    CHECK(std::abs(f.scale - p.scale) < 1e-9);

    const GeodeticPoint g = utm_to_wgs84({p.easting, p.northing, p.zone, u.hemisphere, 0.0});
    CHECK(std::abs(g.lat - p.lat) < 1e-9);
    CHECK(std::abs(g.lon - p.lon) < 1e-9);
  }
}

TEST_CASE("round trip within +-3 degrees of a meridian") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> dlat(-80.0, 84.0), dlon(-3.0, 3.0);
  std::uniform_int_distribution<int> dzone(1, 60);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int zone = dzone(rng);
    double lon = central_meridian(zone) + dlon(rng);
    if (lon >= 180.0) lon -= 360.0;
    if (lon < -180.0) lon += 360.0;
    const GeodeticPoint p{dlat(rng), lon, 0.0};
    const GeodeticPoint q = utm_to_wgs84(wgs84_to_utm(p, zone));
    double dl = std::abs(q.lon - p.lon);
    dl = std::min(dl, 360.0 - dl);
    worst = std::max({worst, std::abs(q.lat - p.lat), dl});
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("round trip starting from grid coordinates") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> de(350000.0, 650000.0), dn(100000.0, 6000000.0);
  for (int i = 0; i < 2000; ++i) {
    const bool north = i % 2;
    const double n = dn(rng);
    const UtmPoint u{de(rng), north ? n : 1e7 - n, 17, north ? Hemisphere::North : Hemisphere::South, 0.0};
    const UtmPoint v = wgs84_to_utm(utm_to_wgs84(u), 17);
    CHECK(std::abs(v.easting - u.easting) <= 1e-6);
    CHECK(std::abs(v.northing - u.northing) <= 1e-6);
  }
}

TEST_CASE("northing increases with latitude") {
  double prev = -1.0;
  for (double lat = 0.0; lat <= 84.0; lat += 0.25) {
    const double n = wgs84_to_utm({lat, 4.7, 0.0}, 31).northing;
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("scale on the central meridian is 0.9996") {
  // East-west finite difference against the ellipsoid's parallel arc.
  const double lat = 48.8, h = 1e-5;
  const double a = kSemiMajorAxis, e2 = kFlattening * (2.0 - kFlattening);
  const double phi = lat * kDegToRad;
  const double nu = a / std::sqrt(1.0 - e2 * std::sin(phi) * std::sin(phi));
  const double ground = nu * std::cos(phi) * (2.0 * h * kDegToRad);
  const double grid = wgs84_to_utm({lat, 3.0 + h, 0.0}, 31).easting - wgs84_to_utm({lat, 3.0 - h, 0.0}, 31).easting;
  CHECK(std::abs(grid / ground - 0.9996) < 1e-6);
}

TEST_CASE("convergence matches the grid bearing of true north") {
  for (const auto& p : kPinned) {
    const double h = 1e-7;
    GridFactors f;
    wgs84_to_utm({p.lat, p.lon, 0.0}, p.zone, f);
    const UtmPoint s = wgs84_to_utm({p.lat, p.lon, 0.0}, p.zone);
    const UtmPoint n = wgs84_to_utm({p.lat + h, p.lon, 0.0}, p.zone);
    // Bearing of true north on the grid, clockwise from grid north, is -convergence.
    const double bearing = std::atan2(n.easting - s.easting, n.northing - s.northing);
    CHECK(std::abs(bearing + f.convergence) < 1e-7);
  }
}

TEST_CASE("forced zones and invalid input") {
  const UtmPoint u = wgs84_to_utm({48.8, 8.9, 0.0}, 31);  // 5.9 degrees from 31's meridian
  CHECK(u.zone == 31);
  CHECK(u.easting > 900000.0);
  CHECK(testing::error_code_of([] { wgs84_to_utm({48.8, 10.5, 0.0}, 31); }) == ErrorCode::OutOfZone);
  CHECK(testing::error_code_of([] { wgs84_to_utm({91.0, 0.0, 0.0}); }) == ErrorCode::InvalidCoordinate);
  CHECK(testing::error_code_of([] { wgs84_to_utm({0.0, 180.0, 0.0}); }) == ErrorCode::InvalidCoordinate);
  CHECK(testing::error_code_of([] { wgs84_to_utm({NAN, 0.0, 0.0}); }) == ErrorCode::InvalidCoordinate);
  CHECK(testing::error_code_of([] { wgs84_to_utm({0.0, 0.0, 0.0}, 61); }) == ErrorCode::InvalidCoordinate);
  CHECK(testing::error_code_of([] { utm_to_wgs84({500000.0, 0.0, 0, Hemisphere::North, 0.0}); }) ==
        ErrorCode::InvalidCoordinate);
}
