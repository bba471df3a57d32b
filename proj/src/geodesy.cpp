#include "gtforge/geodesy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"

namespace gtforge::geodesy {
namespace {

constexpr int kOrder = 6;

// Krueger series in the third flattening n, truncated at n^6.
struct TmSeries {
  double e = 0.0;          // first eccentricity
  double rectifying = 0.0; // A, the rectifying radius
  std::array<double, kOrder + 1> alpha{};
  std::array<double, kOrder + 1> beta{};
};

TmSeries make_series() {
  TmSeries s;
  const double f = kFlattening;
  const double n = f / (2.0 - f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  s.e = std::sqrt(f * (2.0 - f));
  s.rectifying = kSemiMajorAxis / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);

  s.alpha[1] = n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800;
  s.alpha[2] = 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360;
  s.alpha[3] = 61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440;
  s.alpha[4] = 49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600;
  s.alpha[5] = 34729 * n5 / 80640 - 3418889 * n6 / 1995840;
  s.alpha[6] = 212378941 * n6 / 319334400;

  s.beta[1] = n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 + 96199 * n6 / 604800;
  s.beta[2] = n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720;
  s.beta[3] = 17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720;
  s.beta[4] = 4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600;
  s.beta[5] = 4583 * n5 / 161280 - 108847 * n6 / 3991680;
  s.beta[6] = 20648693 * n6 / 638668800;
  return s;
}

const TmSeries& series() {
  static const TmSeries s = make_series();
  return s;
}

// Conformal latitude tangent tau' from geodetic tangent tau.
double conformal_tan(double tau, double e) {
  const double sig = std::sinh(e * std::atanh(e * tau / std::hypot(1.0, tau)));
  return tau * std::hypot(1.0, sig) - sig * std::hypot(1.0, tau);
}

// Inverts conformal_tan by Newton iteration.
double geodetic_tan(double taup, double e) {
  const double e2m = 1.0 - e * e;
  double tau = taup / e2m;
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon()) / 10.0;
  for (int i = 0; i < 10; ++i) {
    const double taupa = conformal_tan(tau, e);
    const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau) /
                        (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
    tau += dtau;
    if (std::abs(dtau) < tol * std::max(1.0, std::abs(tau)) && i > 0) break;
  }
  return tau;
}

void check_geodetic(const GeodeticPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || !std::isfinite(p.alt) || p.lat < -90.0 ||
      p.lat > 90.0 || p.lon < -180.0 || p.lon >= 180.0) {
    throw Error(ErrorCode::InvalidCoordinate,
                "geodetic point out of range: lat=" + std::to_string(p.lat) +
                    " lon=" + std::to_string(p.lon));
  }
}

}  // namespace

int zone_for_longitude(double lon_deg) {
  int zone = static_cast<int>(std::floor((lon_deg + 180.0) / 6.0)) + 1;
  if (zone > 60) zone = 60;
  if (zone < 1) zone = 1;
  return zone;
}

double central_meridian(int zone) { return -183.0 + 6.0 * zone; }

UtmPoint wgs84_to_utm(const GeodeticPoint& p, std::optional<int> forced_zone) {
  GridFactors unused;
  return wgs84_to_utm(p, forced_zone, unused);
}

UtmPoint wgs84_to_utm(const GeodeticPoint& p, std::optional<int> forced_zone, GridFactors& factors) {
  check_geodetic(p);
  const int zone = forced_zone.value_or(zone_for_longitude(p.lon));
  if (zone < 1 || zone > 60) {
    throw Error(ErrorCode::InvalidCoordinate, "zone " + std::to_string(zone) + " not in [1, 60]");
  }
  double dlon = p.lon - central_meridian(zone);
  dlon = std::remainder(dlon, 360.0);
  if (std::abs(dlon) >= 7.0) {
    throw Error(ErrorCode::OutOfZone, "longitude " + std::to_string(p.lon) + " is " +
                                          std::to_string(dlon) + " deg from zone " +
                                          std::to_string(zone) + " central meridian");
  }

  const TmSeries& s = series();
  const double phi = p.lat * kDegToRad;
  const double lam = dlon * kDegToRad;
  const double coslam = std::cos(lam), sinlam = std::sin(lam);

  // At the poles tan(phi) is infinite; clamp to the largest finite latitude.
  const double tau = std::abs(p.lat) == 90.0 ? std::copysign(1.0 / std::numeric_limits<double>::epsilon(), p.lat)
                                             : std::tan(phi);
  const double taup = conformal_tan(tau, s.e);
  const double xip = std::atan2(taup, coslam);
  const double etap = std::asinh(sinlam / std::hypot(taup, coslam));

  double xi = xip, eta = etap;
  double pp = 1.0, qp = 0.0;
  for (int j = 1; j <= kOrder; ++j) {
    const double c2 = 2.0 * j;
    xi += s.alpha[j] * std::sin(c2 * xip) * std::cosh(c2 * etap);
    eta += s.alpha[j] * std::cos(c2 * xip) * std::sinh(c2 * etap);
    pp += c2 * s.alpha[j] * std::cos(c2 * xip) * std::cosh(c2 * etap);
    qp += c2 * s.alpha[j] * std::sin(c2 * xip) * std::sinh(c2 * etap);
  }

  UtmPoint out;
  out.zone = zone;
  out.hemisphere = p.lat < 0.0 ? Hemisphere::South : Hemisphere::North;
  out.easting = kFalseEasting + kUtmScale * s.rectifying * eta;
  out.northing = kUtmScale * s.rectifying * xi;
  if (out.hemisphere == Hemisphere::South) out.northing += kFalseNorthingSouth;
  out.alt = p.alt;

  if (!(out.easting > 0.0 && out.easting < 1e6)) {
    throw Error(ErrorCode::OutOfZone, "easting " + std::to_string(out.easting) + " outside (0, 1e6)");
  }

  // Convergence and scale (Karney 2011, eqs. 23-28).
  const double gamma_sphere = std::atan2(taup * sinlam, std::hypot(1.0, taup) * coslam);
  factors.convergence = gamma_sphere + std::atan2(qp, pp);
  const double sinphi = std::sin(phi);
  const double k_sphere = std::sqrt(1.0 - s.e * s.e * sinphi * sinphi) * std::hypot(1.0, tau) /
                          std::hypot(taup, coslam);
  factors.scale = kUtmScale * s.rectifying / kSemiMajorAxis * std::hypot(pp, qp) * k_sphere;
  return out;
}

GeodeticPoint utm_to_wgs84(const UtmPoint& p) {
  if (p.zone < 1 || p.zone > 60 || !std::isfinite(p.easting) || !std::isfinite(p.northing) ||
      !(p.easting > 0.0 && p.easting < 1e6) || p.northing < 0.0 || p.northing > kFalseNorthingSouth) {
    throw Error(ErrorCode::InvalidCoordinate,
                "UTM point out of range: zone=" + std::to_string(p.zone) +
                    " E=" + std::to_string(p.easting) + " N=" + std::to_string(p.northing));
  }
  const TmSeries& s = series();
  double northing = p.northing;
  if (p.hemisphere == Hemisphere::South) northing -= kFalseNorthingSouth;
  const double xi = northing / (kUtmScale * s.rectifying);
  const double eta = (p.easting - kFalseEasting) / (kUtmScale * s.rectifying);

  double xip = xi, etap = eta;
  for (int j = 1; j <= kOrder; ++j) {
    const double c2 = 2.0 * j;
    xip -= s.beta[j] * std::sin(c2 * xi) * std::cosh(c2 * eta);
    etap -= s.beta[j] * std::cos(c2 * xi) * std::sinh(c2 * eta);
  }
  const double sinhetap = std::sinh(etap);
  const double cosxip = std::cos(xip);
  const double taup = std::sin(xip) / std::hypot(sinhetap, cosxip);
  const double lam = std::atan2(sinhetap, cosxip);
  const double tau = geodetic_tan(taup, s.e);

  GeodeticPoint out;
  out.lat = std::atan(tau) * kRadToDeg;
  double lon = central_meridian(p.zone) + lam * kRadToDeg;
  lon = std::remainder(lon, 360.0);
  if (lon >= 180.0) lon -= 360.0;
  out.lon = lon;
  out.alt = p.alt;
  return out;
}

}  // namespace gtforge::geodesy
