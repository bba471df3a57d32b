#include "gtforge/trajlog.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "gtforge/angle.hpp"
#include "gtforge/error.hpp"

namespace gtforge {
namespace {

constexpr const char* kGeodeticColumns[] = {"t", "lat", "lon", "alt", "ve", "vn", "heading_deg", "yaw_rate"};
constexpr const char* kUtmColumns[] = {"t", "x", "y", "alt", "vx", "vy", "psi_rad", "psi_dot"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void parse_fail(size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + msg);
}

double parse_number(std::string_view cell, size_t line_no, const char* column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    parse_fail(line_no, std::string("bad value '") + std::string(cell) + "' in column " + column);
  }
  return v;
}

std::optional<double> parse_optional(std::string_view cell, size_t line_no, const char* column) {
  if (cell.empty()) return std::nullopt;
  return parse_number(cell, line_no, column);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void validate_trajectory(const Trajectory& traj) {
  for (size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const bool finite = std::isfinite(s.t) && std::isfinite(s.x) && std::isfinite(s.y) &&
                        std::isfinite(s.vx) && std::isfinite(s.vy) && std::isfinite(s.psi) &&
                        (!s.psi_dot || std::isfinite(*s.psi_dot));
    if (!finite) {
      throw Error(ErrorCode::InvalidArgument, traj.vehicle_id + ": non-finite sample " + std::to_string(i));
    }
    if (!(s.psi > -kPi && s.psi <= kPi)) {
      throw Error(ErrorCode::InvalidArgument, traj.vehicle_id + ": yaw not wrapped at sample " + std::to_string(i));
    }
    if (i > 0 && !(s.t > traj.samples[i - 1].t)) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  traj.vehicle_id + ": t=" + format_double(s.t) + " at sample " + std::to_string(i) +
                      " does not follow t=" + format_double(traj.samples[i - 1].t));
    }
  }
}

std::optional<LogFrame> detect_frame(const std::string& header_line) {
  std::map<std::string_view, bool> seen;
  for (auto c : split_row(header_line)) seen[c] = true;
  if (seen.count("lat") && seen.count("lon")) return LogFrame::Geodetic;
  if (seen.count("x") && seen.count("y")) return LogFrame::Utm;
  return std::nullopt;
}

Trajectory parse_trajectory_log(std::istream& in, LogFrame frame, std::optional<int> forced_zone,
                                std::string vehicle_id) {
  Trajectory traj;
  traj.vehicle_id = std::move(vehicle_id);

  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(1, "missing header");
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_row(line);
  const auto& wanted = frame == LogFrame::Geodetic ? kGeodeticColumns : kUtmColumns;
  std::array<size_t, 8> col{};
  for (size_t k = 0; k < 8; ++k) {
    size_t found = header.size();
    for (size_t h = 0; h < header.size(); ++h) {
      if (header[h] == wanted[k]) found = h;
    }
    if (found == header.size()) {
      throw Error(ErrorCode::MissingColumn, std::string("column '") + wanted[k] + "' not in header");
    }
    col[k] = found;
  }

  std::optional<int> zone = forced_zone;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      parse_fail(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(cells.size()));
    }
    std::array<double, 7> v{};
    for (size_t k = 0; k < 7; ++k) v[k] = parse_number(cells[col[k]], line_no, wanted[k]);
    const auto rate = parse_optional(cells[col[7]], line_no, wanted[7]);

    TrajectorySample s;
    s.t = v[0];
    s.alt = v[3];
    if (frame == LogFrame::Utm) {
      s.x = v[1];
      s.y = v[2];
      s.vx = v[4];
      s.vy = v[5];
      s.psi = wrap_angle(v[6]);
      s.psi_dot = rate;
    } else {
      geodesy::GridFactors grid;
      geodesy::UtmPoint utm;
      try {
        utm = geodesy::wgs84_to_utm({v[1], v[2], v[3]}, zone, grid);
      } catch (const Error& e) {
        parse_fail(line_no, e.detail());
      }
      if (!zone) zone = utm.zone;
      const UtmZone z{utm.zone, utm.hemisphere};
      if (traj.zone && *traj.zone != z) {
        parse_fail(line_no, "log crosses the equator; split it or supply UTM coordinates");
      }
      traj.zone = z;
      s.x = utm.easting;
      s.y = utm.northing;
      const double cg = std::cos(grid.convergence), sg = std::sin(grid.convergence);
      s.vx = grid.scale * (v[4] * cg - v[5] * sg);
      s.vy = grid.scale * (v[4] * sg + v[5] * cg);
      s.psi = wrap_angle(kPi / 2.0 - v[6] * kDegToRad + grid.convergence);
      s.psi_dot = rate;
    }
    if (!traj.samples.empty() && !(s.t > traj.samples.back().t)) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  "line " + std::to_string(line_no) + ": t=" + format_double(s.t) +
                      " does not follow t=" + format_double(traj.samples.back().t));
    }
    traj.samples.push_back(s);
  }
  return traj;
}

Trajectory read_trajectory_file(const std::filesystem::path& path, std::optional<LogFrame> frame,
                                std::optional<int> forced_zone) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  if (!frame) {
    std::string header;
    std::getline(in, header);
    frame = detect_frame(header);
    if (!frame) throw Error(ErrorCode::MissingColumn, path.string() + ": header matches neither schema");
    in.clear();
    in.seekg(0);
  }
  try {
    return parse_trajectory_log(in, *frame, forced_zone, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void write_trajectory_log(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,alt,vx,vy,psi_rad,psi_dot\n";
  for (const auto& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << format_double(s.alt) << ',' << format_double(s.vx) << ',' << format_double(s.vy) << ','
        << format_double(s.psi) << ',';
    if (s.psi_dot) out << format_double(*s.psi_dot);
    out << '\n';
  }
}

void write_trajectory_file(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  write_trajectory_log(out, traj);
}

void validate_clock_model(const ClockModel& clock) {
  if (!std::isfinite(clock.offset) || std::abs(clock.offset) >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "clock offset must satisfy |offset| < 1 s");
  }
  if (!std::isfinite(clock.drift) || std::abs(clock.drift) >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "clock drift must satisfy |drift| < 1");
  }
}

Trajectory apply_clock_model(const Trajectory& traj, const ClockModel& clock) {
  validate_clock_model(clock);
  Trajectory out = traj;
  if (out.samples.empty()) return out;
  const double t0 = traj.samples.front().t;
  for (auto& s : out.samples) s.t = s.t - clock.offset - clock.drift * (s.t - t0);
  return out;
}

ClockModel inverse_clock_model(const ClockModel& clock) {
  validate_clock_model(clock);
  return {-clock.offset, -clock.drift / (1.0 - clock.drift)};
}

}  // namespace gtforge
