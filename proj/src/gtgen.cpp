#include "gtforge/gtgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gtforge/error.hpp"
#include "gtforge/parallel.hpp"
#include "gtforge/resample.hpp"

namespace gtforge {
namespace {

std::string fmt9(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_cov(std::ostream& out, const uncert::CovBound2& c) {
  out << "{\"a\":" << fmt9(c.a) << ",\"b\":" << fmt9(c.b) << ",\"c\":" << fmt9(c.c) << '}';
}

}  // namespace

void validate(const VehicleGeometry& geom) {
  if (!(geom.length > 0.0) || !(geom.width > 0.0) || !std::isfinite(geom.length) || !std::isfinite(geom.width) ||
      !std::isfinite(geom.ref_to_center.x) || !std::isfinite(geom.ref_to_center.y)) {
    throw Error(ErrorCode::InvalidArgument, "vehicle length and width must be finite and > 0");
  }
}

BoundingBox bbox_footprint(const RelativeState& rel, const VehicleGeometry& geom) {
  const double hl = 0.5 * geom.length, hw = 0.5 * geom.width;
  const std::array<Vec2, 4> local{{{hl, hw}, {hl, -hw}, {-hl, -hw}, {-hl, hw}}};
  const double c = std::cos(rel.psi), s = std::sin(rel.psi);
  BoundingBox box;
  for (size_t i = 0; i < 4; ++i) {
    const double px = geom.ref_to_center.x + local[i].x;
    const double py = geom.ref_to_center.y + local[i].y;
    box[i] = {rel.x + c * px - s * py, rel.y + s * px + c * py};
  }
  return box;
}

std::vector<GroundTruthRecord> generate_records(const Trajectory& ego, std::span<const Trajectory> targets,
                                                std::span<const double> stamps, const GenerateOptions& options) {
  auto clock_for = [&](const std::string& id) {
    auto it = options.clocks.find(id);
    return it == options.clocks.end() ? ClockModel{} : it->second;
  };
  for (const auto& [id, geom] : options.geometries) validate(geom);
  validate(options.default_geometry);

  // Order targets by id so that records come out sorted by (t, target_id).
  std::vector<const Trajectory*> order;
  for (const auto& t : targets) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const Trajectory* a, const Trajectory* b) { return a->vehicle_id < b->vehicle_id; });
  for (size_t i = 1; i < order.size(); ++i) {
    if (order[i]->vehicle_id == order[i - 1]->vehicle_id) {
      throw Error(ErrorCode::InvalidArgument, "duplicate target id '" + order[i]->vehicle_id + "'");
    }
  }

  const TrajectoryInterpolant ego_itp(apply_clock_model(ego, clock_for(ego.vehicle_id)));
  std::vector<TrajectoryInterpolant> tgt_itp;
  tgt_itp.reserve(order.size());
  for (const Trajectory* t : order) tgt_itp.emplace_back(apply_clock_model(*t, clock_for(t->vehicle_id)));

  for (const auto& itp : tgt_itp) {
    if (ego_itp.zone() && itp.zone() && *ego_itp.zone() != *itp.zone()) {
      throw Error(ErrorCode::ZoneMismatch, itp.vehicle_id() + " is in zone " + std::to_string(itp.zone()->zone) +
                                               ", ego in zone " + std::to_string(ego_itp.zone()->zone));
    }
  }

  std::vector<double> sorted(stamps.begin(), stamps.end());
  std::stable_sort(sorted.begin(), sorted.end());
  std::string offending;
  size_t n_bad = 0;
  for (double t : sorted) {
    bool ok = std::isfinite(t) && ego_itp.contains(t);
    for (const auto& itp : tgt_itp) ok = ok && itp.contains(t);
    if (!ok) {
      if (n_bad < 10) offending += (n_bad ? ", " : "") + fmt9(t);
      ++n_bad;
    }
  }
  if (n_bad > 0) {
    if (n_bad > 10) offending += ", ... (" + std::to_string(n_bad) + " total)";
    throw Error(ErrorCode::OutOfSupport, "stamps outside the common support: " + offending);
  }

  std::optional<uncert::CovBound2> pos_bound, vel_bound;
  std::optional<double> yaw_var;
  if (options.noise) {
    uncert::validate(*options.noise);
    uncert::validate(options.envelope);
    pos_bound = uncert::position_bound(*options.noise, options.envelope, options.convention);
    vel_bound = uncert::velocity_bound(*options.noise, options.envelope, options.convention);
    yaw_var = uncert::yaw_variance(*options.noise);
  }

  const size_t n_tgt = tgt_itp.size();
  std::vector<GroundTruthRecord> records(sorted.size() * n_tgt);
  parallel_for(sorted.size(), [&](size_t k) {
    const double t = sorted[k];
    const TrajectorySample e = ego_itp.state_at(t);
    for (size_t j = 0; j < n_tgt; ++j) {
      const auto& itp = tgt_itp[j];
      GroundTruthRecord& r = records[k * n_tgt + j];
      r.t = t;
      r.target_id = itp.vehicle_id();
      r.rel = relative_state(e, itp.state_at(t));
      auto g = options.geometries.find(r.target_id);
      r.bbox = bbox_footprint(r.rel, g == options.geometries.end() ? options.default_geometry : g->second);
      r.pos_bound = pos_bound;
      r.vel_bound = vel_bound;
      r.yaw_var = yaw_var;
    }
  });
  return records;
}

std::vector<double> read_stamps(std::istream& in) {
  std::vector<double> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    size_t e = line.find_last_not_of(" \t\r");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e + 1, v);
    if (ec != std::errc() || ptr != line.data() + e + 1 || !std::isfinite(v)) {
      throw Error(ErrorCode::ParseError, "stamp file line " + std::to_string(line_no) + ": '" + line + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> stamps_at_rate(double t_begin, double t_end, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::InvalidArgument, "stamp rate must be > 0");
  std::vector<double> out;
  for (size_t k = 0;; ++k) {
    const double t = t_begin + static_cast<double>(k) / rate;
    if (t > t_end) break;
    out.push_back(t);
  }
  return out;
}

void write_records_jsonl(std::ostream& out, std::span<const GroundTruthRecord> records) {
  for (const auto& r : records) {
    out << "{\"t\":" << fmt9(r.t) << ",\"target_id\":" << nlohmann::json(r.target_id).dump()
        << ",\"x\":" << fmt9(r.rel.x) << ",\"y\":" << fmt9(r.rel.y) << ",\"vx\":" << fmt9(r.rel.vx)
        << ",\"vy\":" << fmt9(r.rel.vy) << ",\"psi\":" << fmt9(r.rel.psi) << ",\"bbox\":[";
    for (size_t i = 0; i < 4; ++i) {
      out << (i ? "," : "") << '[' << fmt9(r.bbox[i].x) << ',' << fmt9(r.bbox[i].y) << ']';
    }
    out << ']';
    if (r.pos_bound) {
      out << ",\"pos_bound\":";
      write_cov(out, *r.pos_bound);
    }
    if (r.vel_bound) {
      out << ",\"vel_bound\":";
      write_cov(out, *r.vel_bound);
    }
    if (r.yaw_var) out << ",\"yaw_var\":" << fmt9(*r.yaw_var);
    out << "}\n";
  }
}

std::vector<GroundTruthRecord> read_records_jsonl(std::istream& in) {
  std::vector<GroundTruthRecord> out;
  std::string line;
  size_t line_no = 0;
  auto cov = [](const nlohmann::json& j) {
    return uncert::CovBound2{j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>()};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      GroundTruthRecord r;
      r.t = j.at("t").get<double>();
      r.target_id = j.at("target_id").get<std::string>();
      r.rel = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("vx").get<double>(),
               j.at("vy").get<double>(), j.at("psi").get<double>()};
      const auto& box = j.at("bbox");
      if (box.size() != 4) throw Error(ErrorCode::ParseError, "bbox must have 4 corners");
      for (size_t i = 0; i < 4; ++i) r.bbox[i] = {box.at(i).at(0).get<double>(), box.at(i).at(1).get<double>()};
      if (j.contains("pos_bound")) r.pos_bound = cov(j["pos_bound"]);
      if (j.contains("vel_bound")) r.vel_bound = cov(j["vel_bound"]);
      if (j.contains("yaw_var")) r.yaw_var = j["yaw_var"].get<double>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "record line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "record line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace gtforge
