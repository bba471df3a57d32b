#include "gtforge/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "gtforge/error.hpp"

namespace gtforge::config {
namespace {

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, const char* what, std::initializer_list<const char*> allowed) {
  require_object(j, what);
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": unknown field '" + key + "'");
  }
}

double get_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

uncert::NoiseModel noise_from_json(const Json& j) {
  reject_unknown(j, "noise model",
                 {"preset", "sigma_pos", "sigma_vel", "sigma_psi", "sigma_psi_dot", "clock_offset_std"});
  uncert::NoiseModel nm;
  nm.sigma_psi_dot = uncert::kDefaultSigmaPsiDot;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "analysis") {
      nm = uncert::NoiseModel::analysis_defaults();
    } else if (preset == "nominal") {
      nm = uncert::NoiseModel::preset_nominal();
    } else if (preset == "outage_60s") {
      nm = uncert::NoiseModel::preset_outage_60s();
    } else if (preset == "outage_300s") {
      nm = uncert::NoiseModel::preset_outage_300s();
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown noise preset '" + preset + "'");
    }
  }
  nm.sigma_pos = get_number(j, "sigma_pos", nm.sigma_pos);
  nm.sigma_vel = get_number(j, "sigma_vel", nm.sigma_vel);
  nm.sigma_psi = get_number(j, "sigma_psi", nm.sigma_psi);
  nm.sigma_psi_dot = get_number(j, "sigma_psi_dot", nm.sigma_psi_dot);
  nm.clock_offset_std = get_number(j, "clock_offset_std", nm.clock_offset_std);
  uncert::validate(nm);
  return nm;
}

Json to_json(const uncert::NoiseModel& nm) {
  return Json{{"sigma_pos", nm.sigma_pos},
              {"sigma_vel", nm.sigma_vel},
              {"sigma_psi", nm.sigma_psi},
              {"sigma_psi_dot", nm.sigma_psi_dot},
              {"clock_offset_std", nm.clock_offset_std}};
}

uncert::ScenarioEnvelope envelope_from_json(const Json& j) {
  reject_unknown(j, "envelope", {"d_max", "v_max", "psi_dot_max"});
  uncert::ScenarioEnvelope env;
  env.d_max = get_number(j, "d_max", env.d_max);
  env.v_max = get_number(j, "v_max", env.v_max);
  env.psi_dot_max = get_number(j, "psi_dot_max", env.psi_dot_max);
  uncert::validate(env);
  return env;
}

Json to_json(const uncert::ScenarioEnvelope& env) {
  return Json{{"d_max", env.d_max}, {"v_max", env.v_max}, {"psi_dot_max", env.psi_dot_max}};
}

ClockModel clock_from_json(const Json& j) {
  reject_unknown(j, "clock model", {"offset", "drift"});
  ClockModel c{get_number(j, "offset", 0.0), get_number(j, "drift", 0.0)};
  validate_clock_model(c);
  return c;
}

VehicleGeometry geometry_from_json(const Json& j) {
  reject_unknown(j, "geometry", {"length", "width", "ref_to_center"});
  VehicleGeometry g;
  g.length = get_number(j, "length", g.length);
  g.width = get_number(j, "width", g.width);
  if (j.contains("ref_to_center")) {
    const Json& r = j.at("ref_to_center");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw Error(ErrorCode::InvalidArgument, "ref_to_center must be [dx, dy]");
    }
    g.ref_to_center = {r[0].get<double>(), r[1].get<double>()};
  }
  validate(g);
  return g;
}

GeometrySet geometry_set_from_json(const Json& j) {
  require_object(j, "geometry");
  GeometrySet set;
  if (!j.contains("default") && !j.contains("targets")) {
    set.default_geometry = geometry_from_json(j);
    return set;
  }
  reject_unknown(j, "geometry", {"default", "targets"});
  if (j.contains("default")) set.default_geometry = geometry_from_json(j.at("default"));
  if (j.contains("targets")) {
    require_object(j.at("targets"), "geometry.targets");
    for (const auto& [id, g] : j.at("targets").items()) set.per_target[id] = geometry_from_json(g);
  }
  return set;
}

std::map<std::string, ClockModel> clock_map_from_json(const Json& j) {
  require_object(j, "clock map");
  std::map<std::string, ClockModel> out;
  for (const auto& [id, c] : j.items()) out[id] = clock_from_json(c);
  return out;
}

synth::Scenario scenario_from_json(const Json& j) {
  reject_unknown(j, "scenario", {"track", "vehicles", "noise", "seed"});
  synth::Scenario sc;
  if (j.contains("track")) {
    const Json& t = j.at("track");
    reject_unknown(t, "track", {"straight_len", "curve_radius", "origin_x", "origin_y", "heading"});
    sc.track.straight_len = get_number(t, "straight_len", sc.track.straight_len);
    sc.track.curve_radius = get_number(t, "curve_radius", sc.track.curve_radius);
    sc.track.origin_x = get_number(t, "origin_x", sc.track.origin_x);
    sc.track.origin_y = get_number(t, "origin_y", sc.track.origin_y);
    sc.track.heading = get_number(t, "heading", sc.track.heading);
  }
  synth::validate(sc.track);
  sc.noise = j.contains("noise") ? noise_from_json(j.at("noise")) : uncert::NoiseModel{};
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, "seed must be a non-negative integer");
    sc.seed = j.at("seed").get<uint64_t>();
  }
  if (!j.contains("vehicles") || !j.at("vehicles").is_array() || j.at("vehicles").empty()) {
    throw Error(ErrorCode::InvalidArgument, "scenario needs a non-empty 'vehicles' array");
  }
  std::set<std::string> ids;
  for (const Json& v : j.at("vehicles")) {
    reject_unknown(v, "vehicle", {"id", "run", "clock"});
    synth::ScenarioVehicle sv;
    if (!v.contains("id") || !v.at("id").is_string()) throw Error(ErrorCode::InvalidArgument, "vehicle needs a string 'id'");
    sv.run.vehicle_id = v.at("id").get<std::string>();
    if (!ids.insert(sv.run.vehicle_id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate vehicle id '" + sv.run.vehicle_id + "'");
    }
    if (v.contains("run")) {
      const Json& r = v.at("run");
      reject_unknown(r, "run",
                     {"initial_speed", "changes", "start_offset", "lateral_offset", "t0", "duration", "rate"});
      sv.run.initial_speed = get_number(r, "initial_speed", sv.run.initial_speed);
      sv.run.start_offset = get_number(r, "start_offset", sv.run.start_offset);
      sv.run.lateral_offset = get_number(r, "lateral_offset", sv.run.lateral_offset);
      sv.run.t0 = get_number(r, "t0", sv.run.t0);
      sv.run.duration = get_number(r, "duration", sv.run.duration);
      sv.run.rate = get_number(r, "rate", sv.run.rate);
      if (r.contains("changes")) {
        if (!r.at("changes").is_array()) throw Error(ErrorCode::InvalidArgument, "run.changes must be an array");
        for (const Json& c : r.at("changes")) {
          reject_unknown(c, "speed change", {"t", "speed", "ramp"});
          sv.run.changes.push_back({get_number(c, "t", 0.0), get_number(c, "speed", 0.0), get_number(c, "ramp", 0.0)});
        }
      }
    }
    synth::validate(sv.run);
    if (v.contains("clock")) sv.clock = clock_from_json(v.at("clock"));
    sc.vehicles.push_back(std::move(sv));
  }
  return sc;
}

}  // namespace gtforge::config
