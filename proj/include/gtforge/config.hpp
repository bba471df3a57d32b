#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "gtforge/gtgen.hpp"
#include "gtforge/synth.hpp"
#include "gtforge/uncert.hpp"

// JSON documents for configuration. Field names match the C++ members and
// use SI units. Unknown keys are rejected with Error{InvalidArgument}.
namespace gtforge::config {

using Json = nlohmann::json;

Json load_json_file(const std::filesystem::path& path);

/// Optional "preset" ("analysis", "nominal", "outage_60s", "outage_300s")
/// seeds the values; explicit fields override it. sigma_psi_dot falls back
/// to uncert::kDefaultSigmaPsiDot when neither gives it.
uncert::NoiseModel noise_from_json(const Json& j);
Json to_json(const uncert::NoiseModel& nm);

/// Missing fields keep the analysis envelope (50 m, 36 m/s, 1 rad/s).
uncert::ScenarioEnvelope envelope_from_json(const Json& j);
Json to_json(const uncert::ScenarioEnvelope& env);

ClockModel clock_from_json(const Json& j);

VehicleGeometry geometry_from_json(const Json& j);

struct GeometrySet {
  VehicleGeometry default_geometry;
  std::map<std::string, VehicleGeometry> per_target;
};

/// Either one geometry object, or {"default": {...}, "targets": {id: {...}}}.
GeometrySet geometry_set_from_json(const Json& j);

/// {vehicle_id: {"offset": s, "drift": s/s}, ...}
std::map<std::string, ClockModel> clock_map_from_json(const Json& j);

synth::Scenario scenario_from_json(const Json& j);

}  // namespace gtforge::config
