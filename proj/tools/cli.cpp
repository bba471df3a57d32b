#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtforge/calib.hpp"
#include "gtforge/certify.hpp"
#include "gtforge/config.hpp"
#include "gtforge/error.hpp"
#include "gtforge/gtgen.hpp"
#include "gtforge/synth.hpp"
#include "gtforge/trajlog.hpp"
#include "gtforge/uncert.hpp"

namespace gtforge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

json cov_json(const uncert::CovBound2& c) {
  return {{"a", c.a}, {"b", c.b}, {"c", c.c}, {"rms", uncert::rms_from_cov(c)}};
}

// Input problems are usage errors; everything else means the data failed a
// check.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidCoordinate:
    case ErrorCode::ParseError:
    case ErrorCode::MissingColumn:
      return kExitUsage;
    default:
      return kExitValidation;
  }
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out_dir;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const synth::Scenario sc = config::scenario_from_json(config::load_json_file(a.config));
  const auto vehicles = synth::simulate_scenario(sc);
  fs::create_directories(a.out_dir);
  json files = json::array();
  for (const auto& v : vehicles) {
    const fs::path clean = fs::path(a.out_dir) / (v.clean.vehicle_id + "_clean.csv");
    const fs::path noisy = fs::path(a.out_dir) / (v.clean.vehicle_id + ".csv");
    write_trajectory_file(clean, v.clean);
    write_trajectory_file(noisy, v.corrupted);
    files.push_back({{"vehicle_id", v.clean.vehicle_id},
                     {"clean", clean.string()},
                     {"corrupted", noisy.string()},
                     {"samples", v.clean.samples.size()}});
  }
  out << json{{"vehicles", files}}.dump(2) << '\n';
  return kExitOk;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string ego;
  std::vector<std::string> targets;
  std::string stamps;
  double rate = 0.0;
  std::string geometry;
  std::string noise;
  std::string envelope;
  std::string clocks;
  std::string convention = "half";
  int zone = 0;
  std::string out;
};

uncert::ExponentConvention parse_convention(const std::string& s) {
  return s == "printed" ? uncert::ExponentConvention::Printed : uncert::ExponentConvention::HalfExponent;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const std::optional<int> zone = a.zone > 0 ? std::optional<int>(a.zone) : std::nullopt;
  const Trajectory ego = read_trajectory_file(a.ego, std::nullopt, zone);
  std::vector<Trajectory> targets;
  for (const auto& p : a.targets) targets.push_back(read_trajectory_file(p, std::nullopt, zone));

  GenerateOptions opt;
  const config::GeometrySet geoms = config::geometry_set_from_json(config::load_json_file(a.geometry));
  opt.default_geometry = geoms.default_geometry;
  opt.geometries = geoms.per_target;
  if (!a.clocks.empty()) opt.clocks = config::clock_map_from_json(config::load_json_file(a.clocks));
  if (!a.noise.empty()) opt.noise = config::noise_from_json(config::load_json_file(a.noise));
  if (!a.envelope.empty()) opt.envelope = config::envelope_from_json(config::load_json_file(a.envelope));
  opt.convention = parse_convention(a.convention);

  std::vector<double> stamps;
  if (!a.stamps.empty()) {
    std::ifstream in(a.stamps);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + a.stamps);
    try {
      stamps = read_stamps(in);
    } catch (const Error& e) {
      throw Error(e.code(), a.stamps + ": " + e.detail());
    }
  } else {
    // Common support of all clock-corrected logs.
    auto clock_for = [&](const std::string& id) {
      auto it = opt.clocks.find(id);
      return it == opt.clocks.end() ? ClockModel{} : it->second;
    };
    double begin = -INFINITY, end = INFINITY;
    auto widen = [&](const Trajectory& t) {
      if (t.samples.empty()) return;
      const Trajectory c = apply_clock_model(t, clock_for(t.vehicle_id));
      begin = std::max(begin, c.t_first());
      end = std::min(end, c.t_last());
    };
    widen(ego);
    for (const auto& t : targets) widen(t);
    if (!(end >= begin)) throw Error(ErrorCode::OutOfSupport, "the logs do not overlap in time");
    stamps = stamps_at_rate(begin, end, a.rate);
  }

  const auto records = generate_records(ego, targets, stamps, opt);
  std::ofstream file = open_output(a.out);
  write_records_jsonl(file, records);
  if (!file) throw Error(ErrorCode::InvalidArgument, "failed writing " + a.out);
  out << json{{"records", records.size()}, {"stamps", stamps.size()}, {"targets", targets.size()}, {"out", a.out}}
             .dump(2)
      << '\n';
  return kExitOk;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  std::string noise;
  std::string envelope;
  std::string convention = "half";
  std::string cross_term = "printed";
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const uncert::NoiseModel nm = config::noise_from_json(config::load_json_file(a.noise));
  const uncert::ScenarioEnvelope env = config::envelope_from_json(config::load_json_file(a.envelope));
  const auto conv = parse_convention(a.convention);
  const auto cross =
      a.cross_term == "cauchy-schwarz" ? uncert::CrossTermConvention::CauchySchwarz : uncert::CrossTermConvention::Printed;
  const double yaw = uncert::yaw_variance(nm);
  json doc;
  doc["convention"] = a.convention;
  doc["cross_term"] = a.cross_term;
  doc["noise"] = config::to_json(nm);
  doc["envelope"] = config::to_json(env);
  doc["position"] = cov_json(uncert::position_bound(nm, env, conv));
  doc["velocity"] = cov_json(uncert::velocity_bound(nm, env, conv, cross));
  doc["yaw"] = {{"var", yaw}, {"rms", std::sqrt(yaw)}};
  out << doc.dump(2) << '\n';
  return kExitOk;
}

// ---- validate -------------------------------------------------------------

struct ValidateArgs {
  std::string noise;
  std::string envelope;
  size_t samples = 1000000;
  uint64_t seed = 42;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const uncert::NoiseModel nm = config::noise_from_json(config::load_json_file(a.noise));
  const uncert::ScenarioEnvelope env =
      a.envelope.empty() ? uncert::ScenarioEnvelope{} : config::envelope_from_json(config::load_json_file(a.envelope));
  if (a.samples < uncert::kMinMonteCarloSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "--samples must be at least " + std::to_string(uncert::kMinMonteCarloSamples));
  }
  uncert::CertificationOptions opt;
  opt.samples = a.samples;
  opt.seed = a.seed;
  const auto report = uncert::run_certification(nm, env, opt);
  out << uncert::to_json(report).dump(2) << '\n';
  return report.pass() ? kExitOk : kExitValidation;
}

// ---- calibrate ------------------------------------------------------------

struct CalibrateArgs {
  std::string stream_a;
  std::string stream_b;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const auto pa = calib::read_pose_stream_file(a.stream_a);
  const auto pb = calib::read_pose_stream_file(a.stream_b);
  if (pa.size() < 2 || pb.size() < 2) throw Error(ErrorCode::TooFewPoses, "each stream needs at least 2 poses");

  // Stream a is resampled at the stamps of b that it covers.
  std::vector<calib::Pose2D> b_used;
  std::vector<double> stamps;
  for (const auto& p : pb) {
    if (p.t >= pa.front().t && p.t <= pa.back().t) {
      b_used.push_back(p);
      stamps.push_back(p.t);
    }
  }
  if (b_used.size() < 2) throw Error(ErrorCode::OutOfSupport, "the pose streams do not overlap in time");
  const auto a_res = calib::resample_poses(pa, stamps);
  const auto ma = calib::relative_motions(a_res);
  const auto mb = calib::relative_motions(b_used);
  const auto result = calib::solve_hand_eye(ma, mb);

  json doc;
  doc["transform"] = {{"theta", result.transform.theta}, {"tx", result.transform.tx}, {"ty", result.transform.ty}};
  doc["residual"] = {{"count", result.residual.count},
                     {"rotation_rms", result.residual.rotation_rms},
                     {"rotation_max", result.residual.rotation_max},
                     {"translation_rms", result.residual.translation_rms},
                     {"translation_max", result.residual.translation_max}};
  doc["poses_used"] = b_used.size();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

// ---- export-plot ----------------------------------------------------------

struct ExportArgs {
  std::string gt;
  std::string channel;
  std::string out;
  std::string target;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
  std::ifstream in(a.gt);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + a.gt);
  std::vector<GroundTruthRecord> records;
  try {
    records = read_records_jsonl(in);
  } catch (const Error& e) {
    throw Error(e.code(), a.gt + ": " + e.detail());
  }
  std::string target = a.target;
  if (target.empty()) {
    for (const auto& r : records) {
      if (target.empty()) target = r.target_id;
      if (r.target_id != target) {
        throw Error(ErrorCode::InvalidArgument, a.gt + " holds several targets; choose one with --target");
      }
    }
  }
  const std::map<std::string, double RelativeState::*> channels{{"x", &RelativeState::x},
                                                                 {"y", &RelativeState::y},
                                                                 {"vx", &RelativeState::vx},
                                                                 {"vy", &RelativeState::vy},
                                                                 {"psi", &RelativeState::psi}};
  const auto field = channels.at(a.channel);
  std::ofstream file = open_output(a.out);
  file << "t," << a.channel << '\n';
  size_t rows = 0;
  char buf[64];
  for (const auto& r : records) {
    if (r.target_id != target) continue;
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", r.t, r.rel.*field);
    file << buf;
    ++rows;
  }
  out << json{{"rows", rows}, {"target_id", target}, {"channel", a.channel}, {"out", a.out}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground-truth kinematics from multi-vehicle positioning logs"};
  app.name(args.empty() ? "gtforge" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  std::function<int()> action;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate a scenario on a stadium track; writes <id>_clean.csv and <id>.csv "
                                           "(UTM schema: s, m, m/s, rad, rad/s) per vehicle");
  s->add_option("--config", sim.config, "Scenario JSON: track (m, rad), vehicles with run (m/s, m, s, Hz) and clock "
                                        "(s, s/s), noise (m, m/s, rad, rad/s, s), seed")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  s->callback([&] { action = [&] { return cmd_simulate(sim, out); }; });

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate ground-truth records (JSON lines) of every target in the ego "
                                           "frame: x, y in m; vx, vy in m/s; psi in rad; bbox corners in m");
  g->add_option("--ego", gen.ego, "Ego trajectory CSV (geodetic or UTM schema)")->required()->check(CLI::ExistingFile);
  g->add_option("--target", gen.targets, "Target trajectory CSV; repeat for several targets")
      ->required()
      ->check(CLI::ExistingFile);
  auto* stamps_opt = g->add_option("--stamps", gen.stamps, "Stamp file, one time in s per line")->check(CLI::ExistingFile);
  auto* rate_opt = g->add_option("--rate", gen.rate, "Stamp rate in Hz over the common support of all logs")
                       ->check(CLI::PositiveNumber);
  stamps_opt->excludes(rate_opt);
  g->add_option("--geometry", gen.geometry,
                "Geometry JSON: {length, width, ref_to_center: [dx, dy]} in m, or {default, targets: {id: ...}}")
      ->required()
      ->check(CLI::ExistingFile);
  g->add_option("--noise", gen.noise, "Noise JSON; attaches position (m^2), velocity (m^2/s^2) and yaw (rad^2) bounds")
      ->check(CLI::ExistingFile);
  g->add_option("--envelope", gen.envelope, "Envelope JSON: d_max m, v_max m/s, psi_dot_max rad/s (default 50, 36, 1)")
      ->check(CLI::ExistingFile);
  g->add_option("--clock", gen.clocks, "Clock JSON: {vehicle_id: {offset: s, drift: s/s}}")->check(CLI::ExistingFile);
  g->add_option("--convention", gen.convention, "Bound exponent convention")
      ->check(CLI::IsMember({"half", "printed"}))
      ->capture_default_str();
  g->add_option("--zone", gen.zone, "Force this UTM zone for geodetic logs (1-60)")->check(CLI::Range(1, 60));
  g->add_option("--out", gen.out, "Output JSONL path")->required();
  g->callback([&] {
    if (gen.stamps.empty() && !(gen.rate > 0.0)) throw CLI::RequiredError("--stamps or --rate");
    action = [&] { return cmd_generate(gen, out); };
  });

  BoundsArgs bnd;
  auto* b = app.add_subcommand("bounds", "Print the dataset-level bounds as JSON: position a, b, c (m^2) and rms (m), "
                                         "velocity (m^2/s^2, m/s), yaw variance (rad^2) and rms (rad)");
  b->add_option("--noise", bnd.noise, "Noise JSON: sigma_pos m, sigma_vel m/s, sigma_psi rad, sigma_psi_dot rad/s, "
                                      "clock_offset_std s; or a preset")
      ->required()
      ->check(CLI::ExistingFile);
  b->add_option("--envelope", bnd.envelope, "Envelope JSON: d_max m, v_max m/s, psi_dot_max rad/s")
      ->required()
      ->check(CLI::ExistingFile);
  b->add_option("--convention", bnd.convention, "Exponent of the rotation term in the a, b bounds")
      ->check(CLI::IsMember({"half", "printed"}))
      ->capture_default_str();
  b->add_option("--cross-term", bnd.cross_term, "Velocity off-diagonal bound: a*b as typeset, or sqrt(a*b)")
      ->check(CLI::IsMember({"printed", "cauchy-schwarz"}))
      ->capture_default_str();
  b->callback([&] { action = [&] { return cmd_bounds(bnd, out); }; });

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Monte-Carlo certification of the trig moments, exact covariances and "
                                           "bounds; prints a JSON report, exit 1 if any check fails");
  v->add_option("--noise", val.noise, "Noise JSON (m, m/s, rad, rad/s, s)")->required()->check(CLI::ExistingFile);
  v->add_option("--envelope", val.envelope, "Envelope JSON (m, m/s, rad/s); default 50, 36, 1")
      ->check(CLI::ExistingFile);
  v->add_option("--samples", val.samples, "Monte-Carlo samples per check (>= 10000)")->capture_default_str();
  v->add_option("--seed", val.seed, "Random seed")->capture_default_str();
  v->callback([&] { action = [&] { return cmd_validate(val, out); }; });

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Planar hand-eye calibration between two pose streams; prints the pose of "
                                            "stream b's frame in stream a's frame (theta rad, tx/ty m) and residuals");
  c->add_option("--stream-a", cal.stream_a, "Pose CSV t,x,y,theta (s, m, m, rad); resampled at b's stamps")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--stream-b", cal.stream_b, "Pose CSV t,x,y,theta (s, m, m, rad)")->required()->check(CLI::ExistingFile);
  c->callback([&] { action = [&] { return cmd_calibrate(cal, out); }; });

  ExportArgs exp;
  auto* e = app.add_subcommand("export-plot", "Write one channel of a ground-truth file as a t,value CSV "
                                              "(t in s; x, y in m; vx, vy in m/s; psi in rad)");
  e->add_option("--gt", exp.gt, "Ground-truth JSONL from generate")->required()->check(CLI::ExistingFile);
  e->add_option("--channel", exp.channel, "Channel to export")
      ->required()
      ->check(CLI::IsMember({"x", "y", "vx", "vy", "psi"}));
  e->add_option("--out", exp.out, "Output CSV path")->required();
  e->add_option("--target", exp.target, "Target id (required when the file holds several targets)");
  e->callback([&] { action = [&] { return cmd_export(exp, out); }; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("gtforge");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex.code());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace gtforge::cli
