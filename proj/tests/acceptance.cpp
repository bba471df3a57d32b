// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "gtforge/angle.hpp"
#include "gtforge/calib.hpp"
#include "gtforge/certify.hpp"
#include "gtforge/config.hpp"
#include "gtforge/egokin.hpp"
#include "gtforge/gtgen.hpp"
#include "gtforge/synth.hpp"
#include "gtforge/uncert.hpp"

using namespace gtforge;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = PROJECT_SOURCE_DIR "/configs/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (limit_s > 0.0)
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, limit_s);
  else
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::printf("[%s] %2d %s: %s (%s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing,
              in_time ? "" : " over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0, double e = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
  return buf;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "gtforge");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("gtforge_accept_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- 1, 2: headline bounds --------------------------------------------------

Outcome headline_position() {
  const auto r = cli_run({"bounds", "--noise", kConfigs + "noise_analysis.json", "--envelope", kConfigs + "envelope.json"});
  const auto p = cli_run({"bounds", "--noise", kConfigs + "noise_analysis.json", "--envelope",
                          kConfigs + "envelope.json", "--convention", "printed"});
  if (r.code != 0 || p.code != 0) return {false, "bounds exited nonzero: " + r.err + p.err};
  const double half = nlohmann::json::parse(r.out)["position"]["rms"].get<double>();
  const double printed = nlohmann::json::parse(p.out)["position"]["rms"].get<double>();
  const bool ok = std::abs(half - 0.1202) <= 0.0005 && std::abs(printed - 0.1555) <= 0.0005;
  return {ok, fmt("rms %.4f m half exponent (0.1202 +- 0.0005), %.4f m printed (~0.1555)", half, printed)};
}

Outcome headline_velocity() {
  const auto r = cli_run({"bounds", "--noise", kConfigs + "noise_analysis.json", "--envelope", kConfigs + "envelope.json"});
  if (r.code != 0) return {false, "bounds exited nonzero: " + r.err};
  const auto doc = nlohmann::json::parse(r.out);
  const double rms = doc["velocity"]["rms"].get<double>();
  const double sigma = doc["noise"]["sigma_psi_dot"].get<double>();
  return {std::abs(rms - 0.301) <= 0.002 && sigma == 1.75e-3,
          fmt("rms %.4f m/s (0.301 +- 0.002), sigma_psi_dot %.2e rad/s", rms, sigma)};
}

// --- 3, 4, 5: certification -------------------------------------------------

Outcome trig_moments() {
  const auto checks = uncert::certify_trig_moments(10000000, 1001, 5.0);
  double worst = 0.0;
  size_t bad = 0;
  for (const auto& c : checks) {
    worst = std::max(worst, c.max_z);
    bad += !c.pass;
  }
  return {checks.size() == 24 && bad == 0,
          fmt("%.0f grid points at 1e7 samples, worst z %.2f, %.0f outside 5 SE", double(checks.size()), worst,
              double(bad))};
}

Outcome exact_covariance() {
  const auto nm = uncert::NoiseModel::analysis_defaults();
  const auto configs = uncert::random_configurations(nm, {}, 50, 2002);
  const auto checks = uncert::certify_exact_covariance(configs, 1000000, 2003, 5.0);
  double worst_p = 0.0, worst_v = 0.0;
  size_t bad = 0;
  for (const auto& c : checks) {
    worst_p = std::max(worst_p, c.position_max_z);
    worst_v = std::max(worst_v, c.velocity_max_z);
    bad += !c.pass;
  }
  return {checks.size() == 50 && bad == 0,
          fmt("50 configurations at 1e6 samples, worst z position %.2f velocity %.2f, %.0f outside 5 SE", worst_p,
              worst_v, double(bad))};
}

Outcome domination() {
  const auto nm = uncert::NoiseModel::analysis_defaults();
  const uncert::ScenarioEnvelope env;
  const auto configs = uncert::random_configurations(nm, env, 100, 3003);
  const auto checks = uncert::check_domination(configs, nm, env);
  double worst = 0.0;
  size_t bad = 0;
  for (const auto& c : checks) {
    worst = std::max(worst, c.worst_ratio);
    bad += !c.pass;
  }
  return {checks.size() == 100 && bad == 0,
          fmt("100 configurations, worst exact/bound %.3f, %.0f violations", worst, double(bad))};
}

// --- 6: noiseless pipeline --------------------------------------------------

Outcome noiseless_pipeline() {
  auto sc = config::scenario_from_json(config::load_json_file(kConfigs + "lead_follow.json"));
  const synth::Track track(sc.track);
  const auto& ego_run = sc.vehicles.at(0).run;
  const auto& lead_run = sc.vehicles.at(1).run;
  const Trajectory ego = synth::simulate_run(track, ego_run);
  const Trajectory lead = synth::simulate_run(track, lead_run);

  std::vector<double> knots, mids;
  for (size_t i = 0; i < ego.samples.size(); ++i) {
    knots.push_back(ego.samples[i].t);
    if (i + 1 < ego.samples.size()) mids.push_back(0.5 * (ego.samples[i].t + ego.samples[i + 1].t));
  }
  GenerateOptions opt;
  const auto at_knots = generate_records(ego, std::span(&lead, 1), knots, opt);
  const auto at_mids = generate_records(ego, std::span(&lead, 1), mids, opt);

  double ep = 0.0, ev = 0.0, ey = 0.0, em = 0.0;
  for (const auto& r : at_knots) {
    const auto truth =
        relative_state(synth::state_on_track(track, ego_run, r.t), synth::state_on_track(track, lead_run, r.t));
    ep = std::max({ep, std::abs(r.rel.x - truth.x), std::abs(r.rel.y - truth.y)});
    ev = std::max({ev, std::abs(r.rel.vx - truth.vx), std::abs(r.rel.vy - truth.vy)});
    ey = std::max(ey, std::abs(angle_diff(r.rel.psi, truth.psi)));
  }
  // Diagnostic only: the same maximum without stamps near an ego curvature jump.
  double em_smooth = 0.0;
  for (const auto& r : at_mids) {
    const auto e = synth::state_on_track(track, ego_run, r.t);
    const auto truth = relative_state(e, synth::state_on_track(track, lead_run, r.t));
    const double err = std::max(std::abs(r.rel.x - truth.x), std::abs(r.rel.y - truth.y));
    em = std::max(em, err);
    const bool near_jump = synth::state_on_track(track, ego_run, r.t - 0.1).psi_dot != e.psi_dot ||
                           synth::state_on_track(track, ego_run, r.t + 0.1).psi_dot != e.psi_dot;
    if (!near_jump) em_smooth = std::max(em_smooth, err);
  }
  return {ep <= 1e-6 && ev <= 1e-6 && ey <= 1e-9 && em <= 1e-3,
          fmt("knots: %.1e m, %.1e m/s, %.1e rad; between knots %.1e m (%.1e m away from curvature jumps)", ep, ev,
              ey, em, em_smooth)};
}

// --- 7: clock error ---------------------------------------------------------

Outcome clock_error() {
  const synth::Track track{synth::TrackSpec{}};
  synth::RunSpec ego_run, tgt_run;
  ego_run.vehicle_id = "ego";
  ego_run.initial_speed = 0.0;
  ego_run.start_offset = 600.0;
  ego_run.duration = 10.0;
  tgt_run = ego_run;
  tgt_run.vehicle_id = "target";
  tgt_run.initial_speed = 70.0;
  tgt_run.start_offset = 50.0;
  const Trajectory ego = synth::simulate_run(track, ego_run);
  const Trajectory tgt = synth::simulate_run(track, tgt_run);
  const auto stamps = stamps_at_rate(0.1, 9.9, 100.0);
  const auto clean = generate_records(ego, std::span(&tgt, 1), stamps, {});

  std::vector<double> ratios;
  double at_1ms = 0.0;
  for (double offset : {0.5e-3, 1e-3, 2e-3, 5e-3}) {
    const Trajectory skewed = synth::corrupt(tgt, {}, ClockModel{offset, 0.0}, 1);
    const auto recs = generate_records(ego, std::span(&skewed, 1), stamps, {});
    double sum = 0.0;
    for (size_t i = 0; i < recs.size(); ++i)
      sum += std::hypot(recs[i].rel.x - clean[i].rel.x, recs[i].rel.y - clean[i].rel.y);
    const double mean = sum / static_cast<double>(recs.size());
    if (offset == 1e-3) at_1ms = mean;
    ratios.push_back(mean / offset);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = (*hi - *lo) / *lo;
  return {std::abs(at_1ms - 0.070) <= 0.007 && spread <= 0.01,
          fmt("mean error %.4f m at 1 ms (0.070 +- 10%%), error/offset %.2f..%.2f m/s (spread %.1e)", at_1ms, *lo, *hi,
              spread)};
}

// --- 8: hand-eye ------------------------------------------------------------

std::vector<calib::Pose2D> wiggle_path(size_t n) {
  std::vector<calib::Pose2D> out;
  double x = 0.0, y = 0.0;
  const double dt = 0.1;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double th = 0.9 * std::sin(0.35 * t) + 0.4 * std::sin(1.1 * t + 0.3);
    out.push_back({t, x, y, wrap_angle(th)});
    x += 8.0 * dt * std::cos(th);
    y += 8.0 * dt * std::sin(th);
  }
  return out;
}

std::vector<calib::Pose2D> remount(const std::vector<calib::Pose2D>& a, const calib::RigidTransform2D& world,
                                   const calib::RigidTransform2D& x) {
  std::vector<calib::Pose2D> out;
  for (const auto& p : a) {
    const auto b = world.compose(p.transform()).compose(x);
    out.push_back({p.t, b.tx, b.ty, b.theta});
  }
  return out;
}

void jitter(std::vector<calib::Pose2D>& poses, std::mt19937_64& rng, double s_pos, double s_psi) {
  std::normal_distribution<double> n01(0.0, 1.0);
  for (auto& p : poses) {
    p.x += s_pos * n01(rng);
    p.y += s_pos * n01(rng);
    p.theta = wrap_angle(p.theta + s_psi * n01(rng));
  }
}

double transform_error(const calib::RigidTransform2D& a, const calib::RigidTransform2D& b) {
  return std::hypot(a.tx - b.tx, a.ty - b.ty);
}

Outcome hand_eye() {
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> ang(-kPi, kPi), lever(-3.0, 3.0);
  const calib::RigidTransform2D x_true{ang(rng), lever(rng), lever(rng)};
  const calib::RigidTransform2D world{ang(rng), 4.5e5, 5.4e6};

  const auto a = wiggle_path(1000);
  const auto b = remount(a, world, x_true);
  const auto exact = calib::solve_hand_eye(calib::relative_motions(a), calib::relative_motions(b));
  const double noiseless = std::max(transform_error(exact.transform, x_true),
                                    std::abs(angle_diff(exact.transform.theta, x_true.theta)));

  std::vector<double> medians;
  for (size_t n : {100u, 400u, 1600u}) {
    const auto path = wiggle_path(n);
    std::vector<double> errs;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 noise(1000 * n + seed);
      auto na = path;
      auto nb = remount(path, world, x_true);
      jitter(na, noise, 0.02, 1.75e-3);
      jitter(nb, noise, 0.02, 1.75e-3);
      const auto r = calib::solve_hand_eye(calib::relative_motions(na), calib::relative_motions(nb));
      errs.push_back(transform_error(r.transform, x_true));
    }
    medians.push_back(median(errs));
  }
  const bool decreasing = medians[0] > medians[1] && medians[1] > medians[2];
  return {noiseless <= 1e-9 && decreasing,
          fmt("noiseless error %.1e; median lever-arm error %.4f / %.4f / %.4f m at N = 100 / 400 / 1600", noiseless,
              medians[0], medians[1], medians[2])};
}

// --- 9: kinematic consistency -----------------------------------------------

Outcome kinematic_consistency() {
  const synth::Track track{synth::TrackSpec{}};
  std::mt19937_64 rng(9009);
  std::uniform_real_distribution<double> speed(5.0, 36.0), where(0.0, 3200.0), lateral(-4.0, 4.0), when(1.0, 59.0);
  const double dt = 1e-4;
  double worst = 0.0;
  int used = 0, skipped = 0;
  while (used < 1000) {
    synth::RunSpec e, g;
    e.initial_speed = speed(rng);
    e.start_offset = where(rng);
    e.lateral_offset = lateral(rng);
    e.changes = {{20.0, speed(rng), 5.0}};
    g = e;
    g.initial_speed = speed(rng);
    g.start_offset = e.start_offset + 60.0 * (where(rng) / 3200.0 - 0.5);
    g.lateral_offset = lateral(rng);
    g.changes = {{30.0, speed(rng), 4.0}};
    const double t = when(rng);
    const auto e0 = synth::state_on_track(track, e, t - dt), e1 = synth::state_on_track(track, e, t + dt);
    const auto g0 = synth::state_on_track(track, g, t - dt), g1 = synth::state_on_track(track, g, t + dt);
    // The derivative does not exist across a curvature or acceleration jump.
    const auto smooth = [&](const synth::RunSpec& r, const TrajectorySample& a, const TrajectorySample& b) {
      for (const auto& c : r.changes)
        if (std::abs(t - c.t) <= dt || std::abs(t - c.t - c.ramp) <= dt) return false;
      return a.psi_dot == b.psi_dot;
    };
    if (!smooth(e, e0, e1) || !smooth(g, g0, g1)) {
      ++skipped;
      continue;
    }
    const Vec2 p0 = relative_position(e0, g0), p1 = relative_position(e1, g1);
    const Vec2 v = relative_velocity(synth::state_on_track(track, e, t), synth::state_on_track(track, g, t));
    worst = std::max({worst, std::abs((p1.x - p0.x) / (2 * dt) - v.x), std::abs((p1.y - p0.y) / (2 * dt) - v.y)});
    ++used;
  }
  return {worst <= 1e-5, fmt("1000 states, worst |dp/dt - v| %.2e m/s (%.0f stencils across a jump skipped)", worst,
                             double(skipped))};
}

// --- 10: determinism --------------------------------------------------------

std::vector<std::string> run_pipeline(const char* threads, const fs::path& dir) {
  ::setenv("GT_FORGE_THREADS", threads, 1);
  std::vector<std::string> outputs;
  const auto sim = cli_run({"simulate", "--config", kConfigs + "lead_follow.json", "--out-dir", dir.string()});
  outputs.push_back(std::to_string(sim.code));
  for (const char* f : {"ego_clean.csv", "ego.csv", "lead_clean.csv", "lead.csv"}) outputs.push_back(slurp(dir / f));

  const fs::path gt = dir / "gt.jsonl";
  const auto gen =
      cli_run({"generate", "--ego", (dir / "ego.csv").string(), "--target", (dir / "lead.csv").string(), "--rate", "20",
               "--geometry", kConfigs + "geometry.json", "--noise", kConfigs + "noise_analysis.json", "--out",
               gt.string()});
  outputs.push_back(std::to_string(gen.code));
  outputs.push_back(slurp(gt));

  const auto val = cli_run({"validate", "--noise", kConfigs + "noise_analysis.json", "--envelope",
                            kConfigs + "envelope.json"});
  outputs.push_back(std::to_string(val.code));
  outputs.push_back(val.out);
  ::unsetenv("GT_FORGE_THREADS");
  return outputs;
}

Outcome determinism() {
  const char* names[] = {"simulate code", "ego_clean.csv", "ego.csv",       "lead_clean.csv", "lead.csv",
                         "generate code", "gt.jsonl",      "validate code", "validate report"};
  const auto a = run_pipeline("1", scratch("det_a"));
  const auto b = run_pipeline("1", scratch("det_b"));
  const auto c = run_pipeline("4", scratch("det_c"));
  if (a[0] != "0" || a[5] != "0") return {false, "simulate or generate failed"};
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return {false, std::string(names[i]) + " differs between two runs"};
    if (a[i] != c[i]) return {false, std::string(names[i]) + " differs between 1 and 4 threads"};
  }
  return {true, fmt("simulate (4 files), generate (%.0f bytes) and validate (1e6 samples, exit %.0f) bit-identical "
                    "across runs and thread counts 1, 4",
                    double(a[6].size()), std::stod(a[7]))};
}

}  // namespace

int main() {
  criterion(1, "headline position bound", 1.0, headline_position);
  criterion(2, "headline velocity bound", 1.0, headline_velocity);
  criterion(3, "trig moment certification", 120.0, trig_moments);
  criterion(4, "exact covariance vs Monte-Carlo", 300.0, exact_covariance);
  criterion(5, "bound domination", 60.0, domination);
  criterion(6, "noiseless end-to-end pipeline", 30.0, noiseless_pipeline);
  criterion(7, "clock error model", 60.0, clock_error);
  criterion(8, "hand-eye recovery", 60.0, hand_eye);
  criterion(9, "kinematic consistency", 10.0, kinematic_consistency);
  criterion(10, "determinism", 0.0, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
