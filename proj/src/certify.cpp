#include "gtforge/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gtforge/angle.hpp"
#include "gtforge/montecarlo.hpp"

namespace gtforge::uncert {
namespace {

double zscore(double empirical, double analytic, double se) {
  const double diff = std::abs(empirical - analytic);
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double max_z(const CovBound2& emp, const CovBound2& ana, const CovBound2& se) {
  return std::max({zscore(emp.a, ana.a, se.a), zscore(emp.b, ana.b, se.b), zscore(emp.c, ana.c, se.c)});
}

// Portable uniform draws: the standard distributions are not specified
// bit-for-bit across library implementations.
class Uniform {
 public:
  explicit Uniform(uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 rng_;
};

nlohmann::json cov_json(const CovBound2& c) { return {{"a", c.a}, {"b", c.b}, {"c", c.c}}; }

}  // namespace

std::vector<GaussianMoments> trig_moment_grid() {
  std::vector<GaussianMoments> grid;
  for (double m : {0.0, 0.5, -0.5, kPi / 2.0, -kPi / 2.0, 3.0}) {
    for (double s : {0.001, 0.01, 0.1, 1.0}) grid.push_back({m, s});
  }
  return grid;
}

std::vector<McConfig> random_configurations(const NoiseModel& nm, const ScenarioEnvelope& env, size_t count,
                                            uint64_t seed) {
  validate(nm);
  validate(env);
  NoiseModel noise = nm;
  noise.clock_offset_std = 0.0;
  Uniform u(mc::derive_seed(seed, 0));
  const double half_side = env.d_max / std::sqrt(2.0);
  std::vector<McConfig> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    McConfig c;
    c.noise = noise;
    c.ego.x = u(3e5, 7e5);
    c.ego.y = u(4e6, 6e6);
    c.ego.psi = wrap_angle(u(-kPi, kPi));
    const double ego_speed = u(0.0, env.v_max);
    const double ego_dir = u(-kPi, kPi);
    c.ego.vx = ego_speed * std::cos(ego_dir);
    c.ego.vy = ego_speed * std::sin(ego_dir);
    c.ego.psi_dot = u(-env.psi_dot_max, env.psi_dot_max);

    c.target.x = c.ego.x + u(-half_side, half_side);
    c.target.y = c.ego.y + u(-half_side, half_side);
    const double dv = env.v_max * std::sqrt(u(0.0, 1.0));
    const double dv_dir = u(-kPi, kPi);
    c.target.vx = c.ego.vx + dv * std::cos(dv_dir);
    c.target.vy = c.ego.vy + dv * std::sin(dv_dir);
    c.target.psi = wrap_angle(u(-kPi, kPi));
    c.target.psi_dot = u(-env.psi_dot_max, env.psi_dot_max);
    out.push_back(c);
  }
  return out;
}

std::vector<TrigMomentCheck> certify_trig_moments(size_t samples, uint64_t seed, double z_tolerance) {
  std::vector<TrigMomentCheck> out;
  const auto grid = trig_moment_grid();
  for (size_t i = 0; i < grid.size(); ++i) {
    const GaussianMoments g = grid[i];
    const mc::Moments m = mc::sample_moments(2, samples, mc::derive_seed(seed, i),
                                             [g](mc::NormalStream& rng, std::span<double> x) {
                                               const double w = rng(g.mean, g.std);
                                               x[0] = std::cos(w);
                                               x[1] = std::sin(w);
                                             });
    TrigMomentCheck c;
    c.g = g;
    c.analytic = trig_moments(g);
    c.empirical = {m.mean[0], m.mean[1], m.covariance(0, 0), m.covariance(1, 1), m.covariance(0, 1)};
    c.max_z = std::max({zscore(c.empirical.e_cos, c.analytic.e_cos, m.mean_se[0]),
                        zscore(c.empirical.e_sin, c.analytic.e_sin, m.mean_se[1]),
                        zscore(c.empirical.var_cos, c.analytic.var_cos, m.covariance_se(0, 0)),
                        zscore(c.empirical.var_sin, c.analytic.var_sin, m.covariance_se(1, 1)),
                        zscore(c.empirical.cov_cos_sin, c.analytic.cov_cos_sin, m.covariance_se(0, 1))});
    c.pass = c.max_z < z_tolerance;
    out.push_back(c);
  }
  return out;
}

std::vector<CovarianceCheck> certify_exact_covariance(std::span<const McConfig> configs, size_t samples,
                                                      uint64_t seed, double z_tolerance) {
  std::vector<CovarianceCheck> out;
  for (size_t i = 0; i < configs.size(); ++i) {
    CovarianceCheck c;
    c.config = configs[i];
    const McCovariance mc = monte_carlo_covariance(c.config, samples, mc::derive_seed(seed, i));
    c.exact_position = position_covariance_exact(c.config.noise, c.config.ego, c.config.target);
    c.exact_velocity = velocity_covariance_exact(c.config.noise, c.config.ego, c.config.target);
    c.mc_position = mc.position;
    c.mc_velocity = mc.velocity;
    c.position_max_z = max_z(mc.position, c.exact_position, mc.position_se);
    c.velocity_max_z = max_z(mc.velocity, c.exact_velocity, mc.velocity_se);
    c.pass = c.position_max_z < z_tolerance && c.velocity_max_z < z_tolerance;
    out.push_back(c);
  }
  return out;
}

std::vector<DominationCheck> check_domination(std::span<const McConfig> configs, const NoiseModel& nm,
                                              const ScenarioEnvelope& env) {
  const CovBound2 pb = position_bound(nm, env, ExponentConvention::HalfExponent);
  const CovBound2 vb = velocity_bound(nm, env, ExponentConvention::HalfExponent);
  auto ratio = [](double exact, double bound) {
    if (bound > 0.0) return exact / bound;
    return exact <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  std::vector<DominationCheck> out;
  for (const McConfig& cfg : configs) {
    DominationCheck d;
    d.config = cfg;
    d.exact_position = position_covariance_exact(cfg.noise, cfg.ego, cfg.target);
    d.exact_velocity = velocity_covariance_exact(cfg.noise, cfg.ego, cfg.target);
    d.worst_ratio = std::max({ratio(d.exact_position.a, pb.a), ratio(d.exact_position.b, pb.b),
                              ratio(d.exact_velocity.a, vb.a), ratio(d.exact_velocity.b, vb.b)});
    d.pass = d.worst_ratio <= 1.0;
    out.push_back(d);
  }
  return out;
}

std::vector<TrigMixCheck> certify_trig_mix(size_t samples, uint64_t seed) {
  struct Case {
    double mx, my, sx, sy, mw, sw;
  };
  const Case cases[] = {{3.0, -2.0, 0.1, 0.1, 0.7, 0.05},
                        {0.0, 0.0, 0.2, 0.3, 1.0, 0.5},
                        {5.0, 5.0, 0.01, 0.01, -0.3, 0.3},
                        {10.0, -4.0, 0.05, 0.02, 2.0, 1.0}};
  std::vector<TrigMixCheck> out;
  for (size_t i = 0; i < std::size(cases); ++i) {
    const Case k = cases[i];
    const mc::Moments m =
        mc::sample_moments(1, samples, mc::derive_seed(seed, i), [k](mc::NormalStream& rng, std::span<double> x) {
          const double w = rng(k.mw, k.sw);
          x[0] = std::cos(w) * rng(k.mx, k.sx) + std::sin(w) * rng(k.my, k.sy);
        });
    TrigMixCheck c;
    c.m_x = k.mx;
    c.m_y = k.my;
    c.s_x = k.sx;
    c.s_y = k.sy;
    c.omega = {k.mw, k.sw};
    c.bound = bounded_trig_mix_var(k.mx, k.my, k.sx, k.sy, c.omega, ExponentConvention::Printed);
    c.empirical = m.covariance(0, 0);
    c.empirical_se = m.covariance_se(0, 0);
    c.pass = c.empirical <= c.bound;
    out.push_back(c);
  }
  return out;
}

YawCheck certify_yaw_variance(const NoiseModel& nm, size_t samples, uint64_t seed, double z_tolerance) {
  McConfig cfg;
  cfg.noise = nm;
  cfg.noise.clock_offset_std = 0.0;
  cfg.ego.psi = 3.0;
  cfg.ego.psi_dot = 0.0;
  cfg.target.x = 20.0;
  cfg.target.psi = -3.0;  // relative yaw near the branch cut
  const McCovariance mc = monte_carlo_covariance(cfg, samples, seed);
  YawCheck y;
  y.analytic = yaw_variance(nm);
  y.empirical = mc.yaw_var;
  y.empirical_se = mc.yaw_var_se;
  y.z = zscore(y.empirical, y.analytic, y.empirical_se);
  y.pass = y.z < z_tolerance;
  return y;
}

bool CertificationReport::pass() const {
  auto ok = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](const auto& c) { return c.pass; }); };
  return ok(trig_moments) && ok(covariance) && ok(domination) && ok(trig_mix) && yaw.pass;
}

CertificationReport run_certification(const NoiseModel& nm, const ScenarioEnvelope& env,
                                      const CertificationOptions& options) {
  validate(nm);
  validate(env);
  CertificationReport r;
  r.options = options;
  r.noise = nm;
  r.envelope = env;
  const uint64_t s = options.seed;
  r.trig_moments = certify_trig_moments(options.samples, mc::derive_seed(s, 1), options.z_tolerance);
  const auto cov_cfg = random_configurations(nm, env, options.covariance_configs, mc::derive_seed(s, 2));
  r.covariance = certify_exact_covariance(cov_cfg, options.samples, mc::derive_seed(s, 3), options.z_tolerance);
  const auto dom_cfg = random_configurations(nm, env, options.domination_configs, mc::derive_seed(s, 4));
  r.domination = check_domination(dom_cfg, nm, env);
  r.trig_mix = certify_trig_mix(options.samples, mc::derive_seed(s, 5));
  r.yaw = certify_yaw_variance(nm, options.samples, mc::derive_seed(s, 6), options.z_tolerance);
  return r;
}

nlohmann::json to_json(const CertificationReport& r) {
  using nlohmann::json;
  json out;
  out["samples"] = r.options.samples;
  out["seed"] = r.options.seed;
  out["z_tolerance"] = r.options.z_tolerance;
  out["noise"] = {{"sigma_pos", r.noise.sigma_pos},
                  {"sigma_vel", r.noise.sigma_vel},
                  {"sigma_psi", r.noise.sigma_psi},
                  {"sigma_psi_dot", r.noise.sigma_psi_dot},
                  {"clock_offset_std", r.noise.clock_offset_std}};
  out["envelope"] = {{"d_max", r.envelope.d_max}, {"v_max", r.envelope.v_max}, {"psi_dot_max", r.envelope.psi_dot_max}};

  {
    json fails = json::array();
    double worst = 0.0;
    for (const auto& c : r.trig_moments) {
      worst = std::max(worst, c.max_z);
      if (!c.pass) fails.push_back({{"mean", c.g.mean}, {"std", c.g.std}, {"max_z", c.max_z}});
    }
    out["trig_moments"] = {{"points", r.trig_moments.size()}, {"max_z", worst}, {"failures", fails},
                           {"pass", fails.empty()}};
  }
  {
    json fails = json::array();
    double wp = 0.0, wv = 0.0;
    for (size_t i = 0; i < r.covariance.size(); ++i) {
      const auto& c = r.covariance[i];
      wp = std::max(wp, c.position_max_z);
      wv = std::max(wv, c.velocity_max_z);
      if (!c.pass) {
        fails.push_back({{"index", i},
                         {"position_max_z", c.position_max_z},
                         {"velocity_max_z", c.velocity_max_z},
                         {"exact_position", cov_json(c.exact_position)},
                         {"mc_position", cov_json(c.mc_position)}});
      }
    }
    out["exact_covariance"] = {{"configs", r.covariance.size()}, {"position_max_z", wp}, {"velocity_max_z", wv},
                               {"failures", fails}, {"pass", fails.empty()}};
  }
  {
    size_t violations = 0;
    double worst = 0.0;
    for (const auto& d : r.domination) {
      worst = std::max(worst, d.worst_ratio);
      violations += d.pass ? 0 : 1;
    }
    out["domination"] = {{"configs", r.domination.size()}, {"violations", violations}, {"worst_ratio", worst},
                         {"pass", violations == 0}};
  }
  {
    size_t failures = 0;
    double worst = 0.0;
    for (const auto& c : r.trig_mix) {
      if (c.bound > 0.0) worst = std::max(worst, c.empirical / c.bound);
      failures += c.pass ? 0 : 1;
    }
    out["trig_mix"] = {{"cases", r.trig_mix.size()}, {"failures", failures}, {"worst_ratio", worst},
                       {"pass", failures == 0}};
  }
  out["yaw"] = {{"analytic", r.yaw.analytic}, {"empirical", r.yaw.empirical}, {"se", r.yaw.empirical_se},
                {"z", r.yaw.z}, {"pass", r.yaw.pass}};
  out["pass"] = r.pass();
  return out;
}

}  // namespace gtforge::uncert
