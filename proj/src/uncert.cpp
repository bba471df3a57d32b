#include "gtforge/uncert.hpp"

#include <cmath>
#include <string>

#include "gtforge/angle.hpp"
#include "gtforge/egokin.hpp"
#include "gtforge/error.hpp"
#include "gtforge/montecarlo.hpp"

namespace gtforge::uncert {
namespace {

// 1 - exp(-x) without cancellation for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

double exponent_factor(ExponentConvention conv) { return conv == ExponentConvention::HalfExponent ? 0.5 : 1.0; }

double sq(double v) { return v * v; }

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite and >= 0");
  }
}

void require_pos(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

NoiseModel NoiseModel::analysis_defaults() { return {0.02, 0.02, 1.75e-3, kDefaultSigmaPsiDot, 0.0}; }

NoiseModel NoiseModel::preset_nominal() { return {0.02, 0.02, 0.01 * kDegToRad, kDefaultSigmaPsiDot, 0.0}; }

NoiseModel NoiseModel::preset_outage_60s() { return {0.10, 0.02, 0.01 * kDegToRad, kDefaultSigmaPsiDot, 0.0}; }

NoiseModel NoiseModel::preset_outage_300s() { return {0.60, 0.02, 0.01 * kDegToRad, kDefaultSigmaPsiDot, 0.0}; }

void validate(const NoiseModel& nm) {
  require_nonneg(nm.sigma_pos, "sigma_pos");
  require_nonneg(nm.sigma_vel, "sigma_vel");
  require_nonneg(nm.sigma_psi, "sigma_psi");
  require_nonneg(nm.sigma_psi_dot, "sigma_psi_dot");
  require_nonneg(nm.clock_offset_std, "clock_offset_std");
}

void validate(const ScenarioEnvelope& env) {
  require_pos(env.d_max, "d_max");
  require_pos(env.v_max, "v_max");
  require_pos(env.psi_dot_max, "psi_dot_max");
}

TrigMoments trig_moments(const GaussianMoments& g) {
  require_nonneg(g.std, "std");
  const double var = sq(g.std);
  const double damp = std::exp(-0.5 * var);
  const double u = std::exp(-var);       // e^{-s^2}
  const double one_minus_u = one_minus_exp(var);
  const double c = std::cos(g.mean), s = std::sin(g.mean);

  // Var(cos) = 1/2 (1 + cos 2m e^{-2s^2}) - E(cos)^2, factored as
  // 1/2 (1-u)(1 - u cos 2m) with 1 - u cos 2m = (1-u) + 2u sin^2 m.
  TrigMoments t;
  t.e_cos = c * damp;
  t.e_sin = s * damp;
  t.var_cos = 0.5 * one_minus_u * (one_minus_u + 2.0 * u * s * s);
  t.var_sin = 0.5 * one_minus_u * (one_minus_u + 2.0 * u * c * c);
  t.cov_cos_sin = -0.5 * std::sin(2.0 * g.mean) * u * one_minus_u;
  return t;
}

CovBound2 position_covariance_exact(double dx_mean, double dy_mean, double sigma_dx, const GaussianMoments& psi) {
  const TrigMoments t = trig_moments(psi);
  const double var_d = sq(sigma_dx);
  const double u = std::exp(-sq(psi.std));
  const double k = u * one_minus_exp(sq(psi.std));  // e^{-s^2} (1 - e^{-s^2})
  const double s2m = std::sin(2.0 * psi.mean);
  const double c2m = std::cos(2.0 * psi.mean);

  CovBound2 cov;
  cov.a = var_d + sq(dx_mean) * t.var_cos + sq(dy_mean) * t.var_sin - dx_mean * dy_mean * s2m * k;
  cov.b = var_d + sq(dx_mean) * t.var_sin + sq(dy_mean) * t.var_cos + dx_mean * dy_mean * s2m * k;
  cov.c = 0.5 * s2m * k * (sq(dx_mean) - sq(dy_mean)) - dx_mean * dy_mean * c2m * k;
  return cov;
}

CovBound2 rotated_covariance_exact(double p_mean, double q_mean, const CovBound2& pq, const GaussianMoments& psi) {
  const TrigMoments t = trig_moments(psi);
  const double e_c2 = t.var_cos + sq(t.e_cos);
  const double e_s2 = t.var_sin + sq(t.e_sin);
  const double e_cs = t.cov_cos_sin + t.e_cos * t.e_sin;

  // U = cos P + sin Q, V = cos Q - sin P, written in centered form.
  CovBound2 cov;
  cov.a = e_c2 * pq.a + e_s2 * pq.b + 2.0 * e_cs * pq.c + sq(p_mean) * t.var_cos + sq(q_mean) * t.var_sin +
          2.0 * p_mean * q_mean * t.cov_cos_sin;
  cov.b = e_s2 * pq.a + e_c2 * pq.b - 2.0 * e_cs * pq.c + sq(p_mean) * t.var_sin + sq(q_mean) * t.var_cos -
          2.0 * p_mean * q_mean * t.cov_cos_sin;
  cov.c = (e_c2 - e_s2) * pq.c + e_cs * (pq.b - pq.a) + p_mean * q_mean * (t.var_cos - t.var_sin) +
          t.cov_cos_sin * (sq(q_mean) - sq(p_mean));
  return cov;
}

CovBound2 position_covariance_exact(const NoiseModel& nm, const TrajectorySample& ego, const TrajectorySample& tgt) {
  return position_covariance_exact(tgt.x - ego.x, tgt.y - ego.y, std::sqrt(2.0) * nm.sigma_pos,
                                   {ego.psi, nm.sigma_psi});
}

CovBound2 velocity_covariance_exact(const NoiseModel& nm, const TrajectorySample& ego, const TrajectorySample& tgt) {
  if (!ego.psi_dot) throw Error(ErrorCode::MissingYawRate, "ego sample has no yaw rate");
  const double w = *ego.psi_dot;
  const double dx = tgt.x - ego.x, dy = tgt.y - ego.y;
  const double var_d = 2.0 * sq(nm.sigma_pos);
  const double var_dv = 2.0 * sq(nm.sigma_vel);
  const double var_w = sq(nm.sigma_psi_dot);

  // P = dvx + w dy, Q = dvy - w dx with all inputs independent.
  CovBound2 pq;
  pq.a = var_dv + var_w * var_d + sq(w) * var_d + sq(dy) * var_w;
  pq.b = var_dv + var_w * var_d + sq(w) * var_d + sq(dx) * var_w;
  pq.c = -var_w * dx * dy;
  const double p_mean = tgt.vx - ego.vx + w * dy;
  const double q_mean = tgt.vy - ego.vy - w * dx;
  return rotated_covariance_exact(p_mean, q_mean, pq, {ego.psi, nm.sigma_psi});
}

CovBound2 position_bound(const NoiseModel& nm, const ScenarioEnvelope& env, ExponentConvention conv) {
  const double var_psi = sq(nm.sigma_psi);
  const double d2 = sq(env.d_max);
  CovBound2 bound;
  bound.a = 2.0 * sq(nm.sigma_pos) + 2.0 * d2 * one_minus_exp(exponent_factor(conv) * var_psi);
  bound.b = bound.a;
  bound.c = 1.5 * d2 * one_minus_exp(0.5 * var_psi);
  return bound;
}

double bounded_trig_mix_var(double m_x, double m_y, double s_x, double s_y, const GaussianMoments& omega,
                            ExponentConvention conv) {
  return sq(s_x) + sq(s_y) +
         one_minus_exp(exponent_factor(conv) * sq(omega.std)) * sq(std::abs(m_x) + std::abs(m_y));
}

CovBound2 velocity_bound(const NoiseModel& nm, const ScenarioEnvelope& env, ExponentConvention conv,
                         CrossTermConvention cross) {
  const double var_pos = sq(nm.sigma_pos);
  const double var_w = sq(nm.sigma_psi_dot);
  CovBound2 bound;
  bound.a = 4.0 * (sq(nm.sigma_vel) + var_pos * var_w + sq(env.psi_dot_max) * var_pos) + 2.0 * sq(env.d_max) * var_w +
            4.0 * one_minus_exp(exponent_factor(conv) * sq(nm.sigma_psi)) *
                sq(env.v_max + env.d_max * env.psi_dot_max);
  bound.b = bound.a;
  bound.c = cross == CrossTermConvention::Printed ? std::sqrt(sq(bound.a)) * std::sqrt(sq(bound.b))
                                                  : std::sqrt(bound.a * bound.b);
  return bound;
}

double yaw_variance(const NoiseModel& nm) { return 2.0 * sq(nm.sigma_psi); }

double rms_from_cov(const CovBound2& cov) {
  return std::sqrt(std::sqrt(sq(cov.a) + sq(cov.b) + 2.0 * sq(cov.c)));
}

McCovariance monte_carlo_covariance(const McConfig& config, size_t n, uint64_t seed) {
  if (n < kMinMonteCarloSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "Monte-Carlo needs at least " + std::to_string(kMinMonteCarloSamples) + " samples");
  }
  if (!config.ego.psi_dot) throw Error(ErrorCode::MissingYawRate, "ego sample has no yaw rate");
  validate(config.noise);
  const NoiseModel& nm = config.noise;

  auto perturb = [&nm](mc::NormalStream& rng, const TrajectorySample& truth) {
    TrajectorySample s = truth;
    s.x = rng(truth.x, nm.sigma_pos);
    s.y = rng(truth.y, nm.sigma_pos);
    s.vx = rng(truth.vx, nm.sigma_vel);
    s.vy = rng(truth.vy, nm.sigma_vel);
    s.psi = rng(truth.psi, nm.sigma_psi);
    s.psi_dot = rng(truth.psi_dot.value_or(0.0), nm.sigma_psi_dot);
    return s;
  };

  const double ego_psi = config.ego.psi;
  const mc::Moments m = mc::sample_moments(5, n, seed, [&](mc::NormalStream& rng, std::span<double> out) {
    const TrajectorySample ego = perturb(rng, config.ego);
    TrajectorySample tgt = perturb(rng, config.target);
    const double clock = rng(0.0, nm.clock_offset_std);
    tgt.x += config.target.vx * clock;
    tgt.y += config.target.vy * clock;
    const RelativeState rel = relative_state(ego, tgt);
    out[0] = rel.x;
    out[1] = rel.y;
    out[2] = rel.vx;
    out[3] = rel.vy;
    // Unwrapped about the noiseless relative yaw so the variance is not
    // polluted by the branch cut.
    const double true_yaw = angle_diff(config.target.psi, ego_psi);
    out[4] = true_yaw + angle_diff(rel.psi, true_yaw);
  });

  McCovariance r;
  r.n = n;
  r.position = {m.covariance(0, 0), m.covariance(1, 1), m.covariance(0, 1)};
  r.position_se = {m.covariance_se(0, 0), m.covariance_se(1, 1), m.covariance_se(0, 1)};
  r.velocity = {m.covariance(2, 2), m.covariance(3, 3), m.covariance(2, 3)};
  r.velocity_se = {m.covariance_se(2, 2), m.covariance_se(3, 3), m.covariance_se(2, 3)};
  r.yaw_var = m.covariance(4, 4);
  r.yaw_var_se = m.covariance_se(4, 4);
  return r;
}

}  // namespace gtforge::uncert
