#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gtforge/uncert.hpp"

// Monte-Carlo certification of the analytic moments, covariances and bounds.
// Every check is deterministic in (inputs, samples, seed).
namespace gtforge::uncert {

/// m in {0, +-0.5, +-pi/2, 3} x sigma in {0.001, 0.01, 0.1, 1}.
std::vector<GaussianMoments> trig_moment_grid();

struct TrigMomentCheck {
  GaussianMoments g;
  TrigMoments analytic;
  TrigMoments empirical;
  double max_z = 0.0;  // largest |empirical - analytic| / SE over the five moments
  bool pass = false;
};

struct CovarianceCheck {
  McConfig config;
  CovBound2 exact_position, mc_position;
  CovBound2 exact_velocity, mc_velocity;
  double position_max_z = 0.0;
  double velocity_max_z = 0.0;
  bool pass = false;
};

struct DominationCheck {
  McConfig config;
  CovBound2 exact_position, exact_velocity;
  double worst_ratio = 0.0;  // max over a, b of exact / bound
  bool pass = false;
};

struct TrigMixCheck {
  double m_x = 0.0, m_y = 0.0, s_x = 0.0, s_y = 0.0;
  GaussianMoments omega;
  double bound = 0.0;
  double empirical = 0.0;
  double empirical_se = 0.0;
  bool pass = false;
};

struct YawCheck {
  double analytic = 0.0;
  double empirical = 0.0;
  double empirical_se = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct CertificationOptions {
  size_t samples = 1000000;
  uint64_t seed = 42;
  size_t covariance_configs = 50;
  size_t domination_configs = 100;
  double z_tolerance = 5.0;
};

/// Random true ego/target states inside `env`: |dx|, |dy| <= d_max / sqrt 2,
/// |v_t - v_e| <= v_max, |psi_dot_e| <= psi_dot_max. The noise is `nm`
/// without clock error, which the analytic model does not cover.
std::vector<McConfig> random_configurations(const NoiseModel& nm, const ScenarioEnvelope& env, size_t count,
                                            uint64_t seed);

std::vector<TrigMomentCheck> certify_trig_moments(size_t samples, uint64_t seed, double z_tolerance = 5.0);

/// Exact position and velocity covariances against Monte-Carlo estimates.
std::vector<CovarianceCheck> certify_exact_covariance(std::span<const McConfig> configs, size_t samples,
                                                      uint64_t seed, double z_tolerance = 5.0);

/// Half-exponent a, b bounds against exact diagonal covariances.
std::vector<DominationCheck> check_domination(std::span<const McConfig> configs, const NoiseModel& nm,
                                              const ScenarioEnvelope& env);

/// Var(cos W X + sin W Y) Monte-Carlo estimate against its bound (printed
/// exponent), on a small fixed set of cases.
std::vector<TrigMixCheck> certify_trig_mix(size_t samples, uint64_t seed);

YawCheck certify_yaw_variance(const NoiseModel& nm, size_t samples, uint64_t seed, double z_tolerance = 5.0);

struct CertificationReport {
  CertificationOptions options;
  NoiseModel noise;
  ScenarioEnvelope envelope;
  std::vector<TrigMomentCheck> trig_moments;
  std::vector<CovarianceCheck> covariance;
  std::vector<DominationCheck> domination;
  std::vector<TrigMixCheck> trig_mix;
  YawCheck yaw;

  bool pass() const;
};

CertificationReport run_certification(const NoiseModel& nm, const ScenarioEnvelope& env,
                                      const CertificationOptions& options);

/// Summary document: per-suite pass flags, worst statistics, failures.
nlohmann::json to_json(const CertificationReport& report);

}  // namespace gtforge::uncert
