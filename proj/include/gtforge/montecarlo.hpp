#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace gtforge::mc {

/// Seeded standard-normal source. Every (seed, stream) pair yields an
/// independent, reproducible sequence.
class NormalStream {
 public:
  NormalStream(uint64_t seed, uint64_t stream);

  double operator()() { return dist_(rng_); }
  double operator()(double mean, double stddev) { return mean + stddev * dist_(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

/// Deterministic seed for sub-stream `stream` of `seed`.
uint64_t derive_seed(uint64_t seed, uint64_t stream);

/// Sample mean and covariance of a vector-valued statistic together with
/// their standard errors.
struct Moments {
  size_t dim = 0;
  size_t n = 0;
  std::vector<double> mean;
  std::vector<double> mean_se;
  std::vector<double> cov;     // dim x dim, row-major
  std::vector<double> cov_se;  // dim x dim, row-major

  double covariance(size_t i, size_t j) const { return cov[i * dim + j]; }
  double covariance_se(size_t i, size_t j) const { return cov_se[i * dim + j]; }
};

/// Writes one draw of the statistic into `out`.
using Sampler = std::function<void(NormalStream&, std::span<double> out)>;

inline constexpr size_t kChunkSize = size_t{1} << 15;

/// Draws `n` samples in fixed-size chunks, chunk c seeded from (seed, c).
/// The result depends only on (dim, n, seed, sampler), never on the worker
/// count. Uses two passes: means first, then centered products, so
/// covariances do not suffer from cancellation.
Moments sample_moments(size_t dim, size_t n, uint64_t seed, const Sampler& sampler);

}  // namespace gtforge::mc
