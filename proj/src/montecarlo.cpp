#include "gtforge/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "gtforge/parallel.hpp"

namespace gtforge::mc {
namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t state = seed ^ (0xA0761D6478BD642Full * (stream + 1));
  splitmix64(state);
  return splitmix64(state);
}

NormalStream::NormalStream(uint64_t seed, uint64_t stream) {
  uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
  std::seed_seq seq{static_cast<uint32_t>(splitmix64(state)), static_cast<uint32_t>(splitmix64(state)),
                    static_cast<uint32_t>(splitmix64(state)), static_cast<uint32_t>(splitmix64(state)),
                    static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  rng_.seed(seq);
}

Moments sample_moments(size_t dim, size_t n, uint64_t seed, const Sampler& sampler) {
  Moments m;
  m.dim = dim;
  m.n = n;
  if (n == 0 || dim == 0) return m;
  const size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  auto chunk_len = [&](size_t c) { return std::min(kChunkSize, n - c * kChunkSize); };

  // Pass 1: means.
  std::vector<double> sums(chunks * dim, 0.0);
  parallel_for(chunks, [&](size_t c) {
    NormalStream rng(seed, c);
    std::vector<double> out(dim);
    double* acc = &sums[c * dim];
    for (size_t k = 0, len = chunk_len(c); k < len; ++k) {
      sampler(rng, out);
      for (size_t i = 0; i < dim; ++i) acc[i] += out[i];
    }
  });
  m.mean.assign(dim, 0.0);
  for (size_t c = 0; c < chunks; ++c)
    for (size_t i = 0; i < dim; ++i) m.mean[i] += sums[c * dim + i];
  for (auto& v : m.mean) v /= static_cast<double>(n);

  // Pass 2: centered products p_ij and p_ij^2, replaying the same streams.
  const size_t pairs = dim * dim;
  std::vector<double> prod(chunks * pairs, 0.0), prod2(chunks * pairs, 0.0);
  parallel_for(chunks, [&](size_t c) {
    NormalStream rng(seed, c);
    std::vector<double> out(dim), e(dim);
    double* p1 = &prod[c * pairs];
    double* p2 = &prod2[c * pairs];
    for (size_t k = 0, len = chunk_len(c); k < len; ++k) {
      sampler(rng, out);
      for (size_t i = 0; i < dim; ++i) e[i] = out[i] - m.mean[i];
      for (size_t i = 0; i < dim; ++i) {
        for (size_t j = i; j < dim; ++j) {
          const double p = e[i] * e[j];
          p1[i * dim + j] += p;
          p2[i * dim + j] += p * p;
        }
      }
    }
  });

  const double nd = static_cast<double>(n);
  m.cov.assign(pairs, 0.0);
  m.cov_se.assign(pairs, 0.0);
  m.mean_se.assign(dim, 0.0);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = i; j < dim; ++j) {
      double s1 = 0.0, s2 = 0.0;
      for (size_t c = 0; c < chunks; ++c) {
        s1 += prod[c * pairs + i * dim + j];
        s2 += prod2[c * pairs + i * dim + j];
      }
      const double mean_p = s1 / nd;
      const double var_p = std::max(0.0, s2 / nd - mean_p * mean_p);
      const double cov = n > 1 ? s1 / (nd - 1.0) : 0.0;
      m.cov[i * dim + j] = m.cov[j * dim + i] = cov;
      m.cov_se[i * dim + j] = m.cov_se[j * dim + i] = std::sqrt(var_p / nd);
    }
    m.mean_se[i] = std::sqrt(m.cov[i * dim + i] / nd);
  }
  return m;
}

}  // namespace gtforge::mc
