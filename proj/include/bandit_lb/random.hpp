#pragma once
/// \file random.hpp
/// Seeded random streams and per-family reward samplers.
///
/// Streams: std::mt19937_64 seeded through SplitMix64. A Monte Carlo run with
/// index i under base seed s owns two streams, derived as
///   run_seed       = splitmix64(s + (i + 1) * 0x9E3779B97F4A7C15)
///   reward stream  = mt19937_64(splitmix64(run_seed ^ 0x52455741524453))   // "REWARDS"
///   decision stream= mt19937_64(splitmix64(run_seed ^ 0x4445434953494f4e)) // "DECISION"
///
/// Samplers (fixed algorithms so replays are bit-identical within one build):
///   Bernoulli  U < p
///   Gaussian   Box-Muller, cosine branch, one normal per two uniforms
///   Gamma      Marsaglia-Tsang; shape < 1 via Gamma(shape+1) * U^(1/shape)
///   Poisson    sequential inverse transform in chunks of mean <= 30
///   Binomial   sum of n Bernoulli draws
///   Finite     inverse CDF over the listed support order

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <variant>

#include "models.hpp"

namespace bandit_lb {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Anything that hands out uniform draws on [0, 1).
template <class S>
concept UniformSource = requires(S& s) {
  { s.uniform() } -> std::convertible_to<double>;
};

/// A seeded 64-bit Mersenne Twister producing 53-bit uniforms on [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct RunSeeds {
  std::uint64_t run_seed;
  std::uint64_t reward_seed;
  std::uint64_t decision_seed;
};

inline constexpr RunSeeds derive_run_seeds(std::uint64_t base_seed, std::uint64_t run_index) noexcept {
  const std::uint64_t run = splitmix64(base_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
  return {run, splitmix64(run ^ 0x52455741524453ULL), splitmix64(run ^ 0x4445434953494f4eULL)};
}

/// Seeds for a single run whose seed was given directly.
inline constexpr RunSeeds seeds_from_run_seed(std::uint64_t run) noexcept {
  return {run, splitmix64(run ^ 0x52455741524453ULL), splitmix64(run ^ 0x4445434953494f4eULL)};
}

namespace sample {

template <UniformSource S>
double standard_normal(S& src) {
  const double u1 = 1.0 - src.uniform();  // (0, 1]
  const double u2 = src.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Gamma(shape, 1).
template <UniformSource S>
double standard_gamma(S& src, double shape) {
  if (shape < 1.0) {
    const double g = standard_gamma(src, shape + 1.0);
    const double u = 1.0 - src.uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(src);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = src.uniform();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

template <UniformSource S>
double beta(S& src, double a, double b) {
  const double x = standard_gamma(src, a);
  const double y = standard_gamma(src, b);
  return x / (x + y);
}

template <UniformSource S>
double poisson(S& src, double lambda) {
  double count = 0.0;
  while (lambda > 0.0) {
    const double chunk = std::min(lambda, 30.0);
    lambda -= chunk;
    const double u = src.uniform();
    double p = std::exp(-chunk);
    double cdf = p;
    double k = 0.0;
    while (u >= cdf && k < 10000.0) {
      k += 1.0;
      p *= chunk / k;
      cdf += p;
    }
    count += k;
  }
  return count;
}

}  // namespace sample

/// One reward drawn from `d`.
template <UniformSource S>
double draw(const Distribution& d, S& src) {
  struct V {
    S& src;
    double operator()(const Bernoulli& b) const { return src.uniform() < b.p ? 1.0 : 0.0; }
    double operator()(const Gaussian& g) const { return g.mean + std::sqrt(g.variance) * sample::standard_normal(src); }
    double operator()(const Poisson& p) const { return sample::poisson(src, p.mean); }
    double operator()(const Gamma& g) const { return sample::standard_gamma(src, g.shape) * g.mean / g.shape; }
    double operator()(const Binomial& b) const {
      const double p = b.mean / b.trials;
      double k = 0.0;
      for (int i = 0; i < b.trials; ++i) k += src.uniform() < p ? 1.0 : 0.0;
      return k;
    }
    double operator()(const Dirac& d) const { return d.point; }
    double operator()(const Finite& f) const {
      const double u = src.uniform();
      double cdf = 0.0;
      std::size_t last = 0;
      for (std::size_t i = 0; i < f.points.size(); ++i) {
        if (f.weights[i] <= 0.0) continue;
        last = i;
        cdf += f.weights[i];
        if (u < cdf) return f.points[i];
      }
      return f.points[last];
    }
  };
  return std::visit(V{src}, d);
}

}  // namespace bandit_lb
