#include "wse/rng.hpp"

#include <cmath>

namespace wse {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SplitMix64 edge_stream(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  std::uint64_t h = mix64(seed ^ 0x8824a3d7f2e61c5dULL);
  h = mix64(h ^ (i + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (j + 0xd1b54a32d192ed03ULL));
  return SplitMix64(h);
}

SplitMix64 sub_stream(std::uint64_t seed, std::uint64_t tag) {
  return SplitMix64(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) ^ tag));
}

double sample_gaussian(SplitMix64& rng, double mean, double stddev) {
  // Box-Muller; only the cosine branch is used so one draw costs two
  // uniforms, keeping the substream consumption deterministic.
  const double u1 = rng.next_positive();
  const double u2 = rng.next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

double sample_exponential(SplitMix64& rng, double rate) {
  return -std::log(rng.next_positive()) / rate;
}

namespace {

// Hormann's PTRS transformed-rejection sampler for Poisson, rate >= 10.
long long poisson_ptrs(SplitMix64& rng, double rate) {
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<long long>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * loglam - rate - std::lgamma(k + 1.0)) {
      return static_cast<long long>(k);
    }
  }
}

}  // namespace

long long sample_poisson(SplitMix64& rng, double rate) {
  if (rate <= 0.0) return 0;
  if (rate < 10.0) {
    // Inversion by sequential search.
    const double el = std::exp(-rate);
    double prod = rng.next_double();
    long long k = 0;
    while (prod > el) {
      prod *= rng.next_double();
      ++k;
    }
    return k;
  }
  return poisson_ptrs(rng, rate);
}

double sample_gamma(SplitMix64& rng, double shape) {
  if (shape < 1.0) {
    // Boost to shape+1 (Marsaglia-Tsang), then multiply by U^{1/shape}.
    const double g = sample_gamma(rng, shape + 1.0);
    return g * std::pow(rng.next_positive(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_gaussian(rng, 0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_positive();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(SplitMix64& rng, double a, double b) {
  const double ga = sample_gamma(rng, a);
  const double gb = sample_gamma(rng, b);
  return ga / (ga + gb);
}

}  // namespace wse
