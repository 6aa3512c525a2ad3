#pragma once

#include <cstdint>

namespace wse {

// SplitMix64: counter-based 64-bit generator (Steele, Lea & Flood 2014).
// The state advances by a fixed odd constant and the output is a bijective
// mix of the counter, so independent substreams can be derived by hashing
// a key into the initial counter.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe under log().
  double next_positive() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stateless avalanche of a 64-bit word (the SplitMix64 output function).
std::uint64_t mix64(std::uint64_t x);

// Substream for edge (i, j) of the graph keyed by `seed`. Derivation is a
// pure function of (seed, i, j), so edges can be sampled in any order or in
// parallel without changing the result.
SplitMix64 edge_stream(std::uint64_t seed, std::uint64_t i, std::uint64_t j);

// Substream for a named task ("labels", "gmm-init", ...) under a run seed.
SplitMix64 sub_stream(std::uint64_t seed, std::uint64_t tag);

// Distribution samplers. All consume only the given stream.
double sample_gaussian(SplitMix64& rng, double mean, double stddev);
double sample_exponential(SplitMix64& rng, double rate);
long long sample_poisson(SplitMix64& rng, double rate);
double sample_gamma(SplitMix64& rng, double shape);  // unit scale
double sample_beta(SplitMix64& rng, double a, double b);

}  // namespace wse
