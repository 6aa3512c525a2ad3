#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "wse/matrix.hpp"
#include "wse/rng.hpp"

namespace wse {

struct Dirac {
  double value = 0.0;
};
struct Bernoulli {
  double p = 0.0;
};
struct Poisson {
  double rate = 0.0;
};
struct Gaussian {
  double mean = 0.0;
  double variance = 0.0;
};
struct BetaDist {
  double shape_a = 1.0;
  double shape_b = 1.0;
};
struct Exponential {
  double rate = 1.0;
};

class WeightDistribution;

struct ZeroInflated {
  double present_prob = 0.0;
  std::shared_ptr<const WeightDistribution> inner;
};

// Edge-weight distribution for one block pair. Factories validate the
// parameters; zero inflation nests exactly one level.
class WeightDistribution {
 public:
  using Value =
      std::variant<Dirac, Bernoulli, Poisson, Gaussian, BetaDist, Exponential, ZeroInflated>;

  static WeightDistribution dirac(double value);
  static WeightDistribution bernoulli(double p);
  static WeightDistribution poisson(double rate);
  static WeightDistribution gaussian(double mean, double variance);
  static WeightDistribution beta(double shape_a, double shape_b);
  static WeightDistribution exponential(double rate);
  static WeightDistribution zero_inflated(double present_prob, WeightDistribution inner);

  const Value& value() const { return v_; }
  bool operator==(const WeightDistribution& other) const;

 private:
  explicit WeightDistribution(Value v) : v_(std::move(v)) {}
  Value v_;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Analytic first and second central moments.
Moments moments(const WeightDistribution& dist);

double sample_weight(const WeightDistribution& dist, SplitMix64& rng);

// K-community weighted stochastic block model: membership probabilities pi
// and a symmetric K x K family of weight distributions.
class BlockModel {
 public:
  static BlockModel create(std::vector<double> pi, std::vector<WeightDistribution> h);

  int k() const { return k_; }
  const std::vector<double>& pi() const { return pi_; }
  const WeightDistribution& h(int a, int b) const { return h_[a * k_ + b]; }

 private:
  BlockModel(int k, std::vector<double> pi, std::vector<WeightDistribution> h)
      : k_(k), pi_(std::move(pi)), h_(std::move(h)) {}
  int k_;
  std::vector<double> pi_;
  std::vector<WeightDistribution> h_;
};

// Block mean matrix B and block variance matrix C.
struct BlockMoments {
  Matrix B;
  Matrix C;
};

BlockMoments block_moments(const BlockModel& model);

// Symmetric hollow weight matrix with optional community labels (1..K) and
// optional latent positions.
struct WeightedGraph {
  Matrix A;
  std::vector<int> z;  // empty when unknown
  Matrix X;            // 0 x 0 when unknown

  std::size_t n() const { return A.rows(); }
  bool has_labels() const { return !z.empty(); }
  bool has_latent() const { return X.rows() > 0; }
};

// Community labels (1-based) drawn i.i.d. from pi.
std::vector<int> sample_labels(const BlockModel& model, std::size_t n, std::uint64_t seed);

// Samples a graph: labels i.i.d. from pi, edge (i, j) from H(z_i, z_j) on
// its own substream, diagonal zero. Latent positions are filled with the
// canonical block-embedding rows, so the sample carries its own ground
// truth for alignment diagnostics.
WeightedGraph sample(const BlockModel& model, std::size_t n, std::uint64_t seed);

}  // namespace wse
