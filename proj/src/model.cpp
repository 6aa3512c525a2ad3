#include "wse/model.hpp"

#include <cmath>
#include <stdexcept>

#include "wse/theory.hpp"

namespace wse {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_probability(double p, const char* msg) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, msg);
}

// Raw (non-central) first and second moments.
struct RawMoments {
  double m1 = 0.0;
  double m2 = 0.0;
};

RawMoments raw_moments(const WeightDistribution& dist) {
  return std::visit(
      [](const auto& d) -> RawMoments {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Dirac>) {
          return {d.value, d.value * d.value};
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return {d.p, d.p};
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return {d.rate, d.rate + d.rate * d.rate};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return {d.mean, d.variance + d.mean * d.mean};
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          const double s = d.shape_a + d.shape_b;
          return {d.shape_a / s, d.shape_a * (d.shape_a + 1.0) / (s * (s + 1.0))};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return {1.0 / d.rate, 2.0 / (d.rate * d.rate)};
        } else {
          static_assert(std::is_same_v<T, ZeroInflated>);
          const RawMoments inner = raw_moments(*d.inner);
          return {d.present_prob * inner.m1, d.present_prob * inner.m2};
        }
      },
      dist.value());
}

}  // namespace

WeightDistribution WeightDistribution::dirac(double value) {
  require(std::isfinite(value), "dirac: value must be finite");
  return WeightDistribution(Dirac{value});
}

WeightDistribution WeightDistribution::bernoulli(double p) {
  require_probability(p, "bernoulli: p must lie in [0,1]");
  return WeightDistribution(Bernoulli{p});
}

WeightDistribution WeightDistribution::poisson(double rate) {
  require(std::isfinite(rate) && rate >= 0.0, "poisson: rate must be >= 0");
  return WeightDistribution(Poisson{rate});
}

WeightDistribution WeightDistribution::gaussian(double mean, double variance) {
  require(std::isfinite(mean), "gaussian: mean must be finite");
  require(std::isfinite(variance) && variance >= 0.0, "gaussian: variance must be >= 0");
  return WeightDistribution(Gaussian{mean, variance});
}

WeightDistribution WeightDistribution::beta(double shape_a, double shape_b) {
  require(std::isfinite(shape_a) && shape_a > 0.0, "beta: shape_a must be > 0");
  require(std::isfinite(shape_b) && shape_b > 0.0, "beta: shape_b must be > 0");
  return WeightDistribution(BetaDist{shape_a, shape_b});
}

WeightDistribution WeightDistribution::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
  return WeightDistribution(Exponential{rate});
}

WeightDistribution WeightDistribution::zero_inflated(double present_prob,
                                                     WeightDistribution inner) {
  require_probability(present_prob, "zero_inflated: present_prob must lie in [0,1]");
  require(!std::holds_alternative<ZeroInflated>(inner.value()),
          "zero_inflated: nesting depth must be exactly one");
  return WeightDistribution(
      ZeroInflated{present_prob, std::make_shared<WeightDistribution>(std::move(inner))});
}

bool WeightDistribution::operator==(const WeightDistribution& other) const {
  if (v_.index() != other.v_.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(other.v_);
        if constexpr (std::is_same_v<T, Dirac>) {
          return a.value == b.value;
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return a.p == b.p;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return a.rate == b.rate;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return a.mean == b.mean && a.variance == b.variance;
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          return a.shape_a == b.shape_a && a.shape_b == b.shape_b;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return a.rate == b.rate;
        } else {
          static_assert(std::is_same_v<T, ZeroInflated>);
          return a.present_prob == b.present_prob && *a.inner == *b.inner;
        }
      },
      v_);
}

Moments moments(const WeightDistribution& dist) {
  const RawMoments raw = raw_moments(dist);
  return {raw.m1, raw.m2 - raw.m1 * raw.m1};
}

double sample_weight(const WeightDistribution& dist, SplitMix64& rng) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Dirac>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.next_double() < d.p ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return static_cast<double>(sample_poisson(rng, d.rate));
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return sample_gaussian(rng, d.mean, std::sqrt(d.variance));
        } else if constexpr (std::is_same_v<T, BetaDist>) {
          return sample_beta(rng, d.shape_a, d.shape_b);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return sample_exponential(rng, d.rate);
        } else {
          static_assert(std::is_same_v<T, ZeroInflated>);
          if (rng.next_double() >= d.present_prob) return 0.0;
          return sample_weight(*d.inner, rng);
        }
      },
      dist.value());
}

BlockModel BlockModel::create(std::vector<double> pi, std::vector<WeightDistribution> h) {
  const int k = static_cast<int>(pi.size());
  require(k >= 1, "block model: need at least one community");
  require(h.size() == static_cast<std::size_t>(k) * k, "block model: H must be K x K");
  double sum = 0.0;
  for (double p : pi) {
    require(std::isfinite(p) && p >= 0.0, "block model: pi entries must be >= 0");
    sum += p;
  }
  require(std::fabs(sum - 1.0) <= 1e-12, "block model: pi must sum to 1 within 1e-12");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      require(h[a * k + b] == h[b * k + a], "block model: H must be structurally symmetric");
  return BlockModel(k, std::move(pi), std::move(h));
}

BlockMoments block_moments(const BlockModel& model) {
  const int k = model.k();
  BlockMoments out{Matrix(k, k), Matrix(k, k)};
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const Moments m = moments(model.h(a, b));
      out.B(a, b) = m.mean;
      out.B(b, a) = m.mean;
      out.C(a, b) = m.variance;
      out.C(b, a) = m.variance;
    }
  }
  return out;
}

std::vector<int> sample_labels(const BlockModel& model, std::size_t n, std::uint64_t seed) {
  SplitMix64 label_rng = sub_stream(seed, /*tag=*/0x6c6162656c73ULL);  // "labels"
  const auto& pi = model.pi();
  std::vector<int> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = label_rng.next_double();
    double acc = 0.0;
    int label = model.k();
    for (int c = 0; c < model.k(); ++c) {
      acc += pi[c];
      if (u < acc) {
        label = c + 1;
        break;
      }
    }
    z[i] = std::min(label, model.k());
  }
  return z;
}

WeightedGraph sample(const BlockModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample: need n >= 2");
  WeightedGraph g;
  g.A = Matrix(n, n);
  g.z = sample_labels(model, n, seed);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      SplitMix64 rng = edge_stream(seed, i, j);
      const double w = sample_weight(model.h(g.z[i] - 1, g.z[j] - 1), rng);
      g.A(i, j) = w;
      g.A(j, i) = w;
    }
  }

  // Canonical latent positions phi(z_i) from the block embedding of B.
  const BlockMoments bm = block_moments(model);
  if (max_abs(bm.B) > 0.0) {
    const BlockEmbedding be = block_embedding(bm.B);
    g.X = Matrix(n, be.X_B.cols());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < be.X_B.cols(); ++c) g.X(i, c) = be.X_B(g.z[i] - 1, c);
  }
  return g;
}

}  // namespace wse
