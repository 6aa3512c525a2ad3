#include "wse/predict.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wse/errors.hpp"

namespace wse {

double dot_predict(const Embedding& emb, int i, int j) {
  const int n = static_cast<int>(emb.X.rows());
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("dot_predict: node index out of range");
  if (i == j) throw std::invalid_argument("dot_predict: i and j must differ");
  const double* xi = emb.X.row(i);
  const double* xj = emb.X.row(j);
  double s = 0.0;
  for (int c = 0; c < emb.dim(); ++c) s += (c < emb.p ? 1.0 : -1.0) * xi[c] * xj[c];
  return s;
}

std::vector<double> hybrid_predict(const WeightedGraph& day0, const Embedding& emb,
                                   bool magnitude, std::span<const std::pair<int, int>> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i == j) throw std::invalid_argument("hybrid_predict: self-loops are not predictable");
    const double count = day0.A(i, j);
    if (count > 0.0) {
      out.push_back(magnitude ? std::log(count) : count);
    } else {
      out.push_back(dot_predict(emb, i, j));
    }
  }
  return out;
}

namespace {

std::vector<double> mean_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * (i + j) + 1.0;  // mean of 1-based ranks i+1..j+1
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 observations");
  const std::vector<double> rx = mean_ranks(x);
  const std::vector<double> ry = mean_ranks(y);
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw NumericError("spearman: correlation undefined for a constant input vector");
  return sxy / std::sqrt(sxx * syy);
}

TwoDayData two_day_synthetic(std::size_t n, std::uint64_t seed, const TwoDayOptions& options) {
  if (n < 2) throw std::invalid_argument("two_day_synthetic: need n >= 2");
  const int k = options.communities;
  TwoDayData out;
  out.day0.A = Matrix(n, n);
  out.day1.A = Matrix(n, n);
  out.day0.z.resize(n);

  SplitMix64 label_rng = sub_stream(seed, /*tag=*/0x74776f646179ULL);  // "twoday"
  for (std::size_t i = 0; i < n; ++i)
    out.day0.z[i] = 1 + static_cast<int>(label_rng.next_double() * k) % k;
  out.day1.z = out.day0.z;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      SplitMix64 rng = edge_stream(seed, i, j);
      const bool intra = out.day0.z[i] == out.day0.z[j];
      const double presence = options.presence * (intra ? 2.0 : 1.0);
      if (rng.next_double() >= presence) continue;
      // Shared heavy-tailed intensity; day counts are independent Poisson
      // draws around it.
      const double boost = intra ? options.intra_boost : 1.0;
      const double rate = options.base_rate * boost *
                          std::exp(options.tail_sigma * sample_gaussian(rng, 0.0, 1.0));
      const double c0 = static_cast<double>(sample_poisson(rng, rate));
      const double c1 = static_cast<double>(sample_poisson(rng, rate));
      out.day0.A(i, j) = out.day0.A(j, i) = c0;
      out.day1.A(i, j) = out.day1.A(j, i) = c1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> positive_pairs(const WeightedGraph& g) {
  std::vector<std::pair<int, int>> out;
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.A(i, j) > 0.0) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return out;
}

PredictionSet evaluate_predictions(const WeightedGraph& day0, const WeightedGraph& day1,
                                   const Embedding& emb_count, const Embedding& emb_magnitude,
                                   PredictMode mode,
                                   std::span<const std::pair<int, int>> pairs) {
  PredictionSet out;
  out.mode = mode;
  out.pairs.reserve(pairs.size());
  const bool magnitude =
      mode == PredictMode::magnitude || mode == PredictMode::hybrid_magnitude;
  const bool hybrid =
      mode == PredictMode::hybrid_count || mode == PredictMode::hybrid_magnitude;
  const Embedding& emb = magnitude ? emb_magnitude : emb_count;

  std::vector<double> predicted;
  if (hybrid) {
    predicted = hybrid_predict(day0, emb, magnitude, pairs);
  } else {
    predicted.reserve(pairs.size());
    for (const auto& [i, j] : pairs) predicted.push_back(dot_predict(emb, i, j));
  }

  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [i, j] = pairs[idx];
    const double w1 = day1.A(i, j);
    const double observed = magnitude ? (w1 > 0.0 ? std::log(w1) : 0.0) : w1;
    out.pairs.push_back({i, j, predicted[idx], observed});
  }
  return out;
}

}  // namespace wse
