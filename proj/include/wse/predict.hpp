#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wse/model.hpp"
#include "wse/spectral.hpp"

namespace wse {

enum class PredictMode { raw_count, magnitude, hybrid_count, hybrid_magnitude };

struct Prediction {
  int i = 0;
  int j = 0;
  double predicted = 0.0;
  double observed = 0.0;
};

struct PredictionSet {
  std::vector<Prediction> pairs;  // i < j, unique
  PredictMode mode = PredictMode::raw_count;
};

// Indefinite inner product of embedding rows i and j.
double dot_predict(const Embedding& emb, int i, int j);

// Hybrid predictor: the observed day-0 value where an edge was present,
// the embedding inner product where it was not. `day0` holds raw counts;
// in magnitude mode the observed value is log(count).
std::vector<double> hybrid_predict(const WeightedGraph& day0, const Embedding& emb,
                                   bool magnitude, std::span<const std::pair<int, int>> pairs);

// Spearman's rank correlation with mean ranks on ties.
double spearman(std::span<const double> x, std::span<const double> y);

// Synthetic two-day traffic: day-0 and day-1 counts drawn independently
// around shared per-pair rates with heavy-tailed (log-normal) intensity, so
// the count matrix has the dominant-entry pathology that motivates the
// magnitude representation.
struct TwoDayData {
  WeightedGraph day0;
  WeightedGraph day1;
};

struct TwoDayOptions {
  int communities = 3;
  double presence = 0.06;       // per-pair edge probability
  double base_rate = 40.0;      // median count scale for present pairs
  double intra_boost = 5.0;     // multiplier inside a community
  double tail_sigma = 2.2;      // log-normal sigma of the shared intensity
};

TwoDayData two_day_synthetic(std::size_t n, std::uint64_t seed,
                             const TwoDayOptions& options = {});

// Evaluation pairs: all (i, j) with positive day-1 weight.
std::vector<std::pair<int, int>> positive_pairs(const WeightedGraph& g);

// Builds the prediction set for one mode and fills observed day-1 values
// (log scale for the magnitude modes).
PredictionSet evaluate_predictions(const WeightedGraph& day0, const WeightedGraph& day1,
                                   const Embedding& emb_count, const Embedding& emb_magnitude,
                                   PredictMode mode,
                                   std::span<const std::pair<int, int>> pairs);

}  // namespace wse
