#pragma once

#include <string>
#include <vector>

#include "wse/model.hpp"

namespace wse {

// Entrywise edge-weight transforms. P-value graphs store 1 - p, so a
// missing edge (p = 1) is weight 0 and "p below threshold tau" reads as
// "stored weight above 1 - tau".
struct EdgeTransform {
  enum class Kind {
    affine,
    presence_indicator,
    log_magnitude,
    pvalue_threshold,
    pvalue_log_complement,
  };

  Kind kind = Kind::affine;
  double a = 1.0;           // affine scale
  double b = 0.0;           // affine shift
  double tau = 0.05;        // p-value threshold
  double log_cap = 745.0;   // cap for -log(1 - w) at w = 1

  static EdgeTransform affine(double a, double b);
  static EdgeTransform presence_indicator();
  static EdgeTransform log_magnitude();
  static EdgeTransform pvalue_threshold(double tau);
  static EdgeTransform pvalue_log_complement(double cap = 745.0);
};

struct TransformStats {
  std::size_t capped = 0;  // entries clamped by the log-complement cap
};

// Applies the transform to every off-diagonal entry, preserving symmetry
// and the hollow diagonal. Community labels carry over; latent positions do
// not (they belong to the original representation).
WeightedGraph transform_graph(const WeightedGraph& g, const EdgeTransform& t,
                              TransformStats* stats = nullptr);

// Block moments of the three p-value representations (raw complement,
// log complement, threshold) for the two-community anomaly model:
// community 1 anomalous with Beta(1, alpha) complement p-values, presence
// probability rho, threshold tau.
struct PValueModels {
  std::vector<double> pi;  // (pi1, 1 - pi1)
  BlockMoments p;          // stored complements 1 - p
  BlockMoments l;          // -log p
  BlockMoments t;          // threshold indicator
};

PValueModels pvalue_models(double rho, double alpha, double pi1, double tau);

// The zero-inflated Beta block model generating the raw complement matrix.
BlockModel pvalue_block_model(double rho, double alpha, double pi1);

// Poisson count model with intra rate lambda1 / inter rate lambda2, and its
// presence-indicator companion.
struct PoissonPairModels {
  BlockMoments poisson;
  BlockMoments presence;
  std::vector<std::string> warnings;
};

PoissonPairModels poisson_pair_models(double lambda1, double lambda2);

BlockModel poisson_block_model(double lambda1, double lambda2);

}  // namespace wse
