#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wse/matrix.hpp"
#include "wse/theory.hpp"

namespace wse {

struct GmmFit {
  int k = 0;
  std::vector<double> weights;
  Matrix means;                      // K x d
  std::vector<Matrix> covariances;   // K of d x d
  Matrix responsibilities;           // n x K, row-stochastic
  std::vector<double> loglik_trace;  // per-iteration, non-decreasing
  bool converged = false;
  int reinit_count = 0;      // component-collapse restarts
  bool floor_applied = false;  // covariance floor changed some eigenvalue

  std::vector<int> hard_assignments() const;  // 1-based labels
};

// EM with full covariances. Initialization is k-means++ seeding turned into
// hard responsibilities; components that collapse are reinitialized from a
// random responsibility split and counted.
GmmFit fit_gmm(const Matrix& x, int k, std::uint64_t seed, double tol = 1e-8,
               int max_iter = 500);

// EM started from the given responsibilities; this is the initialization
// used by the linear-invariance property, which must be specified in data
// space rather than through positions.
GmmFit fit_gmm_from_responsibilities(const Matrix& x, const Matrix& r0, std::uint64_t seed,
                                     double tol = 1e-8, int max_iter = 500);

// Adjusted Rand index with the permutation-model expectation correction.
double ari(std::span<const int> labels_a, std::span<const int> labels_b);

// Chi-square quantile via Wilson-Hilferty start and Newton polish.
double chi_square_quantile(double prob, int dof);

struct CommunityCltReport {
  int community = 0;
  std::size_t count = 0;
  bool skipped = false;        // fewer than d+1 members
  std::vector<double> mean;    // of the sqrt(n)-scaled residuals
  Matrix covariance;           // sample covariance of the residuals
  double rel_frobenius = 0.0;  // ||S - Sigma_k||_F / ||Sigma_k||_F
  double coverage95 = 0.0;     // fraction inside the 0.95 Mahalanobis ellipsoid
};

// Compares sqrt(n)-scaled aligned residuals against the asymptotic law:
// per community, sample mean/covariance, distance to Sigma_k and empirical
// 95% ellipsoid coverage.
std::vector<CommunityCltReport> clt_check(const Matrix& aligned, const Matrix& x,
                                          std::span<const int> z, const CltParams& params);

}  // namespace wse
