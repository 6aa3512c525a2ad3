#pragma once

#include <span>
#include <string>
#include <vector>

#include "wse/matrix.hpp"
#include "wse/model.hpp"
#include "wse/spectral.hpp"

namespace wse {

// Spectral embedding of the block mean matrix: X_B = U_B |Lambda_B|^{1/2}
// over the d nonzero eigenvalues, with signature (p, q). Rows of X_B are
// the canonical latent positions phi(1..K).
struct BlockEmbedding {
  Matrix X_B;  // K x d
  int p = 0;
  int q = 0;

  int dim() const { return p + q; }
};

// Asymptotic parameters of the embedding error law: the block embedding,
// the second-moment matrix Delta = X_B^T diag(pi) X_B and the limiting
// covariance Sigma_k of the sqrt(n)-scaled error for each community.
struct CltParams {
  Matrix X_B;
  int p = 0;
  int q = 0;
  Matrix Delta;
  std::vector<Matrix> Sigma;
};

enum class ChernoffMethod { embedding_space, block_space };

struct ChernoffPair {
  int k = 0;  // 1-based community indices
  int l = 0;
  double t_star = 0.0;
  double value = 0.0;
};

struct ChernoffReport {
  double C = 0.0;  // min over community pairs
  std::vector<ChernoffPair> pairs;
  ChernoffMethod method = ChernoffMethod::embedding_space;
};

// Default rank tolerance: eigenvalues below 1e-10 * ||B||_F count as zero.
BlockEmbedding block_embedding(const Matrix& b, double rel_tol = 1e-10);

CltParams clt_params(const BlockMoments& moments, std::span<const double> pi);

// Sigma_k for one community (1-based k).
Matrix clt_covariance(const BlockMoments& moments, std::span<const double> pi, int k);

struct GaussianChernoffResult {
  double value = 0.0;
  double t_star = 0.0;
};

// Chernoff information between N(mu1, g1) and N(mu2, g2), including the
// log-determinant term. The sup over t in (0,1) is located by a 512-point
// grid scan refined by golden section to |dt| <= 1e-10.
GaussianChernoffResult gaussian_chernoff(std::span<const double> mu1, const Matrix& g1,
                                         std::span<const double> mu2, const Matrix& g2);

// Size-adjusted Chernoff information: the mean-separation term only, per
// community pair, minimized over pairs. block_space evaluates the reduced
// K-dimensional quadratic form (requires B invertible); embedding_space
// works from the CLT covariances.
ChernoffReport size_adjusted_chernoff(const BlockMoments& moments, std::span<const double> pi,
                                      ChernoffMethod method);

// block_space when B is invertible, embedding_space otherwise.
ChernoffReport size_adjusted_chernoff_auto(const BlockMoments& moments,
                                           std::span<const double> pi);

double chernoff_ratio(double c1, double c2);

// Closed form for the two-community anomaly block structure
// B = [[b1,b2],[b2,b2]], C = [[c1,c2],[c2,c2]] with pi = (pi1, 1-pi1).
double closed_form_anomaly_chernoff(double b1, double b2, double c1, double c2, double pi1);

// B' = a*B + b*11^T, C' = a^2 * C.
BlockMoments affine_block_moments(const BlockMoments& moments, double a, double b);

struct Signature {
  int d = 0;
  int p = 0;
  int q = 0;
};

Signature signature_of(const Matrix& b);  // tol = 1e-10 * ||B||_F
Signature signature_of(const Matrix& b, double tol);

// Verifies the eigenvalue interlacing of B' = a*B + b*11^T (a, b > 0)
// against the spectrum of a*B.
bool interlacing_check(const Matrix& b, double a, double bshift);

// Embedding of P = E(A | Z) for a weighted SBM with labels z (1-based) and
// block mean matrix B, computed exactly through the K x K reduced
// eigenproblem. Matches spectral_embed(P, d) including sign conventions.
Embedding exact_p_embedding(std::span<const int> z, const Matrix& b, double rel_tol = 1e-10);

}  // namespace wse
