#pragma once

#include "wse/matrix.hpp"
#include "wse/spectral.hpp"

namespace wse {

// Member of the indefinite orthogonal group O(p,q):
// Q I_{p,q} Q^T = I_{p,q} within 1e-8 (checked at construction).
struct IndefiniteMap {
  Matrix Q;
  int p = 0;
  int q = 0;
};

IndefiniteMap make_indefinite_map(Matrix q, int p, int qq);

// Q^{-1} = I_{p,q} Q^T I_{p,q}; exact on O(p,q), no general inversion.
Matrix opq_inverse(const IndefiniteMap& map);

// Solves the one-mode orthogonal Procrustes problem between the subspace
// bases of P and A: W = W1 W2^T from the SVD of
// U_P^T U_A + I_{p,q} U_P^T U_A I_{p,q}. W lies in O(d) and O(p,q) and is
// block-diagonal with p x p and q x q blocks.
IndefiniteMap procrustes_w(const Matrix& u_p, const Matrix& u_a, int p, int q);

// Q_X with X_P = X Q_X, computed as (X^T X)^{-1} X^T X_P.
IndefiniteMap latent_map(const Matrix& x, const Matrix& x_p, int p, int q);

struct OracleAlignment {
  IndefiniteMap w;    // aligns X_A with X_P
  IndefiniteMap q_x;  // aligns X with X_P
  IndefiniteMap q_n;  // composite W^T Q_X^{-1}
  Matrix aligned;     // X_A Q_n
};

// Oracle alignment of the sample embedding onto the latent positions:
// aligned = X_A W^T Q_X^{-1}.
OracleAlignment oracle_align(const Embedding& emb_a, const Embedding& emb_p, const Matrix& x);

// Maximum row-wise Euclidean norm of Y - X.
double two_to_infinity(const Matrix& y, const Matrix& x);

}  // namespace wse
