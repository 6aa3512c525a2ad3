#include "wse/align.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wse/errors.hpp"

namespace wse {

namespace {

void check_orthonormal(const Matrix& u, const char* name) {
  const Matrix g = transpose_multiply(u, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)));
  if (worst > 1e-8) {
    std::ostringstream msg;
    msg << name << ": columns not orthonormal (max deviation " << worst << ")";
    throw std::invalid_argument(msg.str());
  }
}

// Thin SVD of a square matrix through the symmetric augmentation
// [[0, S], [S^T, 0]], reusing the one symmetric eigensolver.
struct Svd {
  Matrix u;
  Matrix v;
  std::vector<double> sigma;
};

Svd svd_square(const Matrix& s) {
  const std::size_t d = s.rows();
  Matrix aug(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      aug(i, d + j) = s(i, j);
      aug(d + j, i) = s(i, j);
    }
  const EigenDecomposition ed = eig_symmetric(aug);
  Svd out;
  out.u = Matrix(d, d);
  out.v = Matrix(d, d);
  out.sigma.resize(d);
  // Eigenvalues come sorted descending; the top d are +sigma_i with
  // eigenvectors (u; v)/sqrt(2).
  const double root2 = std::sqrt(2.0);
  for (std::size_t c = 0; c < d; ++c) {
    out.sigma[c] = ed.values[c];
    for (std::size_t i = 0; i < d; ++i) {
      out.u(i, c) = root2 * ed.vectors(i, c);
      out.v(i, c) = root2 * ed.vectors(d + i, c);
    }
  }
  return out;
}

Matrix unscaled_basis(const Embedding& e) {
  Matrix u = e.X;
  for (std::size_t c = 0; c < u.cols(); ++c) {
    const double s = 1.0 / std::sqrt(std::fabs(e.values[c]));
    for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) *= s;
  }
  return u;
}

Matrix indefinite_product(const Matrix& x, int p) {
  // X I_{p,q} X^T
  Matrix flipped = x;
  for (std::size_t c = static_cast<std::size_t>(p); c < x.cols(); ++c)
    for (std::size_t i = 0; i < x.rows(); ++i) flipped(i, c) = -flipped(i, c);
  return multiply(x, transpose(flipped));
}

}  // namespace

IndefiniteMap make_indefinite_map(Matrix q, int p, int qq) {
  const Matrix ipq = indefinite_identity(p, qq);
  const Matrix test = multiply(q, multiply(ipq, transpose(q)));
  double worst = 0.0;
  for (std::size_t i = 0; i < test.rows(); ++i)
    for (std::size_t j = 0; j < test.cols(); ++j)
      worst = std::max(worst, std::fabs(test(i, j) - ipq(i, j)));
  if (worst > 1e-8) {
    std::ostringstream msg;
    msg << "map is not in O(" << p << "," << qq << "): max identity deviation " << worst;
    throw NumericError(msg.str());
  }
  return {std::move(q), p, qq};
}

Matrix opq_inverse(const IndefiniteMap& map) {
  const Matrix ipq = indefinite_identity(map.p, map.q);
  return multiply(ipq, multiply(transpose(map.Q), ipq));
}

IndefiniteMap procrustes_w(const Matrix& u_p, const Matrix& u_a, int p, int q) {
  const std::size_t d = u_p.cols();
  if (u_a.cols() != d || u_a.rows() != u_p.rows())
    throw std::invalid_argument("procrustes_w: shape mismatch");
  if (static_cast<std::size_t>(p + q) != d)
    throw std::invalid_argument("procrustes_w: signature must sum to d");
  check_orthonormal(u_p, "procrustes_w: U_P");
  check_orthonormal(u_a, "procrustes_w: U_A");

  const Matrix cross = transpose_multiply(u_p, u_a);
  Matrix s(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double sign_i = static_cast<int>(i) < p ? 1.0 : -1.0;
      const double sign_j = static_cast<int>(j) < p ? 1.0 : -1.0;
      s(i, j) = cross(i, j) + sign_i * cross(i, j) * sign_j;
    }

  const Svd svd = svd_square(s);
  const double sigma_max = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  if (svd.sigma.back() <= 1e-10 * std::max(1.0, sigma_max)) {
    std::ostringstream msg;
    msg << "procrustes_w: cross-Gram matrix is rank deficient (sigma_min = " << svd.sigma.back()
        << "); alignment degenerate";
    throw NumericError(msg.str());
  }
  Matrix w = multiply(svd.u, transpose(svd.v));

  // The solution is block-diagonal over the (p, q) split; enforce within
  // tolerance and fail loudly otherwise.
  double off = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const bool same_block = (static_cast<int>(i) < p) == (static_cast<int>(j) < p);
      if (!same_block) off = std::max(off, std::fabs(w(i, j)));
    }
  if (off > 1e-8) {
    std::ostringstream msg;
    msg << "procrustes_w: solution is not block-diagonal (max off-block entry " << off << ")";
    throw NumericError(msg.str());
  }
  return make_indefinite_map(std::move(w), p, q);
}

IndefiniteMap latent_map(const Matrix& x, const Matrix& x_p, int p, int q) {
  const std::size_t d = x.cols();
  if (x_p.cols() != d || x_p.rows() != x.rows())
    throw std::invalid_argument("latent_map: shape mismatch");

  const Matrix gram = transpose_multiply(x, x);
  const EigenDecomposition ed = eig_symmetric(gram);
  const double lam_max = ed.values.front();
  if (ed.values.back() <= 1e-12 * std::max(1.0, lam_max))
    throw NumericError("latent_map: X is rank deficient (singular latent positions)");

  const Matrix lhs = indefinite_product(x, p);
  const Matrix rhs = indefinite_product(x_p, p);
  const double rel = frobenius_norm(subtract(lhs, rhs)) / std::max(frobenius_norm(rhs), 1e-300);
  if (rel > 1e-6) {
    std::ostringstream msg;
    msg << "latent_map: X and X_P do not generate the same expectation matrix (relative "
           "deviation "
        << rel << ")";
    throw std::invalid_argument(msg.str());
  }

  // (X^T X)^{-1} X^T X_P via the eigendecomposition of the Gram matrix.
  Matrix gram_inv(d, d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        gram_inv(i, j) += ed.vectors(i, c) * ed.vectors(j, c) / ed.values[c];
  Matrix qx = multiply(gram_inv, transpose_multiply(x, x_p));

  const Matrix fit = multiply(x, qx);
  const double fit_err =
      frobenius_norm(subtract(fit, x_p)) / std::max(frobenius_norm(x_p), 1e-300);
  if (fit_err > 1e-6) {
    std::ostringstream msg;
    msg << "latent_map: residual ||X Q_X - X_P|| too large (relative " << fit_err << ")";
    throw NumericError(msg.str());
  }
  return make_indefinite_map(std::move(qx), p, q);
}

OracleAlignment oracle_align(const Embedding& emb_a, const Embedding& emb_p, const Matrix& x) {
  if (emb_a.dim() != emb_p.dim() || emb_a.p != emb_p.p || emb_a.q != emb_p.q)
    throw std::invalid_argument("oracle_align: embeddings must share (d, p, q)");
  if (x.rows() != emb_a.X.rows() || x.cols() != emb_a.X.cols())
    throw std::invalid_argument("oracle_align: latent positions must be n x d");

  OracleAlignment out;
  out.w = procrustes_w(unscaled_basis(emb_p), unscaled_basis(emb_a), emb_a.p, emb_a.q);
  out.q_x = latent_map(x, emb_p.X, emb_p.p, emb_p.q);

  const Matrix qx_inv = opq_inverse(out.q_x);
  Matrix qn = multiply(transpose(out.w.Q), qx_inv);
  out.q_n = make_indefinite_map(std::move(qn), emb_a.p, emb_a.q);
  out.aligned = multiply(emb_a.X, out.q_n.Q);
  return out;
}

double two_to_infinity(const Matrix& y, const Matrix& x) {
  if (y.rows() != x.rows() || y.cols() != x.cols())
    throw std::invalid_argument("two_to_infinity: shape mismatch");
  return max_row_norm(subtract(y, x));
}

}  // namespace wse
