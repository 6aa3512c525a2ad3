#include "wse/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wse/errors.hpp"
#include "wse/rng.hpp"

namespace wse {

namespace {

constexpr int kMaxQlIterations = 50;

double pythag(double a, double b) {
  const double absa = std::fabs(a);
  const double absb = std::fabs(b);
  if (absa > absb) {
    const double r = absb / absa;
    return absa * std::sqrt(1.0 + r * r);
  }
  if (absb == 0.0) return 0.0;
  const double r = absa / absb;
  return absb * std::sqrt(1.0 + r * r);
}

// Householder reduction to tridiagonal form. `a` must hold a symmetric
// matrix; the active leading block is kept symmetric throughout so the
// inner loops run over contiguous rows. On return d holds the diagonal,
// e the subdiagonal (e[i] couples rows i-1 and i, e[0] = 0), and the
// reflector for step i stays in a.row(i)[0..i-1] with coefficient h[i].
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& h) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  h.assign(n, 0.0);
  if (n == 0) return;
  std::vector<double> p(n), q(n);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double* ui = a.row(i);
    double scale = 0.0;
    for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(ui[k]);
    if (i == 1 || scale == 0.0) {
      e[i] = ui[l];
      continue;
    }
    double hh = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      ui[k] /= scale;
      hh += ui[k] * ui[k];
    }
    const double f = ui[l];
    const double g = f >= 0.0 ? -std::sqrt(hh) : std::sqrt(hh);
    e[i] = scale * g;
    hh -= f * g;
    ui[l] = f - g;
    h[i] = hh;

    for (std::size_t j = 0; j <= l; ++j) {
      const double* aj = a.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k <= l; ++k) s += aj[k] * ui[k];
      p[j] = s / hh;
    }
    double kk = 0.0;
    for (std::size_t j = 0; j <= l; ++j) kk += p[j] * ui[j];
    kk /= 2.0 * hh;
    for (std::size_t j = 0; j <= l; ++j) q[j] = p[j] - kk * ui[j];

    for (std::size_t j = 0; j <= l; ++j) {
      double* aj = a.row(j);
      const double qj = q[j];
      const double uj = ui[j];
      for (std::size_t k = 0; k <= l; ++k) aj[k] -= qj * ui[k] + uj * q[k];
    }
  }
  for (std::size_t j = 0; j < n; ++j) d[j] = a(j, j);
}

// Maps tridiagonal-basis vectors (rows of `rows`) back to the original
// basis by applying the stored reflectors in ascending step order.
void apply_reflectors_rows(const Matrix& a, const std::vector<double>& h, Matrix& rows) {
  const std::size_t n = a.rows();
  for (std::size_t i = 2; i + 1 <= n; ++i) {
    if (h[i] == 0.0) continue;
    const double* ui = a.row(i);
    const double inv_h = 1.0 / h[i];
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      double* z = rows.row(r);
      double w = 0.0;
      for (std::size_t k = 0; k < i; ++k) w += ui[k] * z[k];
      w *= inv_h;
      for (std::size_t k = 0; k < i; ++k) z[k] -= w * ui[k];
    }
  }
}

// Implicit-shift QL on the tridiagonal (d, e). e uses the same convention
// as tridiagonalize(). When vt is non-null its ROWS are treated as the
// eigenvector basis being accumulated (row i pairs with d[i]).
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix* vt) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  // Re-index so e[i] couples d[i] and d[i+1].
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlIterations) {
          std::ostringstream msg;
          msg << "QL iteration failed to converge for eigenvalue index " << l << " after "
              << kMaxQlIterations << " iterations (n=" << n << ")";
          throw NonConvergenceError(msg.str());
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = pythag(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (vt != nullptr) {
            double* zi = vt->row(i);
            double* zj = vt->row(i + 1);
            for (std::size_t k = 0; k < vt->cols(); ++k) {
              f = zj[k];
              zj[k] = s * zi[k] + c * f;
              zi[k] = c * zi[k] - s * f;
            }
          }
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Largest-magnitude entry made positive, ties broken by lowest index.
void canonicalize_sign(double* v, std::size_t n) {
  std::size_t best = 0;
  double mag = std::fabs(v[0]);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::fabs(v[i]) > mag) {
      mag = std::fabs(v[i]);
      best = i;
    }
  }
  if (v[best] < 0.0) {
    for (std::size_t i = 0; i < n; ++i) v[i] = -v[i];
  }
}

double tridiag_scale(const std::vector<double>& d, const std::vector<double>& e) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double row = std::fabs(d[i]);
    if (i > 0) row += std::fabs(e[i]);
    if (i + 1 < d.size()) row += std::fabs(e[i + 1]);
    m = std::max(m, row);
  }
  return m;
}

// Solves (T - lam I) x = b for the tridiagonal T given by (d, e) using
// Gaussian elimination with partial pivoting; overwrites b with x.
void shifted_tridiag_solve(const std::vector<double>& d, const std::vector<double>& e, double lam,
                           double tiny, std::vector<double>& b, std::vector<double>& du,
                           std::vector<double>& u1, std::vector<double>& u2) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = d[i] - lam;
    u1[i] = i + 1 < n ? e[i + 1] : 0.0;
    u2[i] = 0.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double sub = e[i + 1];
    if (std::fabs(du[i]) >= std::fabs(sub)) {
      if (std::fabs(du[i]) < tiny) du[i] = du[i] < 0.0 ? -tiny : tiny;
      const double m = sub / du[i];
      du[i + 1] -= m * u1[i];
      u1[i + 1] -= m * u2[i];
      b[i + 1] -= m * b[i];
    } else {
      const double m = du[i] / sub;
      const double t_du = du[i + 1];
      const double t_u1 = u1[i + 1];
      du[i] = sub;
      const double old_u1 = u1[i];
      const double old_u2 = u2[i];
      u1[i] = t_du;
      u2[i] = t_u1;
      du[i + 1] = old_u1 - m * t_du;
      u1[i + 1] = old_u2 - m * t_u1;
      const double tb = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tb - m * b[i];
    }
  }
  if (std::fabs(du[n - 1]) < tiny) du[n - 1] = du[n - 1] < 0.0 ? -tiny : tiny;
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    if (ii + 1 < n) s -= u1[ii] * b[ii + 1];
    if (ii + 2 < n) s -= u2[ii] * b[ii + 2];
    b[ii] = s / du[ii];
  }
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
}

// Inverse iteration for one eigenvector of the tridiagonal (d, e), with
// modified Gram-Schmidt against earlier members of the same eigenvalue
// cluster each sweep.
std::vector<double> tridiag_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                        double lam, const std::vector<std::vector<double>>& cluster,
                                        SplitMix64& rng) {
  const std::size_t n = d.size();
  const double scale = std::max(tridiag_scale(d, e), 1.0);
  const double tiny = DBL_EPSILON * scale;
  std::vector<double> x(n), du(n), u1(n), u2(n);
  for (double& v : x) v = rng.next_double() - 0.5;
  normalize(x);
  for (int sweep = 0; sweep < 4; ++sweep) {
    shifted_tridiag_solve(d, e, lam, tiny, x, du, u1, u2);
    for (const auto& prev : cluster) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += prev[k] * x[k];
      for (std::size_t k = 0; k < n; ++k) x[k] -= dot * prev[k];
    }
    normalize(x);
  }
  return x;
}

struct TridiagFactorization {
  Matrix housed;          // reflectors in strictly-lower rows
  std::vector<double> h;  // reflector coefficients
  std::vector<double> diag;
  std::vector<double> off;
};

TridiagFactorization reduce(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("eig: matrix must be square and non-empty");
  }
  if (!is_symmetric(m, 1e-12 * std::max(1.0, max_abs(m)))) {
    throw std::invalid_argument("eig: matrix is not symmetric within tolerance");
  }
  TridiagFactorization f;
  f.housed = m;
  tridiagonalize(f.housed, f.diag, f.off, f.h);
  return f;
}

}  // namespace

EigenDecomposition eig_symmetric(const Matrix& m) {
  const std::size_t n = m.rows();
  TridiagFactorization f = reduce(m);

  std::vector<double> values = f.diag;
  std::vector<double> off = f.off;
  Matrix vt = Matrix::identity(n);
  ql_implicit(values, off, &vt);
  apply_reflectors_rows(f.housed, f.h, vt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = values[src];
    canonicalize_sign(vt.row(src), n);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = vt(src, r);
  }
  return out;
}

Embedding spectral_embed(const Matrix& m, std::size_t d) {
  const std::size_t n = m.rows();
  if (d < 1 || d > n) throw std::invalid_argument("spectral_embed: need 1 <= d <= n");
  TridiagFactorization f = reduce(m);

  std::vector<double> values = f.diag;
  std::vector<double> off = f.off;
  ql_implicit(values, off, nullptr);

  std::vector<std::size_t> by_mag(n);
  std::iota(by_mag.begin(), by_mag.end(), std::size_t{0});
  std::stable_sort(by_mag.begin(), by_mag.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(values[a]) > std::fabs(values[b]);
  });

  const double mnorm = frobenius_norm(m);
  Embedding out;
  if (std::fabs(values[by_mag[d - 1]]) < 1e-10 * mnorm) {
    std::ostringstream msg;
    msg << "spectral_embed: dimension " << d << " exceeds numerical rank (|lambda_" << d
        << "| = " << std::fabs(values[by_mag[d - 1]]) << " < " << 1e-10 * mnorm << ")";
    throw NumericError(msg.str());
  }
  if (d < n) {
    const double lo = std::fabs(values[by_mag[d]]);
    const double hi = std::fabs(values[by_mag[d - 1]]);
    if (hi - lo <= 1e-8 * std::max(1.0, hi)) {
      std::ostringstream msg;
      msg << "eigenvalue magnitudes " << d << " and " << d + 1 << " are nearly tied (" << hi
          << " vs " << lo << "); embedding dimension is ambiguous";
      out.warnings.push_back(msg.str());
    }
  }

  // Selected eigenvalues: positives first, descending magnitude inside each
  // sign group.
  std::vector<double> selected(d);
  for (std::size_t i = 0; i < d; ++i) selected[i] = values[by_mag[i]];
  std::vector<std::size_t> col_order(d);
  std::iota(col_order.begin(), col_order.end(), std::size_t{0});
  std::stable_sort(col_order.begin(), col_order.end(), [&](std::size_t a, std::size_t b) {
    const bool pa = selected[a] >= 0.0;
    const bool pb = selected[b] >= 0.0;
    if (pa != pb) return pa;
    return std::fabs(selected[a]) > std::fabs(selected[b]);
  });

  // Inverse iteration per selected eigenvalue, ascending value order so
  // clusters are contiguous; perturb duplicates to keep the solves stable.
  std::vector<std::size_t> asc(d);
  std::iota(asc.begin(), asc.end(), std::size_t{0});
  std::sort(asc.begin(), asc.end(),
            [&](std::size_t a, std::size_t b) { return selected[a] < selected[b]; });
  const double scale = std::max(tridiag_scale(f.diag, f.off), 1.0);
  const double cluster_tol = 1e-7 * scale;
  const double pert = 100.0 * DBL_EPSILON * scale;

  Matrix zt(d, n);
  SplitMix64 rng(0x5eedULL);
  std::vector<std::vector<double>> cluster;
  double cluster_anchor = 0.0;
  double last_target = 0.0;
  for (std::size_t rank = 0; rank < d; ++rank) {
    const std::size_t idx = asc[rank];
    const double lam = selected[idx];
    if (rank == 0 || lam - cluster_anchor > cluster_tol) {
      cluster.clear();
      cluster_anchor = lam;
    }
    double target = lam;
    if (!cluster.empty() && target <= last_target + pert) target = last_target + pert;
    std::vector<double> z = tridiag_eigenvector(f.diag, f.off, target, cluster, rng);
    last_target = target;
    cluster.push_back(z);
    for (std::size_t k = 0; k < n; ++k) zt(idx, k) = z[k];
  }

  apply_reflectors_rows(f.housed, f.h, zt);

  out.X = Matrix(n, d);
  out.values.resize(d);
  int p = 0;
  int q = 0;
  for (std::size_t c = 0; c < d; ++c) {
    const std::size_t idx = col_order[c];
    const double lam = selected[idx];
    out.values[c] = lam;
    lam >= 0.0 ? ++p : ++q;
    canonicalize_sign(zt.row(idx), n);
    const double s = std::sqrt(std::fabs(lam));
    for (std::size_t r = 0; r < n; ++r) out.X(r, c) = s * zt(idx, r);
  }
  out.p = p;
  out.q = q;
  return out;
}

std::size_t select_dimension(std::span<const double> values, const DimensionMethod& method) {
  if (values.size() < 2) throw std::invalid_argument("select_dimension: need at least 2 values");
  if (method.kind == DimensionMethod::Kind::manual) return method.value;
  std::vector<double> mags(values.begin(), values.end());
  for (double& v : mags) v = std::fabs(v);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const std::size_t cap = std::min(method.value, mags.size() - 1);
  std::size_t best = 1;
  double best_gap = -1.0;
  for (std::size_t i = 1; i <= cap; ++i) {
    const double gap = mags[i - 1] - mags[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

Matrix indefinite_identity(int p, int q) {
  Matrix m(p + q, p + q);
  for (int i = 0; i < p; ++i) m(i, i) = 1.0;
  for (int i = p; i < p + q; ++i) m(i, i) = -1.0;
  return m;
}

Matrix indefinite_gram(const Embedding& e) {
  const std::size_t n = e.X.rows();
  const std::size_t d = e.X.cols();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = e.X.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const double* xj = e.X.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double sign = static_cast<int>(k) < e.p ? 1.0 : -1.0;
        s += sign * xi[k] * xj[k];
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

}  // namespace wse
