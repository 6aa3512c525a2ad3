#include "wse/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wse/errors.hpp"

namespace wse {

namespace {

// Inverse of a symmetric matrix through its eigendecomposition.
Matrix sym_inverse(const Matrix& m, double rel_tol, const char* context) {
  const EigenDecomposition ed = eig_symmetric(m);
  double max_mag = 0.0;
  for (double v : ed.values) max_mag = std::max(max_mag, std::fabs(v));
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < ed.values.size(); ++c) {
    const double lam = ed.values[c];
    if (std::fabs(lam) <= rel_tol * std::max(max_mag, 1e-300)) {
      std::ostringstream msg;
      msg << context << ": matrix is singular (|lambda| = " << std::fabs(lam) << ")";
      throw NumericError(msg.str());
    }
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        out(i, j) += ed.vectors(i, c) * ed.vectors(j, c) / lam;
  }
  return out;
}

struct SupResult {
  double t = 0.0;
  double value = 0.0;
};

// 512-point scan of (0,1) followed by golden-section refinement in the best
// bracket. The grid guards against multiple local maxima.
SupResult maximize_on_unit_interval(const std::function<double(double)>& f) {
  constexpr int kGrid = 512;
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1.0 - 1e-6;
  const auto at = [&](int i) { return kLo + (kHi - kLo) * i / (kGrid - 1); };
  int best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = f(at(i));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double a = at(std::max(0, best_i - 1));
  double b = at(std::min(kGrid - 1, best_i + 1));
  constexpr double kPhi = 0.61803398874989484820;
  double x1 = b - kPhi * (b - a);
  double x2 = a + kPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

// delta^T S^{-1} delta with the floor-checked eigendecomposition route.
double quadratic_form_inverse(const Matrix& s, std::span<const double> delta,
                              const char* context) {
  const EigenDecomposition ed = eig_symmetric(s);
  double trace = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i) trace += s(i, i);
  const double floor = 1e-14 * std::fabs(trace);
  double out = 0.0;
  for (std::size_t c = 0; c < ed.values.size(); ++c) {
    if (ed.values[c] <= floor) {
      std::ostringstream msg;
      msg << context << ": mixture covariance hit the eigenvalue floor (lambda = "
          << ed.values[c] << ", floor = " << floor << "); Chernoff information undefined";
      throw NumericError(msg.str());
    }
    double proj = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) proj += ed.vectors(i, c) * delta[i];
    out += proj * proj / ed.values[c];
  }
  return out;
}

double log_det_spd(const Matrix& m, const char* context) {
  const EigenDecomposition ed = eig_symmetric(m);
  double out = 0.0;
  for (double v : ed.values) {
    if (v <= 0.0) {
      std::ostringstream msg;
      msg << context << ": covariance not positive definite (lambda = " << v << ")";
      throw NumericError(msg.str());
    }
    out += std::log(v);
  }
  return out;
}

void check_pi(std::span<const double> pi, std::size_t k) {
  if (pi.size() != k) throw std::invalid_argument("pi length must match K");
  double sum = 0.0;
  for (double p : pi) {
    if (!(p >= 0.0)) throw std::invalid_argument("pi entries must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("pi must sum to 1 within 1e-12");
}

void check_variances(const BlockMoments& m, std::span<const double> pi) {
  const std::size_t k = m.C.rows();
  for (std::size_t a = 0; a < k; ++a) {
    if (pi[a] <= 0.0) continue;
    for (std::size_t b = 0; b < k; ++b) {
      if (pi[b] <= 0.0) continue;
      if (!(m.C(a, b) > 0.0)) {
        std::ostringstream msg;
        msg << "block variance C[" << a + 1 << "][" << b + 1
            << "] must be > 0 for communities with positive weight";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

}  // namespace

BlockEmbedding block_embedding(const Matrix& b, double rel_tol) {
  if (b.rows() != b.cols() || b.rows() == 0)
    throw std::invalid_argument("block_embedding: B must be square");
  const double bnorm = frobenius_norm(b);
  if (bnorm == 0.0) throw NumericError("block_embedding: B has rank zero");
  const EigenDecomposition ed = eig_symmetric(b);
  const std::size_t k = b.rows();
  const double tol = rel_tol * bnorm;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k; ++i)
    if (std::fabs(ed.values[i]) > tol) keep.push_back(i);
  if (keep.empty()) throw NumericError("block_embedding: B has rank zero at tolerance");

  // Positive eigenvalues first, descending magnitude within each sign.
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t c) {
    const bool pa = ed.values[a] >= 0.0;
    const bool pc = ed.values[c] >= 0.0;
    if (pa != pc) return pa;
    return std::fabs(ed.values[a]) > std::fabs(ed.values[c]);
  });

  BlockEmbedding out;
  out.X_B = Matrix(k, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double lam = ed.values[keep[c]];
    lam >= 0.0 ? ++out.p : ++out.q;
    const double s = std::sqrt(std::fabs(lam));
    for (std::size_t r = 0; r < k; ++r) out.X_B(r, c) = s * ed.vectors(r, keep[c]);
  }
  return out;
}

CltParams clt_params(const BlockMoments& moments, std::span<const double> pi) {
  const std::size_t k = moments.B.rows();
  check_pi(pi, k);
  const BlockEmbedding be = block_embedding(moments.B);
  const std::size_t d = be.X_B.cols();

  CltParams out;
  out.X_B = be.X_B;
  out.p = be.p;
  out.q = be.q;
  out.Delta = Matrix(d, d);
  for (std::size_t l = 0; l < k; ++l) {
    const double* xl = be.X_B.row(l);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out.Delta(i, j) += pi[l] * xl[i] * xl[j];
  }
  const Matrix delta_inv =
      sym_inverse(out.Delta, 1e-12, "clt_params: second-moment matrix Delta (Assumption i, minimal dimensionality)");

  const Matrix ipq = indefinite_identity(be.p, be.q);
  for (std::size_t kk = 0; kk < k; ++kk) {
    Matrix inner(d, d);
    for (std::size_t l = 0; l < k; ++l) {
      const double w = pi[l] * moments.C(kk, l);
      const double* xl = be.X_B.row(l);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) inner(i, j) += w * xl[i] * xl[j];
    }
    Matrix s = multiply(ipq, multiply(delta_inv, multiply(inner, multiply(delta_inv, ipq))));
    // Symmetrize away round-off.
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const double v = 0.5 * (s(i, j) + s(j, i));
        s(i, j) = v;
        s(j, i) = v;
      }
    out.Sigma.push_back(std::move(s));
  }
  return out;
}

Matrix clt_covariance(const BlockMoments& moments, std::span<const double> pi, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > moments.B.rows())
    throw std::invalid_argument("clt_covariance: community index out of range");
  return clt_params(moments, pi).Sigma[k - 1];
}

GaussianChernoffResult gaussian_chernoff(std::span<const double> mu1, const Matrix& g1,
                                         std::span<const double> mu2, const Matrix& g2) {
  const std::size_t d = mu1.size();
  if (mu2.size() != d || g1.rows() != d || g2.rows() != d)
    throw std::invalid_argument("gaussian_chernoff: dimension mismatch");
  const double ld1 = log_det_spd(g1, "gaussian_chernoff");
  const double ld2 = log_det_spd(g2, "gaussian_chernoff");
  std::vector<double> delta(d);
  for (std::size_t i = 0; i < d; ++i) delta[i] = mu1[i] - mu2[i];

  const auto objective = [&](double t) {
    Matrix mix(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) mix(i, j) = (1.0 - t) * g1(i, j) + t * g2(i, j);
    const double quad = quadratic_form_inverse(mix, delta, "gaussian_chernoff");
    const double ld = log_det_spd(mix, "gaussian_chernoff");
    return 0.5 * t * (1.0 - t) * quad + 0.5 * (ld - (1.0 - t) * ld1 - t * ld2);
  };
  const SupResult r = maximize_on_unit_interval(objective);
  return {r.value, r.t};
}

namespace {

ChernoffReport chernoff_embedding_space(const BlockMoments& moments, std::span<const double> pi) {
  const CltParams params = clt_params(moments, pi);
  const std::size_t k = moments.B.rows();
  const std::size_t d = params.X_B.cols();
  ChernoffReport report;
  report.method = ChernoffMethod::embedding_space;
  report.C = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      std::vector<double> delta(d);
      for (std::size_t i = 0; i < d; ++i) delta[i] = params.X_B(a, i) - params.X_B(b, i);
      const auto objective = [&](double t) {
        Matrix mix(d, d);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            mix(i, j) = (1.0 - t) * params.Sigma[a](i, j) + t * params.Sigma[b](i, j);
        return 0.5 * t * (1.0 - t) *
               quadratic_form_inverse(mix, delta, "size_adjusted_chernoff");
      };
      const SupResult r = maximize_on_unit_interval(objective);
      report.pairs.push_back(
          {static_cast<int>(a) + 1, static_cast<int>(b) + 1, r.t, r.value});
      report.C = std::min(report.C, r.value);
    }
  }
  return report;
}

ChernoffReport chernoff_block_space(const BlockMoments& moments, std::span<const double> pi) {
  const std::size_t k = moments.B.rows();
  const Signature sig = signature_of(moments.B);
  if (static_cast<std::size_t>(sig.d) != k)
    throw NumericError(
        "size_adjusted_chernoff: block_space reduction requires an invertible B (rank K)");
  ChernoffReport report;
  report.method = ChernoffMethod::block_space;
  report.C = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      // u = Pi B (e_a - e_b); Gamma_ab(t) is diagonal.
      std::vector<double> u(k);
      for (std::size_t l = 0; l < k; ++l) u[l] = pi[l] * (moments.B(l, a) - moments.B(l, b));
      const auto objective = [&](double t) {
        double quad = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
          const double gamma = pi[l] * ((1.0 - t) * moments.C(a, l) + t * moments.C(b, l));
          if (gamma <= 0.0) {
            if (u[l] == 0.0) continue;
            throw NumericError(
                "size_adjusted_chernoff: singular mixture variance with nonzero mean gap; "
                "Chernoff information undefined");
          }
          quad += u[l] * u[l] / gamma;
        }
        return 0.5 * t * (1.0 - t) * quad;
      };
      const SupResult r = maximize_on_unit_interval(objective);
      report.pairs.push_back(
          {static_cast<int>(a) + 1, static_cast<int>(b) + 1, r.t, r.value});
      report.C = std::min(report.C, r.value);
    }
  }
  return report;
}

}  // namespace

ChernoffReport size_adjusted_chernoff(const BlockMoments& moments, std::span<const double> pi,
                                      ChernoffMethod method) {
  if (moments.B.rows() != moments.B.cols() || moments.C.rows() != moments.C.cols() ||
      moments.B.rows() != moments.C.rows())
    throw std::invalid_argument("size_adjusted_chernoff: B and C must be K x K");
  if (moments.B.rows() < 2)
    throw std::invalid_argument("size_adjusted_chernoff: need at least two communities");
  check_pi(pi, moments.B.rows());
  check_variances(moments, pi);
  return method == ChernoffMethod::embedding_space ? chernoff_embedding_space(moments, pi)
                                                   : chernoff_block_space(moments, pi);
}

ChernoffReport size_adjusted_chernoff_auto(const BlockMoments& moments,
                                           std::span<const double> pi) {
  const Signature sig = signature_of(moments.B);
  const ChernoffMethod method = static_cast<std::size_t>(sig.d) == moments.B.rows()
                                    ? ChernoffMethod::block_space
                                    : ChernoffMethod::embedding_space;
  return size_adjusted_chernoff(moments, pi, method);
}

double chernoff_ratio(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("chernoff_ratio: both values must be strictly positive");
  return c1 / c2;
}

double closed_form_anomaly_chernoff(double b1, double b2, double c1, double c2, double pi1) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("closed_form_anomaly_chernoff: variances must be > 0");
  const double gap = b1 - b2;
  const double s = std::sqrt(c1) + std::sqrt(c2);
  return pi1 * gap * gap / (2.0 * s * s);
}

BlockMoments affine_block_moments(const BlockMoments& moments, double a, double b) {
  if (a == 0.0) throw std::invalid_argument("affine_block_moments: a must be nonzero");
  BlockMoments out = moments;
  for (std::size_t i = 0; i < out.B.rows(); ++i)
    for (std::size_t j = 0; j < out.B.cols(); ++j) {
      out.B(i, j) = a * moments.B(i, j) + b;
      out.C(i, j) = a * a * moments.C(i, j);
    }
  return out;
}

Signature signature_of(const Matrix& b) { return signature_of(b, 1e-10 * frobenius_norm(b)); }

Signature signature_of(const Matrix& b, double tol) {
  if (tol < 0.0) throw std::invalid_argument("signature_of: tol must be >= 0");
  const EigenDecomposition ed = eig_symmetric(b);
  Signature sig;
  for (double v : ed.values) {
    if (v > tol) {
      ++sig.p;
    } else if (v < -tol) {
      ++sig.q;
    }
  }
  sig.d = sig.p + sig.q;
  return sig;
}

bool interlacing_check(const Matrix& b, double a, double bshift) {
  if (!(a > 0.0) || !(bshift > 0.0))
    throw std::invalid_argument("interlacing_check: need a > 0 and b > 0");
  const std::size_t k = b.rows();
  Matrix scaled(k, k);
  Matrix shifted(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      scaled(i, j) = a * b(i, j);
      shifted(i, j) = a * b(i, j) + bshift;
    }
  std::vector<double> base = eig_symmetric(scaled).values;
  std::vector<double> pert = eig_symmetric(shifted).values;
  std::sort(base.begin(), base.end());
  std::sort(pert.begin(), pert.end());
  const double eps = 1e-9 * frobenius_norm(shifted);
  for (std::size_t i = 0; i < k; ++i) {
    if (pert[i] < base[i] - eps) return false;
    if (i + 1 < k && pert[i] > base[i + 1] + eps) return false;
  }
  return true;
}

Embedding exact_p_embedding(std::span<const int> z, const Matrix& b, double rel_tol) {
  const std::size_t k = b.rows();
  const std::size_t n = z.size();
  if (n == 0) throw std::invalid_argument("exact_p_embedding: empty label vector");
  std::vector<double> counts(k, 0.0);
  for (int zi : z) {
    if (zi < 1 || static_cast<std::size_t>(zi) > k)
      throw std::invalid_argument("exact_p_embedding: label out of range");
    counts[zi - 1] += 1.0;
  }
  std::vector<double> root(k);
  for (std::size_t i = 0; i < k; ++i) root[i] = std::sqrt(counts[i]);

  // Nonzero spectrum of P = Theta B Theta^T via M = N^{1/2} B N^{1/2}.
  Matrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = root[i] * b(i, j) * root[j];
  const EigenDecomposition ed = eig_symmetric(m);
  const double tol = rel_tol * frobenius_norm(m);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k; ++i)
    if (std::fabs(ed.values[i]) > tol) keep.push_back(i);
  if (keep.empty()) throw NumericError("exact_p_embedding: P has rank zero at tolerance");
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t x, std::size_t y) {
    const bool px = ed.values[x] >= 0.0;
    const bool py = ed.values[y] >= 0.0;
    if (px != py) return px;
    return std::fabs(ed.values[x]) > std::fabs(ed.values[y]);
  });

  Embedding out;
  const std::size_t d = keep.size();
  out.X = Matrix(n, d);
  out.values.resize(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double lam = ed.values[keep[c]];
    out.values[c] = lam;
    lam >= 0.0 ? ++out.p : ++out.q;
    // Community-level eigenvector entries of U_P: v_k / sqrt(n_k).
    std::vector<double> per_comm(k, 0.0);
    for (std::size_t r = 0; r < k; ++r)
      if (counts[r] > 0.0) per_comm[r] = ed.vectors(r, keep[c]) / root[r];
    // Sign convention on the expanded n-vector: largest magnitude positive,
    // ties broken by lowest node index.
    double best = 0.0;
    double best_val = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = per_comm[z[i] - 1];
      if (std::fabs(v) > best) {
        best = std::fabs(v);
        best_val = v;
      }
    }
    const double flip = best_val < 0.0 ? -1.0 : 1.0;
    const double s = flip * std::sqrt(std::fabs(lam));
    for (std::size_t i = 0; i < n; ++i) out.X(i, c) = s * per_comm[z[i] - 1];
  }
  return out;
}

}  // namespace wse
