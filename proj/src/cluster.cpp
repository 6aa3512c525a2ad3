#include "wse/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wse/errors.hpp"
#include "wse/rng.hpp"

namespace wse {

namespace {

// Regularized lower incomplete gamma P(a, x): series for x < a+1, continued
// fraction otherwise.
double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a;
  double c = 1.0 / 1e-300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct ComponentCache {
  Matrix inv;      // d x d
  double log_det = 0.0;
};

ComponentCache cache_component(const Matrix& cov) {
  const EigenDecomposition ed = eig_symmetric(cov);
  ComponentCache cache;
  cache.inv = Matrix(cov.rows(), cov.cols());
  for (std::size_t c = 0; c < ed.values.size(); ++c) {
    const double lam = ed.values[c];
    if (lam <= 0.0) throw NumericError("gmm: covariance lost positive definiteness");
    cache.log_det += std::log(lam);
    for (std::size_t i = 0; i < cov.rows(); ++i)
      for (std::size_t j = 0; j < cov.cols(); ++j)
        cache.inv(i, j) += ed.vectors(i, c) * ed.vectors(j, c) / lam;
  }
  return cache;
}

constexpr double kLogTwoPi = 1.8378770664093454836;

double log_gaussian(const double* x, const double* mu, const ComponentCache& cache,
                    std::size_t d) {
  double quad = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += cache.inv(i, j) * (x[j] - mu[j]);
    quad += (x[i] - mu[i]) * acc;
  }
  return -0.5 * (d * kLogTwoPi + cache.log_det + quad);
}

struct MStepResult {
  bool floor_applied = false;
  std::vector<int> collapsed;  // component indices needing reinit
};

MStepResult m_step(const Matrix& x, GmmFit& fit) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const int k = fit.k;
  MStepResult result;
  for (int c = 0; c < k; ++c) {
    double nk = 0.0;
    for (std::size_t i = 0; i < n; ++i) nk += fit.responsibilities(i, c);
    if (!(nk > 1e-10 * n)) {
      result.collapsed.push_back(c);
      continue;
    }
    fit.weights[c] = nk / n;
    for (std::size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += fit.responsibilities(i, c) * x(i, j);
      fit.means(c, j) = m / nk;
    }
    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = fit.responsibilities(i, c);
      if (r == 0.0) continue;
      const double* xi = x.row(i);
      for (std::size_t a = 0; a < d; ++a) {
        const double da = xi[a] - fit.means(c, a);
        for (std::size_t b = a; b < d; ++b) {
          cov(a, b) += r * da * (xi[b] - fit.means(c, b));
        }
      }
    }
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) {
        cov(a, b) /= nk;
        cov(b, a) = cov(a, b);
      }
      trace += cov(a, a);
    }
    const double floor = 1e-9 * std::max(trace, 1e-300) / d;
    double min_eig = std::numeric_limits<double>::infinity();
    for (double v : eig_symmetric(cov).values) min_eig = std::min(min_eig, v);
    if (min_eig < floor) result.floor_applied = true;
    for (std::size_t a = 0; a < d; ++a) cov(a, a) += floor;
    if (min_eig + floor <= 0.0) {
      result.collapsed.push_back(c);
      continue;
    }
    fit.covariances[c] = std::move(cov);
  }
  return result;
}

double e_step(const Matrix& x, GmmFit& fit) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const int k = fit.k;
  std::vector<ComponentCache> caches;
  caches.reserve(k);
  for (int c = 0; c < k; ++c) caches.push_back(cache_component(fit.covariances[c]));
  std::vector<double> logw(k);
  for (int c = 0; c < k; ++c) logw[c] = std::log(std::max(fit.weights[c], 1e-300));

  double loglik = 0.0;
  std::vector<double> lp(k);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      lp[c] = logw[c] + log_gaussian(x.row(i), fit.means.row(c), caches[c], d);
      mx = std::max(mx, lp[c]);
    }
    double sum = 0.0;
    for (int c = 0; c < k; ++c) sum += std::exp(lp[c] - mx);
    const double lse = mx + std::log(sum);
    loglik += lse;
    for (int c = 0; c < k; ++c) fit.responsibilities(i, c) = std::exp(lp[c] - lse);
  }
  return loglik;
}

Matrix kmeanspp_responsibilities(const Matrix& x, int k, SplitMix64& rng) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<std::size_t> centers;
  centers.push_back(static_cast<std::size_t>(rng.next_double() * n) % n);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  while (centers.size() < static_cast<std::size_t>(k)) {
    const double* c = x.row(centers.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (x(i, j) - c[j]) * (x(i, j) - c[j]);
      dist2[i] = std::min(dist2[i], s);
      total += dist2[i];
    }
    double target = rng.next_double() * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= dist2[i];
      if (target <= 0.0) {
        pick = i;
        break;
      }
    }
    centers.push_back(pick);
  }
  Matrix resp(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double* cc = x.row(centers[c]);
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (x(i, j) - cc[j]) * (x(i, j) - cc[j]);
      if (s < best_d) {
        best_d = s;
        best = c;
      }
    }
    resp(i, best) = 1.0;
  }
  return resp;
}

GmmFit run_em(const Matrix& x, Matrix resp, std::uint64_t seed, double tol, int max_iter) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const int k = static_cast<int>(resp.cols());
  if (n <= static_cast<std::size_t>(k) * d)
    throw std::invalid_argument("fit_gmm: need n > K*d observations");

  GmmFit fit;
  fit.k = k;
  fit.weights.assign(k, 1.0 / k);
  fit.means = Matrix(k, d);
  fit.covariances.assign(k, Matrix(d, d));
  fit.responsibilities = std::move(resp);

  SplitMix64 reinit_rng = sub_stream(seed, /*tag=*/0x7265696e6974ULL);  // "reinit"
  const auto reinit_component = [&](int c) {
    // Random responsibility split: the collapsed component takes a random
    // share of every observation.
    for (std::size_t i = 0; i < n; ++i) {
      const double share = 0.5 * reinit_rng.next_double();
      double rest = 0.0;
      for (int cc = 0; cc < k; ++cc) rest += fit.responsibilities(i, cc);
      const double keep = rest > 0.0 ? (1.0 - share) / rest : 0.0;
      for (int cc = 0; cc < k; ++cc) fit.responsibilities(i, cc) *= keep;
      fit.responsibilities(i, c) += share;
    }
    ++fit.reinit_count;
  };

  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    MStepResult ms = m_step(x, fit);
    while (!ms.collapsed.empty()) {
      for (int c : ms.collapsed) reinit_component(c);
      ms = m_step(x, fit);
      if (fit.reinit_count > 50)
        throw NumericError("fit_gmm: repeated component collapse, giving up");
    }
    fit.floor_applied = fit.floor_applied || ms.floor_applied;
    const double ll = e_step(x, fit);
    fit.loglik_trace.push_back(ll);
    if (iter > 0 && std::fabs(ll - prev) < tol * std::max(1.0, std::fabs(ll))) {
      fit.converged = true;
      break;
    }
    prev = ll;
  }
  return fit;
}

}  // namespace

std::vector<int> GmmFit::hard_assignments() const {
  std::vector<int> out(responsibilities.rows());
  for (std::size_t i = 0; i < responsibilities.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c)
      if (responsibilities(i, c) > responsibilities(i, best)) best = c;
    out[i] = best + 1;
  }
  return out;
}

GmmFit fit_gmm(const Matrix& x, int k, std::uint64_t seed, double tol, int max_iter) {
  if (k < 1) throw std::invalid_argument("fit_gmm: need K >= 1");
  SplitMix64 rng = sub_stream(seed, /*tag=*/0x676d6d2d696e6974ULL);  // "gmm-init"
  Matrix resp = kmeanspp_responsibilities(x, k, rng);
  return run_em(x, resp, seed, tol, max_iter);
}

GmmFit fit_gmm_from_responsibilities(const Matrix& x, const Matrix& r0, std::uint64_t seed,
                                     double tol, int max_iter) {
  if (r0.rows() != x.rows()) throw std::invalid_argument("fit_gmm: responsibility shape");
  for (std::size_t i = 0; i < r0.rows(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < r0.cols(); ++c) s += r0(i, c);
    if (std::fabs(s - 1.0) > 1e-10)
      throw std::invalid_argument("fit_gmm: responsibility rows must sum to 1");
  }
  return run_em(x, r0, seed, tol, max_iter);
}

double ari(std::span<const int> labels_a, std::span<const int> labels_b) {
  if (labels_a.size() != labels_b.size()) throw std::invalid_argument("ari: length mismatch");
  const std::size_t n = labels_a.size();
  if (n == 0) throw std::invalid_argument("ari: empty labelings");

  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> count_a;
  std::map<int, double> count_b;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{labels_a[i], labels_b[i]}] += 1.0;
    count_a[labels_a[i]] += 1.0;
    count_b[labels_b[i]] += 1.0;
  }
  const auto choose2 = [](double m) { return 0.5 * m * (m - 1.0); };
  double index = 0.0;
  for (const auto& [key, v] : joint) index += choose2(v);
  double sum_a = 0.0;
  for (const auto& [key, v] : count_a) sum_a += choose2(v);
  double sum_b = 0.0;
  for (const auto& [key, v] : count_b) sum_b += choose2(v);
  const double total = choose2(static_cast<double>(n));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (index - expected) / (max_index - expected);
}

double chi_square_quantile(double prob, int dof) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("chi_square_quantile: p in (0,1)");
  if (dof < 1) throw std::invalid_argument("chi_square_quantile: dof >= 1");
  // Wilson-Hilferty start.
  const double z = normal_quantile(prob);
  const double f = 2.0 / (9.0 * dof);
  double x = dof * std::pow(1.0 - f + z * std::sqrt(f), 3.0);
  if (x <= 0.0) x = 0.5;
  const double a = 0.5 * dof;
  for (int it = 0; it < 64; ++it) {
    const double fx = gamma_p(a, 0.5 * x) - prob;
    const double pdf =
        std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a)) * 0.5;
    if (pdf <= 0.0) break;
    const double step = fx / pdf;
    x -= step;
    if (x <= 0.0) x = 1e-12;
    if (std::fabs(step) < 1e-12 * std::max(1.0, x)) break;
  }
  return x;
}

std::vector<CommunityCltReport> clt_check(const Matrix& aligned, const Matrix& x,
                                          std::span<const int> z, const CltParams& params) {
  const std::size_t n = aligned.rows();
  const std::size_t d = aligned.cols();
  if (x.rows() != n || x.cols() != d || z.size() != n)
    throw std::invalid_argument("clt_check: shape mismatch");
  const std::size_t k = params.Sigma.size();
  const double scale = std::sqrt(static_cast<double>(n));
  const double q95 = chi_square_quantile(0.95, static_cast<int>(d));

  std::vector<CommunityCltReport> out;
  for (std::size_t c = 0; c < k; ++c) {
    CommunityCltReport rep;
    rep.community = static_cast<int>(c) + 1;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (static_cast<std::size_t>(z[i]) == c + 1) members.push_back(i);
    rep.count = members.size();
    if (members.size() < d + 1) {
      rep.skipped = true;
      out.push_back(std::move(rep));
      continue;
    }

    Matrix resid(members.size(), d);
    for (std::size_t m = 0; m < members.size(); ++m)
      for (std::size_t j = 0; j < d; ++j)
        resid(m, j) = scale * (aligned(members[m], j) - x(members[m], j));

    rep.mean.assign(d, 0.0);
    for (std::size_t m = 0; m < members.size(); ++m)
      for (std::size_t j = 0; j < d; ++j) rep.mean[j] += resid(m, j);
    for (std::size_t j = 0; j < d; ++j) rep.mean[j] /= members.size();

    rep.covariance = Matrix(d, d);
    for (std::size_t m = 0; m < members.size(); ++m)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          rep.covariance(a, b) +=
              (resid(m, a) - rep.mean[a]) * (resid(m, b) - rep.mean[b]);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) rep.covariance(a, b) /= members.size() - 1;

    const Matrix& sigma = params.Sigma[c];
    rep.rel_frobenius = frobenius_norm(subtract(rep.covariance, sigma)) /
                        std::max(frobenius_norm(sigma), 1e-300);

    const ComponentCache cache = cache_component(sigma);
    std::size_t inside = 0;
    std::vector<double> zero(d, 0.0);
    for (std::size_t m = 0; m < members.size(); ++m) {
      double quad = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < d; ++b) acc += cache.inv(a, b) * resid(m, b);
        quad += resid(m, a) * acc;
      }
      if (quad <= q95) ++inside;
    }
    rep.coverage95 = static_cast<double>(inside) / members.size();
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace wse
