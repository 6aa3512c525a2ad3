#include "wse/represent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wse {

namespace {

[[noreturn]] void domain_error(const char* what, std::size_t i, std::size_t j, double w) {
  std::ostringstream msg;
  msg << what << " at entry (" << i << ", " << j << "): weight " << w;
  throw std::invalid_argument(msg.str());
}

}  // namespace

EdgeTransform EdgeTransform::affine(double a, double b) {
  if (a == 0.0) throw std::invalid_argument("affine transform: a must be nonzero");
  EdgeTransform t;
  t.kind = Kind::affine;
  t.a = a;
  t.b = b;
  return t;
}

EdgeTransform EdgeTransform::presence_indicator() {
  EdgeTransform t;
  t.kind = Kind::presence_indicator;
  return t;
}

EdgeTransform EdgeTransform::log_magnitude() {
  EdgeTransform t;
  t.kind = Kind::log_magnitude;
  return t;
}

EdgeTransform EdgeTransform::pvalue_threshold(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("pvalue_threshold: tau must lie in (0,1)");
  EdgeTransform t;
  t.kind = Kind::pvalue_threshold;
  t.tau = tau;
  return t;
}

EdgeTransform EdgeTransform::pvalue_log_complement(double cap) {
  if (!(cap > 0.0)) throw std::invalid_argument("pvalue_log_complement: cap must be > 0");
  EdgeTransform t;
  t.kind = Kind::pvalue_log_complement;
  t.log_cap = cap;
  return t;
}

WeightedGraph transform_graph(const WeightedGraph& g, const EdgeTransform& t,
                              TransformStats* stats) {
  const std::size_t n = g.n();
  WeightedGraph out;
  out.A = Matrix(n, n);
  out.z = g.z;

  std::size_t capped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = g.A(i, j);
      double v = 0.0;
      switch (t.kind) {
        case EdgeTransform::Kind::affine:
          v = t.a * w + t.b;
          break;
        case EdgeTransform::Kind::presence_indicator:
          v = w > 0.0 ? 1.0 : 0.0;
          break;
        case EdgeTransform::Kind::log_magnitude:
          if (w < 0.0) domain_error("log-magnitude transform needs nonnegative weights", i, j, w);
          v = w > 0.0 ? std::log(w) : 0.0;
          break;
        case EdgeTransform::Kind::pvalue_threshold:
          if (w < 0.0 || w > 1.0)
            domain_error("p-value transform needs weights in [0,1]", i, j, w);
          v = w > 1.0 - t.tau ? 1.0 : 0.0;
          break;
        case EdgeTransform::Kind::pvalue_log_complement:
          if (w < 0.0 || w > 1.0)
            domain_error("p-value transform needs weights in [0,1]", i, j, w);
          if (w == 1.0) {
            v = t.log_cap;
            ++capped;
          } else {
            v = -std::log1p(-w);
          }
          break;
      }
      out.A(i, j) = v;
      out.A(j, i) = v;
    }
  }
  if (stats != nullptr) stats->capped = capped;
  return out;
}

PValueModels pvalue_models(double rho, double alpha, double pi1, double tau) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("pvalue_models: rho in [0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("pvalue_models: alpha in (0,1]");
  if (!(pi1 >= 0.0 && pi1 <= 1.0)) throw std::invalid_argument("pvalue_models: pi1 in [0,1]");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("pvalue_models: tau in (0,1)");

  PValueModels out;
  out.pi = {pi1, 1.0 - pi1};

  // Stored complements: intra-anomaly entries are zero-inflated Beta(1, alpha),
  // everything else zero-inflated Beta(1, 1).
  const auto zib = [&](double a) {
    const double m1 = rho / (1.0 + a);
    const double m2 = rho * 2.0 / ((1.0 + a) * (2.0 + a));
    return std::pair<double, double>{m1, m2 - m1 * m1};
  };
  const auto [pb1, pc1] = zib(alpha);
  const auto [pb2, pc2] = zib(1.0);
  out.p.B = Matrix(2, 2);
  out.p.C = Matrix(2, 2);
  out.p.B(0, 0) = pb1;
  out.p.B(0, 1) = out.p.B(1, 0) = out.p.B(1, 1) = pb2;
  out.p.C(0, 0) = pc1;
  out.p.C(0, 1) = out.p.C(1, 0) = out.p.C(1, 1) = pc2;

  // Log complements: zero-inflated exponential.
  const auto zie = [&](double r) {
    const double m1 = rho / r;
    const double m2 = rho * 2.0 / (r * r);
    return std::pair<double, double>{m1, m2 - m1 * m1};
  };
  const auto [lb1, lc1] = zie(alpha);
  const auto [lb2, lc2] = zie(1.0);
  out.l.B = Matrix(2, 2);
  out.l.C = Matrix(2, 2);
  out.l.B(0, 0) = lb1;
  out.l.B(0, 1) = out.l.B(1, 0) = out.l.B(1, 1) = lb2;
  out.l.C(0, 0) = lc1;
  out.l.C(0, 1) = out.l.C(1, 0) = out.l.C(1, 1) = lc2;

  // Threshold indicator: Bernoulli(rho tau^alpha) intra, Bernoulli(rho tau) elsewhere.
  const double tb1 = rho * std::pow(tau, alpha);
  const double tb2 = rho * tau;
  out.t.B = Matrix(2, 2);
  out.t.C = Matrix(2, 2);
  out.t.B(0, 0) = tb1;
  out.t.B(0, 1) = out.t.B(1, 0) = out.t.B(1, 1) = tb2;
  out.t.C(0, 0) = tb1 * (1.0 - tb1);
  out.t.C(0, 1) = out.t.C(1, 0) = out.t.C(1, 1) = tb2 * (1.0 - tb2);
  return out;
}

BlockModel pvalue_block_model(double rho, double alpha, double pi1) {
  const WeightDistribution anomalous =
      WeightDistribution::zero_inflated(rho, WeightDistribution::beta(1.0, alpha));
  const WeightDistribution null =
      WeightDistribution::zero_inflated(rho, WeightDistribution::beta(1.0, 1.0));
  return BlockModel::create({pi1, 1.0 - pi1}, {anomalous, null, null, null});
}

PoissonPairModels poisson_pair_models(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("poisson_pair_models: rates must be positive");
  PoissonPairModels out;
  if (lambda1 == lambda2)
    out.warnings.push_back(
        "lambda1 == lambda2: block mean matrix is rank deficient and both representations have "
        "zero size-adjusted Chernoff information");
  out.poisson.B = Matrix(2, 2);
  out.poisson.B(0, 0) = out.poisson.B(1, 1) = lambda1;
  out.poisson.B(0, 1) = out.poisson.B(1, 0) = lambda2;
  out.poisson.C = out.poisson.B;

  const double p1 = 1.0 - std::exp(-lambda1);
  const double p2 = 1.0 - std::exp(-lambda2);
  out.presence.B = Matrix(2, 2);
  out.presence.B(0, 0) = out.presence.B(1, 1) = p1;
  out.presence.B(0, 1) = out.presence.B(1, 0) = p2;
  out.presence.C = Matrix(2, 2);
  out.presence.C(0, 0) = out.presence.C(1, 1) = p1 * (1.0 - p1);
  out.presence.C(0, 1) = out.presence.C(1, 0) = p2 * (1.0 - p2);
  return out;
}

BlockModel poisson_block_model(double lambda1, double lambda2) {
  const WeightDistribution intra = WeightDistribution::poisson(lambda1);
  const WeightDistribution inter = WeightDistribution::poisson(lambda2);
  return BlockModel::create({0.5, 0.5}, {intra, inter, inter, intra});
}

}  // namespace wse
