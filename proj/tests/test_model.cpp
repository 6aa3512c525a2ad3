#include <cmath>

#include <doctest.h>

#include "wse/model.hpp"
#include "wse/represent.hpp"
#include "wse/rng.hpp"

using namespace wse;

namespace {

// Monte-Carlo oracle: mean and variance from `draws` samples plus their
// standard errors, for cross-checking the analytic moments.
struct McEstimate {
  double mean;
  double mean_se;
  double var;
  double var_se;
};

McEstimate mc_moments(const WeightDistribution& dist, std::size_t draws, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = sample_weight(dist, rng);
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
    s4 += x * x * x * x;
  }
  const double n = static_cast<double>(draws);
  const double m1 = s1 / n;
  const double m2 = s2 / n;
  const double var = m2 - m1 * m1;
  // Central moments for the variance-of-variance estimate.
  const double mu2 = var;
  const double mu4 = s4 / n - 4.0 * m1 * s3 / n + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  McEstimate est;
  est.mean = m1;
  est.mean_se = std::sqrt(std::max(mu2, 1e-300) / n);
  est.var = var;
  est.var_se = std::sqrt(std::max(mu4 - mu2 * mu2, 1e-300) / n);
  return est;
}

void check_against_mc(const WeightDistribution& dist, std::uint64_t seed) {
  const Moments analytic = moments(dist);
  const McEstimate mc = mc_moments(dist, 10'000'000, seed);
  CHECK(std::fabs(analytic.mean - mc.mean) <= 4.0 * mc.mean_se + 1e-12);
  CHECK(std::fabs(analytic.variance - mc.var) <= 4.0 * mc.var_se + 1e-12);
}

}  // namespace

TEST_CASE("analytic moments of the basic families") {
  const Moments poisson = moments(WeightDistribution::poisson(0.5));
  CHECK(poisson.mean == doctest::Approx(0.5));
  CHECK(poisson.variance == doctest::Approx(0.5));

  const Moments bern = moments(WeightDistribution::bernoulli(0.3));
  CHECK(bern.mean == doctest::Approx(0.3));
  CHECK(bern.variance == doctest::Approx(0.21));

  // Zero-inflated uniform: raw moments 1/2 and 1/3.
  const Moments zi =
      moments(WeightDistribution::zero_inflated(0.25, WeightDistribution::beta(1.0, 1.0)));
  CHECK(zi.mean == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(zi.variance == doctest::Approx(0.25 / 3.0 - 0.125 * 0.125).epsilon(1e-12));

  const Moments dirac = moments(WeightDistribution::dirac(2.5));
  CHECK(dirac.mean == doctest::Approx(2.5));
  CHECK(dirac.variance == doctest::Approx(0.0));
}

TEST_CASE("moments agree with a Monte-Carlo oracle for every variant") {
  check_against_mc(WeightDistribution::dirac(1.7), 1);
  check_against_mc(WeightDistribution::bernoulli(0.3), 2);
  check_against_mc(WeightDistribution::poisson(2.5), 3);
  check_against_mc(WeightDistribution::poisson(17.0), 4);  // PTRS branch
  check_against_mc(WeightDistribution::gaussian(-1.0, 4.0), 5);
  check_against_mc(WeightDistribution::beta(1.0, 0.5), 6);
  check_against_mc(WeightDistribution::exponential(0.5), 7);
  check_against_mc(
      WeightDistribution::zero_inflated(0.25, WeightDistribution::beta(1.0, 1.0)), 8);
  check_against_mc(
      WeightDistribution::zero_inflated(0.3, WeightDistribution::exponential(0.5)), 9);
}

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(WeightDistribution::bernoulli(1.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::beta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::gaussian(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution::exponential(0.0), std::invalid_argument);
  // Zero inflation nests exactly one level.
  const WeightDistribution inner =
      WeightDistribution::zero_inflated(0.5, WeightDistribution::beta(1.0, 1.0));
  CHECK_THROWS_AS(WeightDistribution::zero_inflated(0.5, inner), std::invalid_argument);
}

TEST_CASE("block model validation") {
  const WeightDistribution d1 = WeightDistribution::poisson(0.5);
  const WeightDistribution d2 = WeightDistribution::poisson(0.6);
  CHECK_THROWS_AS(BlockModel::create({0.5, 0.4}, {d1, d2, d2, d1}), std::invalid_argument);
  CHECK_THROWS_AS(BlockModel::create({0.5, 0.5}, {d1, d1, d2, d1}), std::invalid_argument);
  const BlockModel ok = BlockModel::create({0.5, 0.5}, {d1, d2, d2, d1});
  CHECK(ok.k() == 2);
}

TEST_CASE("block moments of the equal-means Gaussian model") {
  const WeightDistribution g11 = WeightDistribution::gaussian(1.0, 1.0);
  const WeightDistribution g12 = WeightDistribution::gaussian(1.0, 2.0);
  const WeightDistribution g22 = WeightDistribution::gaussian(1.0, 8.0);
  const BlockModel model = BlockModel::create({0.5, 0.5}, {g11, g12, g12, g22});
  const BlockMoments m = block_moments(model);
  CHECK(m.B(0, 0) == doctest::Approx(1.0));
  CHECK(m.B(0, 1) == doctest::Approx(1.0));
  CHECK(m.B(1, 1) == doctest::Approx(1.0));
  CHECK(m.C(0, 0) == doctest::Approx(1.0));
  CHECK(m.C(0, 1) == doctest::Approx(2.0));
  CHECK(m.C(1, 1) == doctest::Approx(8.0));
}

TEST_CASE("block moments of a single Bernoulli block") {
  const BlockModel model =
      BlockModel::create({1.0}, {WeightDistribution::bernoulli(0.3)});
  const BlockMoments m = block_moments(model);
  CHECK(m.B(0, 0) == doctest::Approx(0.3));
  CHECK(m.C(0, 0) == doctest::Approx(0.21));
}

TEST_CASE("zero-inflated Beta anomaly moments match the analytic values") {
  const PValueModels models = pvalue_models(0.25, 0.5, 0.2, 0.05);
  CHECK(models.p.B(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(models.p.B(0, 1) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(models.p.C(0, 0) == doctest::Approx(0.1055555555555556).epsilon(1e-10));
  CHECK(models.p.C(0, 1) == doctest::Approx(0.0677083333333333).epsilon(1e-10));

  // The same moments through the distribution machinery.
  const BlockModel model = pvalue_block_model(0.25, 0.5, 0.2);
  const BlockMoments m = block_moments(model);
  CHECK(m.B(0, 0) == doctest::Approx(models.p.B(0, 0)).epsilon(1e-12));
  CHECK(m.C(0, 0) == doctest::Approx(models.p.C(0, 0)).epsilon(1e-12));
  CHECK(m.B(1, 1) == doctest::Approx(models.p.B(1, 1)).epsilon(1e-12));
  CHECK(m.C(1, 1) == doctest::Approx(models.p.C(1, 1)).epsilon(1e-12));
}

TEST_CASE("sampled graphs satisfy the structural invariants") {
  const BlockModel model = poisson_block_model(0.5, 0.6);
  const WeightedGraph g = sample(model, 60, 42);
  CHECK(g.n() == 60);
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(g.A(i, i) == 0.0);
    for (std::size_t j = 0; j < g.n(); ++j) CHECK(g.A(i, j) == g.A(j, i));
  }
  for (int z : g.z) {
    CHECK(z >= 1);
    CHECK(z <= 2);
  }
  CHECK(g.has_latent());

  SUBCASE("same seed, same graph") {
    const WeightedGraph h = sample(model, 60, 42);
    CHECK(max_abs(subtract(g.A, h.A)) == 0.0);
    CHECK(g.z == h.z);
  }
  SUBCASE("different seed, different graph") {
    const WeightedGraph h = sample(model, 60, 43);
    CHECK(max_abs(subtract(g.A, h.A)) > 0.0);
  }
}

TEST_CASE("n = 2 sampling works") {
  const BlockModel model = poisson_block_model(1.5, 0.7);
  const WeightedGraph g = sample(model, 2, 7);
  CHECK(g.A(0, 1) == g.A(1, 0));
  CHECK(g.A(0, 0) == 0.0);
  CHECK_THROWS_AS(sample(model, 1, 7), std::invalid_argument);
}

TEST_CASE("intra-community empirical mean tracks the Poisson rate") {
  const BlockModel model = poisson_block_model(0.5, 0.6);
  int ok = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const WeightedGraph g = sample(model, 400, 100 + s);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.n(); ++i)
      for (std::size_t j = i + 1; j < g.n(); ++j)
        if (g.z[i] == g.z[j]) {
          sum += g.A(i, j);
          ++count;
        }
    const double mean = sum / count;
    const double se = std::sqrt(0.5 / count);
    if (std::fabs(mean - 0.5) <= 3.0 * se) ++ok;
  }
  CHECK(ok >= 17);  // 3-sigma band, 20 seeds
}

TEST_CASE("community frequencies converge to pi") {
  const WeightDistribution d = WeightDistribution::dirac(1.0);
  const BlockModel model = BlockModel::create({0.2, 0.3, 0.5}, std::vector<WeightDistribution>(9, d));
  const std::size_t n = 10000;
  int ok = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const std::vector<int> z = sample_labels(model, n, 500 + s);
    std::vector<double> freq(3, 0.0);
    for (int zi : z) freq[zi - 1] += 1.0 / n;
    bool pass = true;
    const std::vector<double> pi = {0.2, 0.3, 0.5};
    for (int c = 0; c < 3; ++c) {
      const double bound = 4.0 * std::sqrt(pi[c] * (1.0 - pi[c]) / n);
      if (std::fabs(freq[c] - pi[c]) > bound) pass = false;
    }
    if (pass) ++ok;
  }
  CHECK(ok >= 19);
}

TEST_CASE("latent positions are the block embedding rows") {
  // Equal-means model: phi(1) = phi(2) = 1.
  const WeightDistribution g11 = WeightDistribution::gaussian(1.0, 1.0);
  const WeightDistribution g12 = WeightDistribution::gaussian(1.0, 2.0);
  const WeightDistribution g22 = WeightDistribution::gaussian(1.0, 8.0);
  const BlockModel model = BlockModel::create({0.5, 0.5}, {g11, g12, g12, g22});
  const WeightedGraph g = sample(model, 20, 3);
  REQUIRE(g.X.cols() == 1);
  for (std::size_t i = 0; i < g.n(); ++i) CHECK(g.X(i, 0) == doctest::Approx(1.0));
}
