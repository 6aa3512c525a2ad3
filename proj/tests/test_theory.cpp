#include <cmath>

#include <doctest.h>

#include "wse/errors.hpp"
#include "wse/represent.hpp"
#include "wse/rng.hpp"
#include "wse/theory.hpp"

using namespace wse;

namespace {

BlockMoments gaussian_equal_means() {
  BlockMoments m;
  m.B = Matrix(2, 2, 1.0);
  m.C = Matrix(2, 2);
  m.C(0, 0) = 1.0;
  m.C(0, 1) = m.C(1, 0) = 2.0;
  m.C(1, 1) = 8.0;
  return m;
}

BlockMoments random_moments(int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  BlockMoments m{Matrix(k, k), Matrix(k, k)};
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      const double mean = 2.0 * rng.next_double() - 1.0;
      const double var = 0.1 + rng.next_double();
      m.B(a, b) = m.B(b, a) = mean;
      m.C(a, b) = m.C(b, a) = var;
    }
  return m;
}

std::vector<double> random_simplex(int k, SplitMix64& rng) {
  std::vector<double> pi(k);
  double sum = 0.0;
  for (double& p : pi) {
    p = 0.1 + rng.next_double();
    sum += p;
  }
  for (double& p : pi) p /= sum;
  // Exact renormalization for the 1e-12 sum invariant.
  double acc = 0.0;
  for (int i = 0; i + 1 < k; ++i) acc += pi[i];
  pi[k - 1] = 1.0 - acc;
  return pi;
}

}  // namespace

TEST_CASE("block embedding of the all-ones mean matrix") {
  const BlockEmbedding be = block_embedding(Matrix(2, 2, 1.0));
  CHECK(be.dim() == 1);
  CHECK(be.p == 1);
  CHECK(be.q == 0);
  CHECK(be.X_B(0, 0) == doctest::Approx(1.0));
  CHECK(be.X_B(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("block embedding of the two-rate Poisson mean matrix") {
  Matrix b(2, 2);
  b(0, 0) = b(1, 1) = 0.5;
  b(0, 1) = b(1, 0) = 0.6;
  const BlockEmbedding be = block_embedding(b);
  CHECK(be.dim() == 2);
  CHECK(be.p == 1);
  CHECK(be.q == 1);
}

TEST_CASE("block embedding of the identity") {
  const BlockEmbedding be = block_embedding(Matrix::identity(3));
  CHECK(be.dim() == 3);
  CHECK(be.p == 3);
  CHECK(be.q == 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(be.X_B(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("zero matrix has no embedding") {
  CHECK_THROWS_AS(block_embedding(Matrix(2, 2)), NumericError);
}

TEST_CASE("equal-means Gaussian model: Sigma_1 = 1.5, Sigma_2 = 5.0") {
  const BlockMoments m = gaussian_equal_means();
  const std::vector<double> pi = {0.5, 0.5};
  const Matrix s1 = clt_covariance(m, pi, 1);
  const Matrix s2 = clt_covariance(m, pi, 2);
  REQUIRE(s1.rows() == 1);
  CHECK(std::fabs(s1(0, 0) - 1.5) <= 1e-10);
  CHECK(std::fabs(s2(0, 0) - 5.0) <= 1e-10);
}

TEST_CASE("single Bernoulli community: Sigma = 1 - p") {
  // Delta = p, X_B = sqrt(p), C = p(1-p): Sigma = p(1-p)*p / p^2 = 1-p.
  const double p = 0.3;
  BlockMoments m{Matrix(1, 1), Matrix(1, 1)};
  m.B(0, 0) = p;
  m.C(0, 0) = p * (1.0 - p);
  const std::vector<double> pi = {1.0};
  const Matrix sigma = clt_covariance(m, pi, 1);
  CHECK(sigma(0, 0) == doctest::Approx(1.0 - p).epsilon(1e-12));
}

TEST_CASE("gaussian chernoff of identical distributions is zero") {
  const std::vector<double> mu = {0.3, -0.2};
  Matrix g(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 1.0;
  g(0, 1) = g(1, 0) = 0.3;
  const auto r = gaussian_chernoff(mu, g, mu, g);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gaussian chernoff with equal covariances has the closed form") {
  // value = (mu1-mu2)^T G^{-1} (mu1-mu2) / 8 at t* = 1/2.
  const std::vector<double> mu1 = {1.0, 0.0};
  const std::vector<double> mu2 = {-1.0, 0.5};
  Matrix g(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 1.5;
  g(0, 1) = g(1, 0) = 0.4;
  const auto r = gaussian_chernoff(mu1, g, mu2, g);
  // Solve G x = d by hand (2x2).
  const double d0 = 2.0, d1 = -0.5;
  const double det = 2.0 * 1.5 - 0.4 * 0.4;
  const double x0 = (1.5 * d0 - 0.4 * d1) / det;
  const double x1 = (-0.4 * d0 + 2.0 * d1) / det;
  const double expected = (d0 * x0 + d1 * x1) / 8.0;
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.t_star == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("gaussian chernoff scalar example against the grid oracle") {
  // Equal means, variances 1 and 4: the value and maximizer were frozen
  // from a one-million-point grid scan of (1/2)log((1+3t)/4^t).
  const std::vector<double> mu = {0.0};
  Matrix g1(1, 1);
  g1(0, 0) = 1.0;
  Matrix g2(1, 1);
  g2(0, 0) = 4.0;
  const auto r = gaussian_chernoff(mu, g1, mu, g2);
  CHECK(r.value == doctest::Approx(0.11703807453154597).epsilon(1e-9));
  CHECK(r.t_star == doctest::Approx(0.3880140002239721).epsilon(1e-5));
  CHECK_THROWS_AS(gaussian_chernoff(mu, Matrix(1, 1), mu, g2), NumericError);
}

TEST_CASE("size-adjusted Chernoff of the equal-means model is zero") {
  const BlockMoments m = gaussian_equal_means();
  const std::vector<double> pi = {0.5, 0.5};
  const ChernoffReport r = size_adjusted_chernoff(m, pi, ChernoffMethod::embedding_space);
  CHECK(r.C == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("Poisson model reproduces the reported Chernoff values") {
  const PoissonPairModels models = poisson_pair_models(0.5, 0.6);
  const std::vector<double> pi = {0.5, 0.5};
  const ChernoffReport poisson = size_adjusted_chernoff_auto(models.poisson, pi);
  const ChernoffReport presence = size_adjusted_chernoff_auto(models.presence, pi);
  CHECK(poisson.C == doctest::Approx(2.27e-3).epsilon(0.01));
  CHECK(poisson.C == doctest::Approx(0.0025 / 1.1).epsilon(1e-8));  // analytic t* = 1/2
  CHECK(presence.C == doctest::Approx(1.71e-3).epsilon(0.01));
  CHECK(chernoff_ratio(poisson.C, presence.C) == doctest::Approx(1.33).epsilon(0.015));
  CHECK(poisson.pairs.front().t_star == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("p-value models reproduce the reported Chernoff values") {
  const PValueModels models = pvalue_models(0.25, 0.5, 0.2, 0.05);
  const std::vector<double> pi = {0.2, 0.8};
  const double cp = size_adjusted_chernoff_auto(models.p, pi).C;
  const double cl = size_adjusted_chernoff_auto(models.l, pi).C;
  const double ct = size_adjusted_chernoff_auto(models.t, pi).C;
  CHECK(cp == doctest::Approx(5.07e-4).epsilon(0.01));
  CHECK(cl == doctest::Approx(1.59e-3).epsilon(0.01));
  CHECK(ct == doctest::Approx(1.62e-3).epsilon(0.01));
  CHECK(chernoff_ratio(cl, cp) > 3.0);
}

TEST_CASE("chernoff ratio basics") {
  CHECK(chernoff_ratio(2.27e-3, 1.71e-3) == doctest::Approx(1.33).epsilon(0.01));
  CHECK(chernoff_ratio(1.59e-3, 5.07e-4) == doctest::Approx(3.14).epsilon(0.01));
  CHECK(chernoff_ratio(1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(chernoff_ratio(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("closed form matches the optimizer on the anomaly block structure") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const double b1 = rng.next_double();
    const double b2 = rng.next_double();
    const double c1 = 0.05 + rng.next_double();
    const double c2 = 0.05 + rng.next_double();
    const double pi1 = 0.05 + 0.9 * rng.next_double();
    BlockMoments m{Matrix(2, 2), Matrix(2, 2)};
    m.B(0, 0) = b1;
    m.B(0, 1) = m.B(1, 0) = m.B(1, 1) = b2;
    m.C(0, 0) = c1;
    m.C(0, 1) = m.C(1, 0) = m.C(1, 1) = c2;
    const double closed = closed_form_anomaly_chernoff(b1, b2, c1, c2, pi1);
    if (std::fabs(b1 - b2) < 1e-6) continue;  // rank-deficient corner
    const std::vector<double> pi = {pi1, 1.0 - pi1};
    const double numeric = size_adjusted_chernoff_auto(m, pi).C;
    CHECK(numeric == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK(closed_form_anomaly_chernoff(0.4, 0.4, 0.1, 0.2, 0.3) == doctest::Approx(0.0));
  // The reported p-value model values through the closed form.
  CHECK(closed_form_anomaly_chernoff(1.0 / 6.0, 0.125, 0.1055555555555556, 0.0677083333333333,
                                     0.2) == doctest::Approx(5.071e-4).epsilon(0.001));
  CHECK(closed_form_anomaly_chernoff(0.5, 0.25, 1.75, 0.4375, 0.2) ==
        doctest::Approx(1.587e-3).epsilon(0.001));
}

TEST_CASE("the two methods agree whenever B is invertible") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_double() * 3.0);
    const BlockMoments m = random_moments(k, 1000 + trial);
    if (static_cast<std::size_t>(signature_of(m.B).d) != static_cast<std::size_t>(k)) continue;
    const std::vector<double> pi = random_simplex(k, rng);
    const ChernoffReport block = size_adjusted_chernoff(m, pi, ChernoffMethod::block_space);
    const ChernoffReport embed = size_adjusted_chernoff(m, pi, ChernoffMethod::embedding_space);
    CHECK(block.C == doctest::Approx(embed.C).epsilon(1e-8));
  }
}

TEST_CASE("affine transforms of the moments") {
  const BlockMoments m = gaussian_equal_means();
  const BlockMoments same = affine_block_moments(m, 1.0, 0.0);
  CHECK(max_abs(subtract(same.B, m.B)) == 0.0);
  CHECK(max_abs(subtract(same.C, m.C)) == 0.0);

  const BlockMoments scaled = affine_block_moments(m, 2.0, 3.0);
  CHECK(scaled.B(0, 0) == doctest::Approx(5.0));
  CHECK(scaled.B(1, 1) == doctest::Approx(5.0));
  CHECK(scaled.C(0, 0) == doctest::Approx(4.0));
  CHECK(scaled.C(0, 1) == doctest::Approx(8.0));
  CHECK(scaled.C(1, 1) == doctest::Approx(32.0));
  CHECK_THROWS_AS(affine_block_moments(m, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Lemma-style affine invariance of the size-adjusted Chernoff value") {
  SplitMix64 rng(31);
  int checked = 0;
  for (int trial = 0; checked < 40; ++trial) {
    REQUIRE(trial < 500);
    const int k = 2 + static_cast<int>(rng.next_double() * 2.0);
    const BlockMoments m = random_moments(k, 5000 + trial);
    const std::vector<double> pi = random_simplex(k, rng);
    double a = 2.0 * rng.next_double() - 1.0;
    if (std::fabs(a) < 0.1) a = a < 0 ? -0.1 : 0.1;
    const double b = 4.0 * rng.next_double() - 2.0;
    const double base = size_adjusted_chernoff_auto(m, pi).C;
    const double affine = size_adjusted_chernoff_auto(affine_block_moments(m, a, b), pi).C;
    CHECK(std::fabs(affine - base) <= 1e-8 * std::max(base, 1e-12));
    ++checked;
  }
}

TEST_CASE("binary complement has the same Chernoff information") {
  // Bernoulli block model and its complement A' = 1 - A.
  BlockMoments m{Matrix(2, 2), Matrix(2, 2)};
  const double p11 = 0.7, p12 = 0.3, p22 = 0.5;
  m.B(0, 0) = p11;
  m.B(0, 1) = m.B(1, 0) = p12;
  m.B(1, 1) = p22;
  m.C(0, 0) = p11 * (1 - p11);
  m.C(0, 1) = m.C(1, 0) = p12 * (1 - p12);
  m.C(1, 1) = p22 * (1 - p22);
  const std::vector<double> pi = {0.4, 0.6};
  const double base = size_adjusted_chernoff_auto(m, pi).C;
  const BlockMoments complement = affine_block_moments(m, -1.0, 1.0);
  // The complement's Bernoulli variances are unchanged: (1-p)p.
  CHECK(complement.B(0, 0) == doctest::Approx(1.0 - p11));
  CHECK(complement.C(0, 0) == doctest::Approx(p11 * (1 - p11)));
  const double comp = size_adjusted_chernoff_auto(complement, pi).C;
  CHECK(comp == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("signatures and their tolerance") {
  Matrix b(2, 2);
  b(0, 0) = b(1, 1) = 0.5;
  b(0, 1) = b(1, 0) = 0.6;
  const Signature sig = signature_of(b);
  CHECK(sig.d == 2);
  CHECK(sig.p == 1);
  CHECK(sig.q == 1);

  const Signature zero = signature_of(Matrix(3, 3));
  CHECK(zero.d == 0);
  CHECK(zero.p == 0);
  CHECK(zero.q == 0);
}

TEST_CASE("affine shift can flip the signature while interlacing holds") {
  Matrix b(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = -1.0;
  const Signature before = signature_of(b);
  CHECK(before.p == 1);
  CHECK(before.q == 1);
  CHECK(interlacing_check(b, 1.0, 10.0));
  // B' = [[11,10],[10,9]] has eigenvalues 10 +- sqrt(101): signature (2,0).
  Matrix shifted(2, 2);
  shifted(0, 0) = 11.0;
  shifted(0, 1) = shifted(1, 0) = 10.0;
  shifted(1, 1) = 9.0;
  const Signature after = signature_of(shifted);
  CHECK(after.p == 2);
  CHECK(after.q == 0);
}

TEST_CASE("interlacing holds for random matrices and degenerate b") {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix b(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j) {
        const double v = 2.0 * rng.next_double() - 1.0;
        b(i, j) = v;
        b(j, i) = v;
      }
    const double a = 0.1 + 2.0 * rng.next_double();
    const double shift = 0.01 + rng.next_double();
    CHECK(interlacing_check(b, a, shift));
  }
}

TEST_CASE("exact P embedding matches the dense route") {
  const PoissonPairModels models = poisson_pair_models(0.5, 0.6);
  SplitMix64 rng(51);
  const std::size_t n = 80;
  std::vector<int> z(n);
  for (auto& zi : z) zi = rng.next_double() < 0.4 ? 1 : 2;

  const Embedding fast = exact_p_embedding(z, models.poisson.B);
  // Dense spectral embedding of P for comparison.
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p(i, j) = models.poisson.B(z[i] - 1, z[j] - 1);
  const Embedding dense = spectral_embed(p, fast.dim());
  CHECK(fast.p == dense.p);
  CHECK(fast.q == dense.q);
  for (int c = 0; c < fast.dim(); ++c)
    CHECK(fast.values[c] == doctest::Approx(dense.values[c]).epsilon(1e-9));
  CHECK(max_abs(subtract(fast.X, dense.X)) <= 1e-8 * max_abs(dense.X));
}
