#include <cmath>
#include <vector>

#include <doctest.h>

#include "wse/errors.hpp"
#include "wse/matrix.hpp"
#include "wse/rng.hpp"
#include "wse/spectral.hpp"

using namespace wse;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.next_double() - 0.5;
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

double reconstruction_error(const EigenDecomposition& ed, const Matrix& m) {
  Matrix vl = ed.vectors;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) vl(i, j) *= ed.values[j];
  return frobenius_norm(subtract(multiply(vl, transpose(ed.vectors)), m)) / frobenius_norm(m);
}

double orthonormality_error(const Matrix& v) {
  Matrix g = transpose_multiply(v, v);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return max_abs(g);
}

}  // namespace

TEST_CASE("identity spectrum") {
  const auto ed = eig_symmetric(Matrix::identity(3));
  for (double v : ed.values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("2x2 exchange matrix") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  const auto ed = eig_symmetric(m);
  CHECK(ed.values[0] == doctest::Approx(1.0));
  CHECK(ed.values[1] == doctest::Approx(-1.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(ed.vectors(0, 0) == doctest::Approx(r));
  CHECK(ed.vectors(1, 0) == doctest::Approx(r));
  CHECK(ed.vectors(0, 1) == doctest::Approx(r));
  CHECK(ed.vectors(1, 1) == doctest::Approx(-r));
}

TEST_CASE("tridiagonal 3x3 with hand-computed spectrum") {
  // Characteristic polynomial gives 2, 2 +- sqrt(2).
  Matrix m(3, 3);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 2;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(2, 2) = 2;
  const auto ed = eig_symmetric(m);
  CHECK(ed.values[0] == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(ed.values[1] == doctest::Approx(2.0));
  CHECK(ed.values[2] == doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("residuals, orthonormality and reconstruction on random matrices") {
  for (std::size_t n : {5, 40, 200}) {
    const Matrix m = random_symmetric(n, 1000 + n);
    const auto ed = eig_symmetric(m);
    CHECK(orthonormality_error(ed.vectors) <= 1e-10);
    CHECK(reconstruction_error(ed, m) <= 1e-8);
    // ||M v - lambda v|| per pair.
    const double scale = std::max(1.0, frobenius_norm(m));
    for (std::size_t c = 0; c < n; ++c) {
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mv = 0.0;
        for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * ed.vectors(j, c);
        const double r = mv - ed.values[c] * ed.vectors(i, c);
        res += r * r;
      }
      CHECK(std::sqrt(res) <= 1e-9 * scale);
    }
    // Descending order.
    for (std::size_t c = 1; c < n; ++c) CHECK(ed.values[c - 1] >= ed.values[c]);
  }
}

TEST_CASE("sign convention is deterministic") {
  const Matrix m = random_symmetric(30, 77);
  const auto e1 = eig_symmetric(m);
  const auto e2 = eig_symmetric(m);
  CHECK(max_abs(subtract(e1.vectors, e2.vectors)) == 0.0);
  for (std::size_t c = 0; c < 30; ++c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 30; ++i)
      if (std::fabs(e1.vectors(i, c)) > std::fabs(e1.vectors(best, c))) best = i;
    CHECK(e1.vectors(best, c) > 0.0);
  }
}

TEST_CASE("non symmetric input is rejected") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 2.0;
  CHECK_THROWS_AS(eig_symmetric(m), std::invalid_argument);
}

TEST_CASE("embedding of a rank-1 matrix") {
  // c * v v^T with unit v and c > 0.
  const std::size_t n = 6;
  std::vector<double> v = {0.1, -0.2, 0.4, 0.5, -0.3, 0.2};
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  const double c = 2.5;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = c * v[i] * v[j];

  const Embedding emb = spectral_embed(m, 1);
  CHECK(emb.p == 1);
  CHECK(emb.q == 0);
  CHECK(emb.values[0] == doctest::Approx(c));
  // X = sqrt(c) v up to the sign convention.
  double flip = emb.X(0, 0) * v[0] < 0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i)
    CHECK(emb.X(i, 0) == doctest::Approx(flip * std::sqrt(c) * v[i]));
}

TEST_CASE("embedding of the two-community mean block") {
  Matrix b(2, 2);
  b(0, 0) = 0.5;
  b(0, 1) = 0.6;
  b(1, 0) = 0.6;
  b(1, 1) = 0.5;
  const Embedding emb = spectral_embed(b, 2);
  CHECK(emb.p == 1);
  CHECK(emb.q == 1);
  CHECK(emb.values[0] == doctest::Approx(1.1));
  CHECK(emb.values[1] == doctest::Approx(-0.1));
  CHECK(emb.X(0, 0) == doctest::Approx(std::sqrt(0.55)));
  CHECK(emb.X(1, 0) == doctest::Approx(std::sqrt(0.55)));
  CHECK(std::fabs(emb.X(0, 1)) == doctest::Approx(std::sqrt(0.05)));
  CHECK(emb.X(0, 1) * emb.X(1, 1) < 0.0);
}

TEST_CASE("embedding reconstructs rank-d matrices") {
  // Random rank-3 symmetric matrix with mixed signature.
  const std::size_t n = 60;
  SplitMix64 rng(5);
  Matrix x(n, 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.next_double() - 0.3;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = x(i, 0) * x(j, 0) + x(i, 1) * x(j, 1) - x(i, 2) * x(j, 2);

  const Embedding emb = spectral_embed(m, 3);
  CHECK(emb.p == 2);
  CHECK(emb.q == 1);
  const Matrix rec = indefinite_gram(emb);
  CHECK(frobenius_norm(subtract(rec, m)) <= 1e-8 * frobenius_norm(m));
}

TEST_CASE("embedding invariance under indefinite rotation") {
  // X Q with Q in O(p,q) reconstructs the same matrix.
  const std::size_t n = 25;
  SplitMix64 rng(9);
  Matrix x(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = rng.next_double() + 1.0;
    x(i, 1) = rng.next_double() - 0.5;
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = x(i, 0) * x(j, 0) - x(i, 1) * x(j, 1);
  const Embedding emb = spectral_embed(m, 2);

  // Hyperbolic rotation in O(1,1).
  const double s = 0.7;
  Matrix q(2, 2);
  q(0, 0) = std::cosh(s);
  q(0, 1) = std::sinh(s);
  q(1, 0) = std::sinh(s);
  q(1, 1) = std::cosh(s);
  Embedding rotated = emb;
  rotated.X = multiply(emb.X, q);
  CHECK(frobenius_norm(subtract(indefinite_gram(rotated), indefinite_gram(emb))) <=
        1e-8 * frobenius_norm(m));
}

TEST_CASE("spectral_embed agrees with the full decomposition") {
  const std::size_t n = 120;
  const Matrix m = random_symmetric(n, 31);
  const Embedding emb = spectral_embed(m, 4);
  const auto ed = eig_symmetric(m);
  std::vector<double> mags(ed.values);
  for (double& v : mags) v = std::fabs(v);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  std::vector<double> got(4);
  for (int c = 0; c < 4; ++c) got[c] = std::fabs(emb.values[c]);
  std::sort(got.begin(), got.end(), std::greater<>());
  for (int c = 0; c < 4; ++c) CHECK(got[c] == doctest::Approx(mags[c]).epsilon(1e-10));
}

TEST_CASE("degenerate dimension is rejected") {
  // Rank-1 matrix, d = 2 requested.
  Matrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = 1.0;
  CHECK_THROWS_AS(spectral_embed(m, 2), NumericError);
}

TEST_CASE("near-tied boundary magnitudes produce a warning") {
  Matrix m(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = 1.0;
  m(2, 2) = 1.0;
  const Embedding emb = spectral_embed(m, 1);
  CHECK(emb.warnings.empty());
  const Embedding emb2 = spectral_embed(m, 2);
  CHECK(!emb2.warnings.empty());
}

TEST_CASE("dimension selection") {
  const std::vector<double> values = {10.0, -9.0, 1.0, -0.9};
  CHECK(select_dimension(values, DimensionMethod::largest_gap(3)) == 2);
  CHECK(select_dimension(values, DimensionMethod::manual(12)) == 12);
  CHECK_THROWS_AS(select_dimension(std::vector<double>{1.0}, DimensionMethod::manual(1)),
                  std::invalid_argument);
}

TEST_CASE("clustered eigenvalues still give orthonormal embedding vectors") {
  // Two exactly equal dominant eigenvalues.
  Matrix m(6, 6);
  m(0, 0) = 5.0;
  m(1, 1) = 5.0;
  m(2, 2) = 1.0;
  m(3, 3) = 0.5;
  m(4, 4) = 0.25;
  m(5, 5) = 0.1;
  const Embedding emb = spectral_embed(m, 2);
  double dot = 0.0;
  double n0 = 0.0;
  double n1 = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    dot += emb.X(i, 0) * emb.X(i, 1);
    n0 += emb.X(i, 0) * emb.X(i, 0);
    n1 += emb.X(i, 1) * emb.X(i, 1);
  }
  CHECK(n0 == doctest::Approx(5.0));
  CHECK(n1 == doctest::Approx(5.0));
  CHECK(std::fabs(dot) <= 1e-8 * std::sqrt(n0 * n1));
}
