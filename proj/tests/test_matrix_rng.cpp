#include <cmath>

#include <doctest.h>

#include "wse/matrix.hpp"
#include "wse/rng.hpp"

using namespace wse;

TEST_CASE("matrix products and norms") {
  Matrix a(2, 3);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(0, 2) = 3;
  a(1, 0) = 4;
  a(1, 1) = 5;
  a(1, 2) = 6;
  Matrix b = transpose(a);
  Matrix g = multiply(a, b);  // 2x2 Gram
  CHECK(g(0, 0) == doctest::Approx(14.0));
  CHECK(g(0, 1) == doctest::Approx(32.0));
  CHECK(g(1, 1) == doctest::Approx(77.0));
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(91.0)));
  CHECK(max_abs(a) == doctest::Approx(6.0));
  CHECK(max_row_norm(a) == doctest::Approx(std::sqrt(77.0)));

  Matrix tg = transpose_multiply(a, a);  // 3x3
  CHECK(tg(0, 0) == doctest::Approx(17.0));
  CHECK(tg(2, 2) == doctest::Approx(45.0));
}

TEST_CASE("edge substreams are order independent and seed sensitive") {
  SplitMix64 a = edge_stream(7, 3, 5);
  SplitMix64 b = edge_stream(7, 3, 5);
  CHECK(a.next_u64() == b.next_u64());

  SplitMix64 c = edge_stream(7, 5, 3);
  SplitMix64 d = edge_stream(8, 3, 5);
  SplitMix64 e = edge_stream(7, 3, 5);
  const std::uint64_t base = e.next_u64();
  CHECK(c.next_u64() != base);
  CHECK(d.next_u64() != base);
}

TEST_CASE("uniform doubles stay in range") {
  SplitMix64 rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  SplitMix64 rng2(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng2.next_positive();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("samplers match analytic moments") {
  const int n = 200000;
  SplitMix64 rng(2024);

  SUBCASE("gaussian") {
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_gaussian(rng, 2.0, 3.0);
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(9.0).epsilon(0.03));
  }

  SUBCASE("poisson small and large rates") {
    for (double rate : {0.5, 3.0, 25.0}) {
      double s1 = 0, s2 = 0;
      for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(sample_poisson(rng, rate));
        s1 += x;
        s2 += x * x;
      }
      const double mean = s1 / n;
      const double var = s2 / n - mean * mean;
      CHECK(mean == doctest::Approx(rate).epsilon(0.03));
      CHECK(var == doctest::Approx(rate).epsilon(0.05));
    }
  }

  SUBCASE("beta via two gammas") {
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_beta(rng, 1.0, 0.5);
      s1 += x;
      s2 += x * x;
    }
    // Beta(1, 0.5): mean 2/3, var = ab/((a+b)^2(a+b+1)) = 0.5/(2.25*2.5)
    CHECK(s1 / n == doctest::Approx(2.0 / 3.0).epsilon(0.01));
    CHECK(s2 / n - (s1 / n) * (s1 / n) == doctest::Approx(0.5 / (2.25 * 2.5)).epsilon(0.05));
  }
}
