#include "wse/matrix.hpp"

#include <cassert>
#include <cmath>

namespace wse {

Matrix multiply(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row(i);
    const double* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aik * bk[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix transpose_multiply(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows());
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* oi = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aki * bk[j];
    }
  }
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double max_row_norm(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * ai[j];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::fabs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

Matrix scale_rows(const Matrix& a, std::span<const double> s) {
  assert(s.size() == a.rows());
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s[i];
  return out;
}

Matrix scale_cols(const Matrix& a, std::span<const double> s) {
  assert(s.size() == a.cols());
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s[j];
  return out;
}

}  // namespace wse
