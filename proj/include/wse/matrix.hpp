#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wse {

// Dense row-major matrix of doubles. Small by design: the project needs
// symmetric eigenproblems, tall-skinny products and norms, nothing more.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix transpose_multiply(const Matrix& a, const Matrix& b);  // aᵀ·b
Matrix subtract(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_row_norm(const Matrix& a);  // two-to-infinity norm
bool is_symmetric(const Matrix& a, double tol);

// Scales row i by s[i] (left) or column j by s[j] (right).
Matrix scale_rows(const Matrix& a, std::span<const double> s);
Matrix scale_cols(const Matrix& a, std::span<const double> s);

}  // namespace wse
