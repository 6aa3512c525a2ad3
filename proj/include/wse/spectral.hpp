#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wse/matrix.hpp"

namespace wse {

// Full spectrum of a symmetric matrix. Eigenvalues are sorted in descending
// order; column i of `vectors` pairs with values[i]. Every eigenvector has
// its largest-magnitude entry positive (ties broken by lowest index) so
// repeated runs produce identical output.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;  // n x n, column-orthonormal
};

// Spectral embedding X = U |Lambda|^{1/2} built from the d largest-magnitude
// eigenvalues. Columns for positive eigenvalues come first (fixing the
// indefinite identity diag(1,..,1,-1,..,-1)); within each sign group columns
// are ordered by descending magnitude.
struct Embedding {
  Matrix X;                    // n x d
  int p = 0;                   // positive eigenvalues among the selected
  int q = 0;                   // negative eigenvalues among the selected
  std::vector<double> values;  // selected eigenvalues, in column order
  std::vector<std::string> warnings;

  int dim() const { return p + q; }
};

EigenDecomposition eig_symmetric(const Matrix& m);

Embedding spectral_embed(const Matrix& m, std::size_t d);

struct DimensionMethod {
  enum class Kind { manual, largest_gap };
  Kind kind = Kind::manual;
  std::size_t value = 1;  // d for manual, max_d for largest_gap

  static DimensionMethod manual(std::size_t d) { return {Kind::manual, d}; }
  static DimensionMethod largest_gap(std::size_t max_d) { return {Kind::largest_gap, max_d}; }
};

// largest_gap picks the d <= max_d maximizing |lambda_(d)| - |lambda_(d+1)|
// over the magnitude-sorted values.
std::size_t select_dimension(std::span<const double> values, const DimensionMethod& method);

// diag(1,...,1,-1,...,-1) with p ones and q minus ones.
Matrix indefinite_identity(int p, int q);

// X diag(1..,-1..) X^T; the low-rank reconstruction behind Definition-style
// identities and the dot-product predictors.
Matrix indefinite_gram(const Embedding& e);

}  // namespace wse
