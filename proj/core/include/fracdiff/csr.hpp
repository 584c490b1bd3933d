// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace fracdiff {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed-row sparse matrix with sorted column indices per row.
/// Duplicate triplets are summed in insertion order, so symmetric
/// assembly yields a bit-exact symmetric matrix. All products accumulate
/// in fixed row-major order for reproducibility.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  static CsrMatrix from_triplets(int n, const std::vector<Triplet>& entries);

  int rows() const { return n_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += coef * A x.
  void multiply_add(std::span<const double> x, std::span<double> y,
                    double coef) const;

  std::vector<double> jacobi_diagonal() const;

  /// Entry lookup; zero when the position is not stored.
  double value_at(int i, int j) const;

  bool is_symmetric(double tol) const;
  double max_abs() const;

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_ = 0;
  std::vector<int> row_offsets_ = {0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

/// ca * A + cb * B over the union sparsity pattern.
CsrMatrix csr_combine(double ca, const CsrMatrix& a, double cb,
                      const CsrMatrix& b);

double dot_product(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// sqrt(w' M w); the discrete L2 norm used throughout the solvers.
double m_norm(const CsrMatrix& mass, std::span<const double> w);

}  // namespace fracdiff
