// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "fracdiff/csr.hpp"

namespace fracdiff {

/// Column-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  }

  static DenseMatrix identity(int n);
  static DenseMatrix from_csr(const CsrMatrix& a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(j) * rows_ + i];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(j) * rows_ + i];
  }

  std::span<double> column(int j) {
    return {data_.data() + static_cast<std::size_t>(j) * rows_,
            static_cast<std::size_t>(rows_)};
  }
  std::span<const double> column(int j) const {
    return {data_.data() + static_cast<std::size_t>(j) * rows_,
            static_cast<std::size_t>(rows_)};
  }

  std::vector<double> multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;
  double frobenius_norm() const;

  void symmetrize();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular Cholesky factor of an SPD matrix; throws
/// std::runtime_error when a non-positive pivot shows the matrix is not
/// positive definite.
DenseMatrix cholesky_factor(const DenseMatrix& a);

std::vector<double> forward_substitute(const DenseMatrix& lower,
                                       std::span<const double> b);
std::vector<double> backward_substitute_transposed(const DenseMatrix& lower,
                                                   std::span<const double> b);
std::vector<double> cholesky_solve(const DenseMatrix& lower,
                                   std::span<const double> b);

struct SymmetricEigen {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix vectors;              // orthonormal columns
};

/// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal
/// Frobenius norm drops below rel_off_tol times the full norm.
SymmetricEigen jacobi_eigendecomposition(DenseMatrix a,
                                         double rel_off_tol = 1e-12,
                                         int max_sweeps = 60);

}  // namespace fracdiff
