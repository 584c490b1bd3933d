// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracdiff {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_csr(const CsrMatrix& a) {
  DenseMatrix m(a.rows(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      m(i, a.col_indices()[k]) = a.values()[k];
    }
  }
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) {
    throw std::invalid_argument("dense multiply dimension mismatch");
  }
  std::vector<double> y(rows_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    const auto col = column(j);
    const double xj = x[j];
    for (int i = 0; i < rows_; ++i) y[i] += col[i] * xj;
  }
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int j = 0; j < cols_; ++j) {
    for (int i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  }
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

void DenseMatrix::symmetrize() {
  for (int j = 0; j < cols_; ++j) {
    for (int i = j + 1; i < rows_; ++i) {
      const double avg = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = avg;
      (*this)(j, i) = avg;
    }
  }
}

DenseMatrix cholesky_factor(const DenseMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky: not square");
  DenseMatrix lower(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (int k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) {
      throw std::runtime_error("cholesky: matrix is not positive definite");
    }
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double sum = a(i, j);
      for (int k = 0; k < j; ++k) sum -= lower(i, k) * lower(j, k);
      lower(i, j) = sum / ljj;
    }
  }
  return lower;
}

std::vector<double> forward_substitute(const DenseMatrix& lower,
                                       std::span<const double> b) {
  const int n = lower.rows();
  std::vector<double> x(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    double sum = x[i];
    for (int k = 0; k < i; ++k) sum -= lower(i, k) * x[k];
    x[i] = sum / lower(i, i);
  }
  return x;
}

std::vector<double> backward_substitute_transposed(const DenseMatrix& lower,
                                                   std::span<const double> b) {
  const int n = lower.rows();
  std::vector<double> x(b.begin(), b.end());
  for (int i = n - 1; i >= 0; --i) {
    double sum = x[i];
    for (int k = i + 1; k < n; ++k) sum -= lower(k, i) * x[k];
    x[i] = sum / lower(i, i);
  }
  return x;
}

std::vector<double> cholesky_solve(const DenseMatrix& lower,
                                   std::span<const double> b) {
  const std::vector<double> y = forward_substitute(lower, b);
  return backward_substitute_transposed(lower, y);
}

SymmetricEigen jacobi_eigendecomposition(DenseMatrix a, double rel_off_tol,
                                         int max_sweeps) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi: not square");
  DenseMatrix v = DenseMatrix::identity(n);
  const double full_norm = std::max(a.frobenius_norm(), 1e-300);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > rel_off_tol * full_norm) {
    if (++sweep > max_sweeps) {
      throw std::runtime_error("jacobi eigensolver did not converge");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen result;
  result.eigenvalues.resize(n);
  result.vectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    result.eigenvalues[j] = a(perm[j], perm[j]);
    const auto src = v.column(perm[j]);
    std::copy(src.begin(), src.end(), result.vectors.column(j).begin());
  }
  return result;
}

}  // namespace fracdiff
