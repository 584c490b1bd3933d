// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fracdiff {

CsrMatrix CsrMatrix::from_triplets(int n, const std::vector<Triplet>& entries) {
  CsrMatrix m;
  m.n_ = n;

  std::vector<int> counts(n + 1, 0);
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::invalid_argument("triplet index out of range");
    }
    ++counts[t.row + 1];
  }
  std::vector<int> starts(n + 1, 0);
  for (int i = 0; i < n; ++i) starts[i + 1] = starts[i] + counts[i + 1];

  // Bucket by row, preserving insertion order within a row so duplicate
  // (i,j) contributions are summed in a reproducible order.
  std::vector<int> order(entries.size());
  {
    std::vector<int> cursor(starts.begin(), starts.end() - 1);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      order[cursor[entries[k].row]++] = static_cast<int>(k);
    }
  }

  m.row_offsets_.assign(n + 1, 0);
  std::vector<int> scratch;
  for (int i = 0; i < n; ++i) {
    scratch.assign(order.begin() + starts[i], order.begin() + starts[i + 1]);
    std::stable_sort(scratch.begin(), scratch.end(), [&](int a, int b) {
      return entries[a].col < entries[b].col;
    });
    int last_col = -1;
    for (int k : scratch) {
      if (entries[k].col != last_col) {
        last_col = entries[k].col;
        m.col_indices_.push_back(last_col);
        m.values_.push_back(entries[k].value);
      } else {
        m.values_.back() += entries[k].value;
      }
    }
    m.row_offsets_[i + 1] = static_cast<int>(m.col_indices_.size());
  }
  return m;
}

void CsrMatrix::multiply(std::span<const double> x,
                         std::span<double> y) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_) {
    throw std::invalid_argument("spmv dimension mismatch");
  }
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[i] = sum;
  }
}

void CsrMatrix::multiply_add(std::span<const double> x, std::span<double> y,
                             double coef) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_) {
    throw std::invalid_argument("spmv dimension mismatch");
  }
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[i] += coef * sum;
  }
}

std::vector<double> CsrMatrix::jacobi_diagonal() const {
  std::vector<double> diag(n_, 0.0);
  for (int i = 0; i < n_; ++i) diag[i] = value_at(i, i);
  return diag;
}

double CsrMatrix::value_at(int i, int j) const {
  for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
    if (col_indices_[k] == j) return values_[k];
  }
  return 0.0;
}

bool CsrMatrix::is_symmetric(double tol) const {
  const double scale = std::max(max_abs(), 1e-300);
  for (int i = 0; i < n_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const int j = col_indices_[k];
      if (std::abs(values_[k] - value_at(j, i)) > tol * scale) return false;
    }
  }
  return true;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  a.multiply(x, y);
  return y;
}

CsrMatrix csr_combine(double ca, const CsrMatrix& a, double cb,
                      const CsrMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("csr_combine dimension mismatch");
  }
  std::vector<Triplet> entries;
  entries.reserve(a.nnz() + b.nnz());
  for (int i = 0; i < a.rows(); ++i) {
    int ka = a.row_offsets()[i];
    int kb = b.row_offsets()[i];
    const int ea = a.row_offsets()[i + 1];
    const int eb = b.row_offsets()[i + 1];
    while (ka < ea || kb < eb) {
      const int ja = ka < ea ? a.col_indices()[ka] : a.rows();
      const int jb = kb < eb ? b.col_indices()[kb] : b.rows();
      if (ja == jb) {
        entries.push_back({i, ja, ca * a.values()[ka] + cb * b.values()[kb]});
        ++ka;
        ++kb;
      } else if (ja < jb) {
        entries.push_back({i, ja, ca * a.values()[ka]});
        ++ka;
      } else {
        entries.push_back({i, jb, cb * b.values()[kb]});
        ++kb;
      }
    }
  }
  return CsrMatrix::from_triplets(a.rows(), entries);
}

double dot_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot_product(a, a)); }

double m_norm(const CsrMatrix& mass, std::span<const double> w) {
  std::vector<double> mw(mass.rows());
  mass.multiply(w, mw);
  return std::sqrt(std::max(0.0, dot_product(w, mw)));
}

}  // namespace fracdiff
