// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracdiff/pcg.hpp"

namespace fracdiff {

std::vector<double> DenseSpectral::to_eigenbasis(
    std::span<const double> w) const {
  return vt_mass.multiply(w);
}

std::vector<double> DenseSpectral::from_eigenbasis(
    std::span<const double> c) const {
  return vectors.multiply(c);
}

std::vector<double> DenseSpectral::apply_function(
    std::span<const double> w, const std::function<double(double)>& fn) const {
  std::vector<double> c = to_eigenbasis(w);
  for (int i = 0; i < dim(); ++i) c[i] *= fn(eigenvalues[i]);
  return from_eigenbasis(c);
}

DenseSpectral dense_generalized_eig(const FemSystem& sys) {
  const int n = sys.dim;
  if (n > kDenseLimit) {
    throw std::invalid_argument("dense eigendecomposition limited to " +
                                std::to_string(kDenseLimit) + " unknowns");
  }

  const DenseMatrix kd = DenseMatrix::from_csr(sys.stiffness);
  const DenseMatrix md = DenseMatrix::from_csr(sys.mass);
  const DenseMatrix lower = cholesky_factor(md);

  // C = L^-1 K L^-T, formed column-wise through triangular solves.
  DenseMatrix half(n, n);
  for (int j = 0; j < n; ++j) {
    const std::vector<double> col = forward_substitute(lower, kd.column(j));
    std::copy(col.begin(), col.end(), half.column(j).begin());
  }
  DenseMatrix c(n, n);
  const DenseMatrix half_t = half.transpose();
  for (int j = 0; j < n; ++j) {
    const std::vector<double> col =
        forward_substitute(lower, half_t.column(j));
    std::copy(col.begin(), col.end(), c.column(j).begin());
  }
  c.symmetrize();

  SymmetricEigen eig = jacobi_eigendecomposition(c);

  DenseSpectral spectral;
  spectral.eigenvalues = std::move(eig.eigenvalues);
  spectral.vectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    const std::vector<double> col =
        backward_substitute_transposed(lower, eig.vectors.column(j));
    std::copy(col.begin(), col.end(), spectral.vectors.column(j).begin());
  }

  DenseMatrix mv(n, n);
  for (int j = 0; j < n; ++j) {
    sys.mass.multiply(spectral.vectors.column(j), mv.column(j));
  }
  spectral.vt_mass = mv.transpose();
  return spectral;
}

EigenPair smallest_eigenpair(const FemSystem& sys, double tol,
                             int max_iterations,
                             std::span<const double> start) {
  const int n = sys.dim;
  std::vector<double> v(n, 1.0);
  if (!start.empty()) {
    if (static_cast<int>(start.size()) != n) {
      throw std::invalid_argument("start vector dimension mismatch");
    }
    v.assign(start.begin(), start.end());
  }

  auto normalize = [&](std::vector<double>& w) {
    const double nm = m_norm(sys.mass, w);
    if (!(nm > 0.0)) {
      throw std::invalid_argument("start vector has zero M-norm");
    }
    for (double& x : w) x /= nm;
  };
  normalize(v);

  const CgConfig inner{1e-12, 0};
  std::vector<double> mv(n), kv(n), z;
  double lambda_prev = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    sys.mass.multiply(v, mv);
    z = pcg_solve(sys.stiffness, mv, inner, v).x;
    normalize(z);
    v = z;
    sys.stiffness.multiply(v, kv);
    const double lambda = dot_product(v, kv);  // v' M v = 1
    if (it > 1 && std::abs(lambda - lambda_prev) <= tol * std::abs(lambda)) {
      return {lambda, v, it};
    }
    lambda_prev = lambda;
  }
  throw NonConvergence("inverse iteration did not converge", max_iterations,
                       0.0);
}

double ensure_lambda1(FemSystem& sys, double tol) {
  if (!sys.lambda1) {
    sys.lambda1 = smallest_eigenpair(sys, tol).lambda;
  }
  return *sys.lambda1;
}

}  // namespace fracdiff
