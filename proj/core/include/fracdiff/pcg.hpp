// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/csr.hpp"

namespace fracdiff {

struct CgConfig {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0 means 10 * n
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations, double rel_residual)
      : std::runtime_error(what),
        iterations(iterations),
        rel_residual(rel_residual) {}

  int iterations;
  double rel_residual;
};

template <typename Op>
concept SpdOperator = requires(const Op& op, std::span<const double> x,
                               std::span<double> y) {
  { op.rows() } -> std::convertible_to<int>;
  op.multiply(x, y);
  { op.jacobi_diagonal() } -> std::convertible_to<std::vector<double>>;
};

/// ca * A + cb * B applied without materializing the combination; A and B
/// share the dimension. Used for the pseudo-time step matrices, which
/// change every step while A and B stay cached.
class SparsePencil {
 public:
  SparsePencil(const CsrMatrix& a, double ca, const CsrMatrix& b, double cb)
      : a_(&a), b_(&b), ca_(ca), cb_(cb) {
    if (a.rows() != b.rows()) {
      throw std::invalid_argument("pencil dimension mismatch");
    }
  }

  int rows() const { return a_->rows(); }

  void multiply(std::span<const double> x, std::span<double> y) const {
    for (double& v : y) v = 0.0;
    a_->multiply_add(x, y, ca_);
    b_->multiply_add(x, y, cb_);
  }

  std::vector<double> jacobi_diagonal() const {
    std::vector<double> diag = a_->jacobi_diagonal();
    const std::vector<double> db = b_->jacobi_diagonal();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      diag[i] = ca_ * diag[i] + cb_ * db[i];
    }
    return diag;
  }

 private:
  const CsrMatrix* a_;
  const CsrMatrix* b_;
  double ca_;
  double cb_;
};

struct CgSolution {
  std::vector<double> x;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive
/// definite operators. Terminates when the true residual satisfies
/// ||Ax - b|| <= rel_tol * ||b||; throws NonConvergence otherwise.
template <SpdOperator Op>
CgSolution pcg_solve(const Op& op, std::span<const double> rhs,
                     const CgConfig& cfg = {},
                     std::span<const double> initial_guess = {}) {
  const int n = op.rows();
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("pcg dimension mismatch");
  }
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10 * n;

  CgSolution sol;
  sol.x.assign(n, 0.0);
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) return sol;

  const std::vector<double> diag = op.jacobi_diagonal();
  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0)) {
      throw std::invalid_argument("pcg: non-positive diagonal entry");
    }
    inv_diag[i] = 1.0 / diag[i];
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  if (!initial_guess.empty()) {
    if (static_cast<int>(initial_guess.size()) != n) {
      throw std::invalid_argument("pcg initial guess dimension mismatch");
    }
    std::copy(initial_guess.begin(), initial_guess.end(), sol.x.begin());
    op.multiply(sol.x, r);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
  } else {
    std::copy(rhs.begin(), rhs.end(), r.begin());
  }

  double rnorm = norm2(r);
  const double target = cfg.rel_tol * bnorm;
  if (rnorm <= target) {
    sol.rel_residual = rnorm / bnorm;
    return sol;
  }

  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rho = dot_product(r, z);

  int it = 0;
  while (it < max_iter) {
    ++it;
    op.multiply(p, q);
    const double pq = dot_product(p, q);
    if (!(pq > 0.0)) {
      throw NonConvergence("pcg: operator is not positive definite", it,
                           rnorm / bnorm);
    }
    const double alpha = rho / pq;
    for (int i = 0; i < n; ++i) {
      sol.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    if (rnorm <= target) {
      // Recursive residual reached the target; verify with the true one.
      op.multiply(sol.x, q);
      for (int i = 0; i < n; ++i) q[i] = rhs[i] - q[i];
      const double true_norm = norm2(q);
      if (true_norm <= target) {
        sol.iterations = it;
        sol.rel_residual = true_norm / bnorm;
        return sol;
      }
      r = q;
      rnorm = true_norm;
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rho_next = dot_product(r, z);
    const double beta = rho_next / rho;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rho = rho_next;
  }
  throw NonConvergence(
      "pcg: no convergence after " + std::to_string(max_iter) +
          " iterations (rel residual " + std::to_string(rnorm / bnorm) + ")",
      max_iter, rnorm / bnorm);
}

}  // namespace fracdiff
