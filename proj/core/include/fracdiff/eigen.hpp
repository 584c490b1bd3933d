// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracdiff/assembly.hpp"
#include "fracdiff/dense.hpp"

namespace fracdiff {

/// Dense paths (the verification oracle) refuse systems beyond this size.
inline constexpr int kDenseLimit = 600;

/// Full generalized eigendecomposition K V = M V diag(lambda) with
/// M-orthonormal columns (V' M V = I). Serves as the oracle for operator
/// functions: f(A) w = V f(diag(lambda)) V' M w.
struct DenseSpectral {
  std::vector<double> eigenvalues;  // ascending, all positive
  DenseMatrix vectors;              // columns M-orthonormal
  DenseMatrix vt_mass;              // vectors' * M

  int dim() const { return vectors.rows(); }

  /// c = V' M w (coordinates in the eigenbasis).
  std::vector<double> to_eigenbasis(std::span<const double> w) const;
  /// w = V c.
  std::vector<double> from_eigenbasis(std::span<const double> c) const;
  /// V f(diag(lambda)) V' M w.
  std::vector<double> apply_function(std::span<const double> w,
                                     const std::function<double(double)>& fn)
      const;
};

/// Cholesky reduction M = L L' followed by cyclic Jacobi rotations on
/// L^-1 K L^-T; back-transform restores M-orthonormal vectors. Guarded to
/// kDenseLimit unknowns.
DenseSpectral dense_generalized_eig(const FemSystem& sys);

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;
  int iterations = 0;
};

/// Generalized inverse iteration on K v = lambda M v with the
/// Rayleigh-quotient estimate; stops when successive estimates differ by
/// at most tol * lambda. The start vector defaults to the M-normalized
/// all-ones vector for reproducible iteration counts.
EigenPair smallest_eigenpair(const FemSystem& sys, double tol = 1e-10,
                             int max_iterations = 500,
                             std::span<const double> start = {});

/// Computes (and caches on the system) the smallest eigenvalue.
double ensure_lambda1(FemSystem& sys, double tol = 1e-10);

}  // namespace fracdiff
