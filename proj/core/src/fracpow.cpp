// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/fracpow.hpp"

#include <cmath>
#include <stdexcept>

namespace fracdiff {

void FracPowConfig::validate() const {
  if (beta < 0.0 || beta >= 1.0) {
    throw std::invalid_argument("beta must lie in [0, 1)");
  }
  if (beta > 0.0 && !(delta > 0.0)) {
    throw std::invalid_argument("delta must be positive");
  }
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

std::vector<double> apply_inv_fracpow(const FemSystem& sys,
                                      std::span<const double> w,
                                      const FracPowConfig& cfg,
                                      std::vector<double>* level_m_norms) {
  cfg.validate();
  if (static_cast<int>(w.size()) != sys.dim) {
    throw std::invalid_argument("apply_inv_fracpow dimension mismatch");
  }
  if (cfg.beta == 0.0) {
    // A^0 is the identity; the Cauchy problem is stationary.
    return std::vector<double>(w.begin(), w.end());
  }
  if (!sys.lambda1) {
    throw std::logic_error(
        "apply_inv_fracpow requires the cached smallest-eigenvalue estimate "
        "(call ensure_lambda1 first)");
  }
  if (cfg.delta > *sys.lambda1 * (1.0 + 1e-8)) {
    throw std::invalid_argument(
        "delta exceeds the smallest eigenvalue estimate (" +
        std::to_string(cfg.delta) + " > " + std::to_string(*sys.lambda1) +
        "); the transfer-operator bounds would fail");
  }

  const double eta = 1.0 / cfg.steps;
  const double delta = cfg.delta;
  const double beta = cfg.beta;

  std::vector<double> y(w.begin(), w.end());
  const double scale = std::pow(delta, -beta);
  for (double& v : y) v *= scale;

  if (level_m_norms) {
    level_m_norms->clear();
    level_m_norms->push_back(m_norm(sys.mass, y));
  }

  std::vector<double> rhs(sys.dim);
  for (int k = 0; k < cfg.steps; ++k) {
    // Coefficients over (K, M): a*S + delta*M = a*K + delta*(1-a)*M.
    double a_left = 0.0;
    double a_right = 0.0;
    if (cfg.stepper == CauchyStepper::Euler) {
      const double s_next = (k + 1) * eta;
      a_left = s_next + eta * beta;
      a_right = s_next;
    } else {
      const double s_mid = (k + 0.5) * eta;
      a_left = s_mid + 0.5 * eta * beta;
      a_right = s_mid - 0.5 * eta * beta;
    }
    const SparsePencil left(sys.stiffness, a_left, sys.mass,
                            delta * (1.0 - a_left));
    const SparsePencil right(sys.stiffness, a_right, sys.mass,
                             delta * (1.0 - a_right));
    right.multiply(y, rhs);
    y = pcg_solve(left, rhs, cfg.solver, y).x;
    if (level_m_norms) level_m_norms->push_back(m_norm(sys.mass, y));
  }
  return y;
}

SpectralBounds qk_spectral_check(const FemSystem& sys,
                                 const FracPowConfig& cfg,
                                 const DenseSpectral* spectral) {
  if (sys.dim > kDenseLimit) {
    throw std::invalid_argument("qk_spectral_check limited to " +
                                std::to_string(kDenseLimit) + " unknowns");
  }
  DenseSpectral local;
  if (!spectral) {
    local = dense_generalized_eig(sys);
    spectral = &local;
  }
  const int n = sys.dim;

  // Q_K expressed in the M-orthonormal eigenbasis; a congruence, so its
  // eigenvalues match the generalized ones of Q_K.
  DenseMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    const std::vector<double> z =
        apply_inv_fracpow(sys, spectral->vectors.column(j), cfg);
    const std::vector<double> coeffs = spectral->to_eigenbasis(z);
    std::copy(coeffs.begin(), coeffs.end(), q.column(j).begin());
  }
  q.symmetrize();
  const SymmetricEigen eig = jacobi_eigendecomposition(q);
  return {eig.eigenvalues.front(), eig.eigenvalues.back()};
}

std::vector<double> oracle_fracpow(const DenseSpectral& spectral,
                                   std::span<const double> w, double power) {
  return spectral.apply_function(
      w, [power](double lambda) { return std::pow(lambda, power); });
}

std::vector<double> oracle_cauchy_state(const DenseSpectral& spectral,
                                        std::span<const double> w, double beta,
                                        double delta, double s) {
  return spectral.apply_function(w, [beta, delta, s](double lambda) {
    return std::pow(s * (lambda - delta) + delta, -beta);
  });
}

}  // namespace fracdiff
