// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "fracdiff/assembly.hpp"
#include "fracdiff/eigen.hpp"
#include "fracdiff/pcg.hpp"

namespace fracdiff {

enum class CauchyStepper { Euler, CrankNicolson };

/// Parameters for applying A^-beta through the pseudo-parabolic Cauchy
/// problem on the unit pseudo-time interval:
///   (s G + delta I) dy/ds + beta G y = 0,  G = A - delta I,
///   y(0) = delta^-beta w,  y(1) = A^-beta w.
/// delta must not exceed the smallest eigenvalue of A, otherwise G loses
/// positivity and the transfer-operator bounds fail.
struct FracPowConfig {
  double beta = 0.5;
  double delta = 0.0;
  int steps = 10;  // pseudo-time steps K; eta = 1/K
  CauchyStepper stepper = CauchyStepper::CrankNicolson;
  CgConfig solver{1e-13, 0};

  void validate() const;
};

/// Production default for the spectral lower bound: slightly below the
/// computed smallest eigenvalue so the bound survives eigensolver error.
inline double default_delta(double lambda1) { return 0.99 * lambda1; }

/// Applies A^-beta to w by stepping the Cauchy problem. In matrix form,
/// with S = K - delta*M, the backward Euler step solves
///   [s_{k+1} S + delta M + eta beta S] y_{k+1} = [s_{k+1} S + delta M] y_k
/// and Crank-Nicolson the symmetric analogue at s_{k+1/2}. Each step is a
/// PCG solve, matrix-free over the cached K and M. The precondition
/// delta <= lambda1 is checked against the cached estimate on the system
/// (tolerance 1e-8 relative); callers populate it via ensure_lambda1.
/// When level_m_norms is given it receives the M-norm of every level
/// y_0 ... y_K.
std::vector<double> apply_inv_fracpow(const FemSystem& sys,
                                      std::span<const double> w,
                                      const FracPowConfig& cfg,
                                      std::vector<double>* level_m_norms =
                                          nullptr);

struct SpectralBounds {
  double q_min = 0.0;
  double q_max = 0.0;
};

/// Extreme generalized eigenvalues (in the M-inner product) of the
/// transfer operator Q_K mapping w to y_K. Formed column-wise by applying
/// the stepper to the M-orthonormal eigenvectors; dense path, guarded to
/// kDenseLimit. A precomputed decomposition may be passed to avoid
/// recomputing it.
SpectralBounds qk_spectral_check(const FemSystem& sys,
                                 const FracPowConfig& cfg,
                                 const DenseSpectral* spectral = nullptr);

/// Oracle: V diag(lambda^power) V' M w.
std::vector<double> oracle_fracpow(const DenseSpectral& spectral,
                                   std::span<const double> w, double power);

/// Oracle for the interior pseudo-time state:
///   y(s) = delta^beta (s (A - delta I) + delta I)^-beta * delta^-beta w,
/// evaluated spectrally. At s = 1 this equals A^-beta w.
std::vector<double> oracle_cauchy_state(const DenseSpectral& spectral,
                                        std::span<const double> w, double beta,
                                        double delta, double s);

}  // namespace fracdiff
