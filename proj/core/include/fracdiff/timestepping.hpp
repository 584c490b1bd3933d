// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fracdiff/fracpow.hpp"

namespace fracdiff {

/// Smallest regularization weight for which the two-level scheme with the
/// backward-Euler transfer operator is unconditionally stable:
///   1/2 + (1 - alpha) / (2 alpha delta).
double sigma_min(double alpha, double delta);

enum class SchemeKind { Regularized, Explicit, OracleBackwardEuler };

/// Time discretization of  dw/dt + A^alpha w = psi(t),  w(0) = w0.
struct SchemeConfig {
  double alpha = 0.5;  // fractional power, (0, 1]
  double sigma = 0.5;  // regularization weight
  double tau = 0.0025;
  int n_steps = 40;
  FracPowConfig frac;  // frac.beta must equal 1 - alpha
  SchemeKind scheme = SchemeKind::Regularized;

  double final_time() const { return tau * n_steps; }
  void validate() const;
};

/// Two-level regularized scheme: with R = sigma (alpha A + (1-alpha) I),
///   (I + tau R)(w^{n+1} - w^n)/tau + A Q_K(A) w^n = psi^{n+1}.
/// The constant left-hand matrix M + tau sigma (alpha K + (1-alpha) M) and
/// its preconditioner diagonal are cached once per run.
class RegularizedStepper {
 public:
  RegularizedStepper(const FemSystem& sys, const SchemeConfig& cfg);

  std::vector<double> step(std::span<const double> w,
                           std::span<const double> load) const;

 private:
  const FemSystem& sys_;
  SchemeConfig cfg_;
  CsrMatrix lhs_;
};

/// Explicit-in-time scheme  M w^{n+1} = M w^n - tau K g^n + tau b, with
/// g^n = A^-beta w^n. Conditionally stable; divergence is left observable
/// to the caller.
class ExplicitStepper {
 public:
  ExplicitStepper(const FemSystem& sys, const SchemeConfig& cfg);

  std::vector<double> step(std::span<const double> w,
                           std::span<const double> load) const;

 private:
  const FemSystem& sys_;
  SchemeConfig cfg_;
};

/// Dense reference: backward Euler applied spectrally,
///   w^{n+1} = V diag(1/(1 + tau lambda^alpha)) V' M (w^n + tau psi).
std::vector<double> oracle_backward_euler_step(const DenseSpectral& spectral,
                                               std::span<const double> w,
                                               double tau, double alpha,
                                               std::span<const double> psi);

enum class RunStatus { Completed, Diverged };

struct EvolutionLevel {
  double t = 0.0;
  double solution_max = 0.0;
  double m_norm = 0.0;
  std::optional<double> d_norm;
};

struct EvolutionMonitors {
  bool d_norm = false;      // per-level D-norm (dense path, small systems)
  bool keep_states = false;  // retain every w^n
};

struct EvolutionRecord {
  std::vector<EvolutionLevel> levels;
  RunStatus status = RunStatus::Completed;
  std::vector<double> final_state;
  std::vector<std::vector<double>> states;  // filled when requested
};

/// Advances N levels from w0 (zeros when empty) under the selected scheme
/// with the time-independent load vector. Stops with status Diverged when
/// the M-norm passes 1e12.
EvolutionRecord run_evolution(const FemSystem& sys, const SchemeConfig& cfg,
                              std::span<const double> load,
                              std::span<const double> w0 = {},
                              const EvolutionMonitors& monitors = {});

/// The stability operator
///   D = I + tau (sigma (alpha A + (1-alpha) I) - 1/2 A Q_K(A)),
/// assembled in the M-orthonormal eigenbasis by driving the actual
/// stepper column by column. D >= I certifies the level-wise energy
/// estimate in the D-norm.
DenseMatrix stability_operator(const FemSystem& sys, const SchemeConfig& cfg,
                               const DenseSpectral& spectral);

struct StabilityReport {
  double d_min_eigenvalue = 0.0;
  bool estimate_held = false;
  double worst_ratio = 0.0;  // max over levels of lhs/rhs in the estimate
  int levels_checked = 0;
};

/// Builds D densely, reports its smallest generalized eigenvalue, runs the
/// evolution, and checks the level-wise estimate
///   ||w^{n+1}||_D <= ||w^n||_D + tau ||psi||_{D^-1}
/// at every level. Dense path, guarded to kDenseLimit.
StabilityReport verify_stability_operator(const FemSystem& sys,
                                          const SchemeConfig& cfg,
                                          std::span<const double> load,
                                          std::span<const double> w0 = {},
                                          const DenseSpectral* spectral =
                                              nullptr);

}  // namespace fracdiff
