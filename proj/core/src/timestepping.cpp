// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdiff {

namespace {

constexpr double kDivergenceThreshold = 1e12;

std::vector<double> d_weighted_product(const DenseMatrix& d,
                                       std::span<const double> c) {
  return d.multiply(c);
}

double d_norm_from_coeffs(const DenseMatrix& d, std::span<const double> c) {
  const std::vector<double> dc = d_weighted_product(d, c);
  return std::sqrt(std::max(0.0, dot_product(c, dc)));
}

}  // namespace

double sigma_min(double alpha, double delta) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return 0.5 + (1.0 - alpha) / (2.0 * alpha * delta);
}

void SchemeConfig::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
  if (std::abs(frac.beta - (1.0 - alpha)) > 1e-12) {
    throw std::invalid_argument("frac.beta must equal 1 - alpha");
  }
  frac.validate();
}

RegularizedStepper::RegularizedStepper(const FemSystem& sys,
                                       const SchemeConfig& cfg)
    : sys_(sys), cfg_(cfg) {
  cfg.validate();
  // M + tau sigma (alpha K + (1 - alpha) M).
  lhs_ = csr_combine(cfg.tau * cfg.sigma * cfg.alpha, sys.stiffness,
                     1.0 + cfg.tau * cfg.sigma * (1.0 - cfg.alpha), sys.mass);
}

std::vector<double> RegularizedStepper::step(std::span<const double> w,
                                             std::span<const double> load)
    const {
  const std::vector<double> g = apply_inv_fracpow(sys_, w, cfg_.frac);
  std::vector<double> rhs(sys_.dim);
  lhs_.multiply(w, rhs);
  sys_.stiffness.multiply_add(g, rhs, -cfg_.tau);
  for (int i = 0; i < sys_.dim; ++i) rhs[i] += cfg_.tau * load[i];
  return pcg_solve(lhs_, rhs, cfg_.frac.solver, w).x;
}

ExplicitStepper::ExplicitStepper(const FemSystem& sys, const SchemeConfig& cfg)
    : sys_(sys), cfg_(cfg) {
  cfg.validate();
}

std::vector<double> ExplicitStepper::step(std::span<const double> w,
                                          std::span<const double> load) const {
  const std::vector<double> g = apply_inv_fracpow(sys_, w, cfg_.frac);
  std::vector<double> rhs(sys_.dim);
  sys_.mass.multiply(w, rhs);
  sys_.stiffness.multiply_add(g, rhs, -cfg_.tau);
  for (int i = 0; i < sys_.dim; ++i) rhs[i] += cfg_.tau * load[i];
  return pcg_solve(sys_.mass, rhs, cfg_.frac.solver, w).x;
}

std::vector<double> oracle_backward_euler_step(const DenseSpectral& spectral,
                                               std::span<const double> w,
                                               double tau, double alpha,
                                               std::span<const double> psi) {
  std::vector<double> rhs(w.begin(), w.end());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += tau * psi[i];
  return spectral.apply_function(rhs, [tau, alpha](double lambda) {
    return 1.0 / (1.0 + tau * std::pow(lambda, alpha));
  });
}

EvolutionRecord run_evolution(const FemSystem& sys, const SchemeConfig& cfg,
                              std::span<const double> load,
                              std::span<const double> w0,
                              const EvolutionMonitors& monitors) {
  cfg.validate();
  const int n = sys.dim;
  if (static_cast<int>(load.size()) != n) {
    throw std::invalid_argument("load vector dimension mismatch");
  }

  std::vector<double> w(n, 0.0);
  if (!w0.empty()) {
    if (static_cast<int>(w0.size()) != n) {
      throw std::invalid_argument("initial state dimension mismatch");
    }
    w.assign(w0.begin(), w0.end());
  }

  std::optional<DenseSpectral> spectral;
  if (cfg.scheme == SchemeKind::OracleBackwardEuler || monitors.d_norm) {
    spectral = dense_generalized_eig(sys);
  }
  std::optional<DenseMatrix> d_matrix;
  if (monitors.d_norm) {
    d_matrix = stability_operator(sys, cfg, *spectral);
  }
  std::vector<double> psi;
  if (cfg.scheme == SchemeKind::OracleBackwardEuler) {
    psi = l2_project(sys, load);
  }

  std::optional<RegularizedStepper> regularized;
  std::optional<ExplicitStepper> explicit_stepper;
  if (cfg.scheme == SchemeKind::Regularized) {
    regularized.emplace(sys, cfg);
  } else if (cfg.scheme == SchemeKind::Explicit) {
    explicit_stepper.emplace(sys, cfg);
  }

  EvolutionRecord record;
  record.levels.reserve(cfg.n_steps + 1);

  auto push_level = [&](double t) {
    EvolutionLevel level;
    level.t = t;
    level.solution_max = w.empty() ? 0.0 : *std::max_element(w.begin(),
                                                             w.end());
    level.m_norm = m_norm(sys.mass, w);
    if (monitors.d_norm) {
      level.d_norm =
          d_norm_from_coeffs(*d_matrix, spectral->to_eigenbasis(w));
    }
    record.levels.push_back(level);
    if (monitors.keep_states) record.states.push_back(w);
    return std::isfinite(level.m_norm) && level.m_norm <= kDivergenceThreshold;
  };

  push_level(0.0);
  for (int step = 1; step <= cfg.n_steps; ++step) {
    switch (cfg.scheme) {
      case SchemeKind::Regularized:
        w = regularized->step(w, load);
        break;
      case SchemeKind::Explicit:
        w = explicit_stepper->step(w, load);
        break;
      case SchemeKind::OracleBackwardEuler:
        w = oracle_backward_euler_step(*spectral, w, cfg.tau, cfg.alpha, psi);
        break;
    }
    if (!push_level(step * cfg.tau)) {
      record.status = RunStatus::Diverged;
      break;
    }
  }
  record.final_state = std::move(w);
  return record;
}

DenseMatrix stability_operator(const FemSystem& sys, const SchemeConfig& cfg,
                               const DenseSpectral& spectral) {
  cfg.validate();
  if (sys.dim > kDenseLimit) {
    throw std::invalid_argument("stability_operator limited to " +
                                std::to_string(kDenseLimit) + " unknowns");
  }
  const int n = sys.dim;
  const DenseMatrix mass_lower =
      cholesky_factor(DenseMatrix::from_csr(sys.mass));

  auto apply_a = [&](std::span<const double> x) {
    std::vector<double> kx(n);
    sys.stiffness.multiply(x, kx);
    return cholesky_solve(mass_lower, kx);
  };

  DenseMatrix d(n, n);
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    const auto v = spectral.vectors.column(j);
    const std::vector<double> av = apply_a(v);
    const std::vector<double> qv = apply_inv_fracpow(sys, v, cfg.frac);
    const std::vector<double> aqv = apply_a(qv);
    for (int i = 0; i < n; ++i) {
      col[i] = v[i] +
               cfg.tau * (cfg.sigma * (cfg.alpha * av[i] +
                                       (1.0 - cfg.alpha) * v[i]) -
                          0.5 * aqv[i]);
    }
    const std::vector<double> coeffs = spectral.to_eigenbasis(col);
    std::copy(coeffs.begin(), coeffs.end(), d.column(j).begin());
  }
  d.symmetrize();
  return d;
}

StabilityReport verify_stability_operator(const FemSystem& sys,
                                          const SchemeConfig& cfg,
                                          std::span<const double> load,
                                          std::span<const double> w0,
                                          const DenseSpectral* spectral) {
  DenseSpectral local;
  if (!spectral) {
    local = dense_generalized_eig(sys);
    spectral = &local;
  }

  const DenseMatrix d = stability_operator(sys, cfg, *spectral);
  const SymmetricEigen d_eig = jacobi_eigendecomposition(d);

  StabilityReport report;
  report.d_min_eigenvalue = d_eig.eigenvalues.front();

  EvolutionMonitors monitors;
  monitors.keep_states = true;
  const EvolutionRecord record = run_evolution(sys, cfg, load, w0, monitors);

  // tau * ||psi||_{D^-1} with psi the projected load.
  const std::vector<double> psi = l2_project(sys, load);
  const std::vector<double> psi_coeffs = spectral->to_eigenbasis(psi);
  const DenseMatrix d_lower = cholesky_factor(d);
  const std::vector<double> d_inv_psi = cholesky_solve(d_lower, psi_coeffs);
  const double psi_dinv_norm =
      std::sqrt(std::max(0.0, dot_product(psi_coeffs, d_inv_psi)));

  report.estimate_held = true;
  report.worst_ratio = 0.0;
  for (std::size_t level = 0; level + 1 < record.states.size(); ++level) {
    const double before =
        d_norm_from_coeffs(d, spectral->to_eigenbasis(record.states[level]));
    const double after = d_norm_from_coeffs(
        d, spectral->to_eigenbasis(record.states[level + 1]));
    const double bound = before + cfg.tau * psi_dinv_norm;
    if (bound <= 1e-300) continue;
    const double ratio = after / bound;
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    if (after > bound * (1.0 + 1e-10)) report.estimate_held = false;
    ++report.levels_checked;
  }
  return report;
}

}  // namespace fracdiff
