// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdiff/csv.hpp"
#include "fracdiff/timestepping.hpp"

namespace fracdiff {

/// Right-hand side of the experiments: f(x, y) = 2 / (1 + exp(gamma(x-y))).
/// gamma = 0 gives the constant 1; large gamma approaches a step across
/// the diagonal.
struct DiagonalStepSource {
  double gamma = 0.0;

  double operator()(Point2 p) const {
    return 2.0 / (1.0 + std::exp(gamma * (p.x - p.y)));
  }
};

/// Resolved run parameters shared by the command-line recipes. Exactly one
/// mesh source (a path or a generator edge length) must be set.
struct RunConfig {
  std::string mesh_path;
  double h = 0.0;

  Coefficients coeffs;
  double alpha = 0.5;
  double beta = 0.5;  // stationary runs only
  double sigma = 0.5;
  double tau = 0.0025;
  int n_steps = 40;
  std::vector<int> cauchy_steps = {10};
  bool delta_auto = true;
  double delta_value = 0.0;
  double gamma = 100.0;
  CauchyStepper stepper = CauchyStepper::CrankNicolson;
  SchemeKind scheme = SchemeKind::Regularized;
  std::vector<double> sigmas;
  std::string out_path;
  int jobs = 1;
  bool track_d_norm = false;

  void validate() const;
};

Mesh obtain_mesh(const RunConfig& cfg);

/// 0.99 * lambda1 in auto mode, the explicit value otherwise; either way
/// the eigenvalue estimate is cached on the system.
double resolve_delta(const RunConfig& cfg, FemSystem& sys);

/// Comment block echoing every resolved parameter, embedded in each CSV.
std::vector<std::string> config_echo(const RunConfig& cfg,
                                     double resolved_delta,
                                     double resolved_beta, int mesh_nodes);

struct Table1Row {
  int grid = 0;
  double mu = 0.0;
  double lambda1 = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

std::vector<Table1Row> run_table1(const std::vector<Mesh>& meshes,
                                  const std::vector<double>& mus,
                                  double diffusion = 1.0,
                                  double reaction = 0.0);
CsvDocument table1_csv(const std::vector<Table1Row>& rows,
                       const std::vector<std::string>& comments);

struct StationaryRow {
  int steps = 0;
  double eta = 0.0;
  double y_max = 0.0;
  double m_norm = 0.0;
  double error_vs_finest = 0.0;
};

/// Solves the stationary problem y = A^-beta (P f) once per entry of
/// cfg.cauchy_steps; errors are relative M-norm distances to the run with
/// the most steps.
std::vector<StationaryRow> run_stationary(const Mesh& mesh, FemSystem& sys,
                                          const RunConfig& cfg);
CsvDocument stationary_csv(const std::vector<StationaryRow>& rows,
                           const std::vector<std::string>& comments);

CsvDocument evolve_csv(const EvolutionRecord& record,
                       const std::vector<std::string>& comments);

struct SigmaSweepRow {
  double sigma = 0.0;
  double terminal_max = 0.0;
  RunStatus status = RunStatus::Completed;
};

struct SigmaSweepResult {
  std::vector<SigmaSweepRow> rows;
  std::optional<double> sigma_star;  // smallest tested sigma that ran stably
};

/// One evolution per sigma; sweep points run concurrently up to
/// cfg.jobs, with rows reported in the order of cfg.sigmas.
SigmaSweepResult run_sigma_sweep(const FemSystem& sys, const RunConfig& cfg,
                                 std::span<const double> load);
CsvDocument sigma_sweep_csv(const SigmaSweepResult& result,
                            const std::vector<std::string>& comments);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-check battery on a generated small mesh: assembly identities,
/// solver cross-checks, oracle agreement, transfer-operator bounds, and
/// the stability certificate.
std::vector<VerifyCheck> run_verify_suite();

}  // namespace fracdiff
