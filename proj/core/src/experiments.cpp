// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fracdiff {

namespace {

const char* stepper_name(CauchyStepper s) {
  return s == CauchyStepper::Euler ? "euler" : "cn";
}

const char* scheme_name(SchemeKind s) {
  switch (s) {
    case SchemeKind::Regularized:
      return "regularized";
    case SchemeKind::Explicit:
      return "explicit";
    case SchemeKind::OracleBackwardEuler:
      return "oracle-backward-euler";
  }
  return "?";
}

}  // namespace

void RunConfig::validate() const {
  const bool has_path = !mesh_path.empty();
  const bool has_h = h > 0.0;
  if (has_path == has_h) {
    throw std::invalid_argument(
        "exactly one mesh source (--mesh or --h) must be given");
  }
  coeffs.validate();
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (beta < 0.0 || beta >= 1.0) {
    throw std::invalid_argument("beta must lie in [0, 1)");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (n_steps < 0) throw std::invalid_argument("nsteps must be >= 0");
  if (cauchy_steps.empty()) {
    throw std::invalid_argument("at least one ksteps value is required");
  }
  for (int k : cauchy_steps) {
    if (k < 1) throw std::invalid_argument("ksteps values must be >= 1");
  }
  if (!delta_auto && !(delta_value > 0.0)) {
    throw std::invalid_argument("explicit delta must be positive");
  }
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

Mesh obtain_mesh(const RunConfig& cfg) {
  if (!cfg.mesh_path.empty()) return read_mesh(cfg.mesh_path);
  return generate_mesh(cfg.h);
}

double resolve_delta(const RunConfig& cfg, FemSystem& sys) {
  const double lambda1 = ensure_lambda1(sys);
  return cfg.delta_auto ? default_delta(lambda1) : cfg.delta_value;
}

std::vector<std::string> config_echo(const RunConfig& cfg,
                                     double resolved_delta,
                                     double resolved_beta, int mesh_nodes) {
  std::vector<std::string> lines;
  auto add = [&](const std::string& key, const std::string& value) {
    lines.push_back(key + " = " + value);
  };
  if (!cfg.mesh_path.empty()) {
    add("mesh", cfg.mesh_path);
  } else {
    add("h", format_double(cfg.h));
  }
  add("nodes", std::to_string(mesh_nodes));
  add("k", format_double(cfg.coeffs.diffusion));
  add("c", format_double(cfg.coeffs.reaction));
  add("mu", format_double(cfg.coeffs.robin_mu));
  add("alpha", format_double(cfg.alpha));
  add("beta", format_double(resolved_beta));
  add("sigma", format_double(cfg.sigma));
  add("tau", format_double(cfg.tau));
  add("nsteps", std::to_string(cfg.n_steps));
  {
    std::ostringstream ks;
    for (std::size_t i = 0; i < cfg.cauchy_steps.size(); ++i) {
      ks << (i ? " " : "") << cfg.cauchy_steps[i];
    }
    add("ksteps", ks.str());
  }
  add("delta", format_double(resolved_delta) +
                   (cfg.delta_auto ? " (auto)" : " (explicit)"));
  add("gamma", format_double(cfg.gamma));
  add("stepper", stepper_name(cfg.stepper));
  add("scheme", scheme_name(cfg.scheme));
  return lines;
}

std::vector<Table1Row> run_table1(const std::vector<Mesh>& meshes,
                                  const std::vector<double>& mus,
                                  double diffusion, double reaction) {
  std::vector<Table1Row> rows;
  for (std::size_t g = 0; g < meshes.size(); ++g) {
    for (double mu : mus) {
      Coefficients coeffs{diffusion, reaction, mu};
      FemSystem sys = assemble(meshes[g], coeffs);
      const auto start = std::chrono::steady_clock::now();
      const EigenPair pair = smallest_eigenpair(sys);
      const auto stop = std::chrono::steady_clock::now();
      Table1Row row;
      row.grid = static_cast<int>(g) + 1;
      row.mu = mu;
      row.lambda1 = pair.lambda;
      row.iterations = pair.iterations;
      row.seconds = std::chrono::duration<double>(stop - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

CsvDocument table1_csv(const std::vector<Table1Row>& rows,
                       const std::vector<std::string>& comments) {
  CsvDocument doc;
  for (const auto& c : comments) doc.add_comment(c);
  doc.set_header({"grid", "mu", "lambda1", "iterations", "seconds"});
  for (const auto& r : rows) {
    doc.add_row({static_cast<long long>(r.grid), r.mu, r.lambda1,
                 static_cast<long long>(r.iterations), r.seconds});
  }
  return doc;
}

std::vector<StationaryRow> run_stationary(const Mesh& mesh, FemSystem& sys,
                                          const RunConfig& cfg) {
  const double delta = resolve_delta(cfg, sys);
  const std::vector<double> load =
      assemble_load(mesh, DiagonalStepSource{cfg.gamma});
  const std::vector<double> projected = l2_project(sys, load);

  int finest = cfg.cauchy_steps.front();
  for (int k : cfg.cauchy_steps) finest = std::max(finest, k);

  FracPowConfig frac;
  frac.beta = cfg.beta;
  frac.delta = delta;
  frac.stepper = cfg.stepper;

  frac.steps = finest;
  const std::vector<double> reference =
      apply_inv_fracpow(sys, projected, frac);
  const double ref_norm = m_norm(sys.mass, reference);

  std::vector<StationaryRow> rows;
  for (int k : cfg.cauchy_steps) {
    frac.steps = k;
    const std::vector<double> y =
        k == finest ? reference : apply_inv_fracpow(sys, projected, frac);
    StationaryRow row;
    row.steps = k;
    row.eta = 1.0 / k;
    row.y_max = *std::max_element(y.begin(), y.end());
    row.m_norm = m_norm(sys.mass, y);
    if (k == finest || ref_norm == 0.0) {
      row.error_vs_finest = 0.0;
    } else {
      std::vector<double> diff(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        diff[i] = y[i] - reference[i];
      }
      row.error_vs_finest = m_norm(sys.mass, diff) / ref_norm;
    }
    rows.push_back(row);
  }
  return rows;
}

CsvDocument stationary_csv(const std::vector<StationaryRow>& rows,
                           const std::vector<std::string>& comments) {
  CsvDocument doc;
  for (const auto& c : comments) doc.add_comment(c);
  doc.set_header({"ksteps", "eta", "y_max", "m_norm", "error_vs_finest"});
  for (const auto& r : rows) {
    doc.add_row({static_cast<long long>(r.steps), r.eta, r.y_max, r.m_norm,
                 r.error_vs_finest});
  }
  return doc;
}

CsvDocument evolve_csv(const EvolutionRecord& record,
                       const std::vector<std::string>& comments) {
  CsvDocument doc;
  for (const auto& c : comments) doc.add_comment(c);
  const bool with_d = !record.levels.empty() &&
                      record.levels.front().d_norm.has_value();
  std::vector<std::string> header{"n", "t", "w_max", "m_norm"};
  if (with_d) header.push_back("d_norm");
  doc.set_header(header);
  for (std::size_t n = 0; n < record.levels.size(); ++n) {
    const auto& level = record.levels[n];
    std::vector<CsvValue> row{static_cast<long long>(n), level.t,
                              level.solution_max, level.m_norm};
    if (with_d) row.push_back(level.d_norm.value_or(
        std::numeric_limits<double>::quiet_NaN()));
    doc.add_row(std::move(row));
  }
  doc.add_comment(std::string("status = ") +
                  (record.status == RunStatus::Completed ? "completed"
                                                         : "diverged"));
  return doc;
}

SigmaSweepResult run_sigma_sweep(const FemSystem& sys, const RunConfig& cfg,
                                 std::span<const double> load) {
  if (cfg.sigmas.empty()) {
    throw std::invalid_argument("sigma sweep requires at least one sigma");
  }
  SigmaSweepResult result;
  result.rows.resize(cfg.sigmas.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cfg.sigmas.size()) return;
      SchemeConfig scheme;
      scheme.alpha = cfg.alpha;
      scheme.sigma = cfg.sigmas[idx];
      scheme.tau = cfg.tau;
      scheme.n_steps = cfg.n_steps;
      scheme.scheme = cfg.scheme;
      scheme.frac.beta = 1.0 - cfg.alpha;
      scheme.frac.delta = cfg.delta_auto ? default_delta(*sys.lambda1)
                                         : cfg.delta_value;
      scheme.frac.steps = cfg.cauchy_steps.front();
      scheme.frac.stepper = cfg.stepper;
      const EvolutionRecord record = run_evolution(sys, scheme, load);
      SigmaSweepRow row;
      row.sigma = cfg.sigmas[idx];
      row.terminal_max = record.levels.back().solution_max;
      row.status = record.status;
      result.rows[idx] = row;
    }
  };

  const int n_threads =
      std::max(1, std::min<int>(cfg.jobs,
                                static_cast<int>(cfg.sigmas.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& row : result.rows) {
    if (row.status == RunStatus::Completed) {
      if (!result.sigma_star || row.sigma < *result.sigma_star) {
        result.sigma_star = row.sigma;
      }
    }
  }
  return result;
}

CsvDocument sigma_sweep_csv(const SigmaSweepResult& result,
                            const std::vector<std::string>& comments) {
  CsvDocument doc;
  for (const auto& c : comments) doc.add_comment(c);
  doc.set_header({"sigma", "terminal_w_max", "status"});
  for (const auto& r : result.rows) {
    doc.add_row({r.sigma, r.terminal_max,
                 std::string(r.status == RunStatus::Completed ? "stable"
                                                              : "diverged")});
  }
  if (result.sigma_star) {
    doc.add_comment("sigma_star = " + format_double(*result.sigma_star));
  } else {
    doc.add_comment("sigma_star = none (no stable run in the sweep)");
  }
  return doc;
}

std::vector<VerifyCheck> run_verify_suite() {
  std::vector<VerifyCheck> checks;
  auto record = [&](const std::string& name, bool ok,
                    const std::string& detail) {
    checks.push_back({name, ok, detail});
  };

  const Mesh mesh = generate_mesh(0.16);
  const DomainSpec domain;

  {
    std::ostringstream detail;
    detail << mesh.num_nodes() << " nodes, min angle "
           << mesh.min_angle_degrees() << " deg";
    bool ok = true;
    try {
      validate_mesh(mesh);
    } catch (const MeshError&) {
      ok = false;
    }
    const double area = mesh.total_area();
    ok = ok && area >= domain.area() - 1e-12 &&
         area <= domain.area() + 0.25 * 0.16 * 0.16;
    record("mesh invariants", ok, detail.str());
  }

  FemSystem sys = assemble(mesh, Coefficients{1.0, 0.0, 10.0});
  const std::vector<double> ones(sys.dim, 1.0);

  {
    const std::vector<double> load =
        assemble_load(mesh, [](Point2) { return 1.0; });
    double sum = 0.0;
    for (double v : load) sum += v;
    const double rel = std::abs(sum - mesh.total_area()) / mesh.total_area();
    record("load partition of unity", rel <= 1e-13,
           "rel err " + format_double(rel));
  }
  {
    std::vector<double> m_row(sys.dim);
    sys.mass.multiply(ones, m_row);
    double sum = 0.0;
    for (double v : m_row) sum += v;
    const double rel = std::abs(sum - mesh.total_area()) / mesh.total_area();
    record("mass matrix total = area", rel <= 1e-12,
           "rel err " + format_double(rel));
  }
  {
    const FemSystem neumann = assemble(mesh, Coefficients{1.0, 0.0, 0.0});
    std::vector<double> kxone(sys.dim);
    neumann.stiffness.multiply(ones, kxone);
    double worst = 0.0;
    for (double v : kxone) worst = std::max(worst, std::abs(v));
    const double scale = neumann.stiffness.max_abs();
    record("pure-Neumann nullspace", worst <= 1e-12 * scale,
           "max |K 1| = " + format_double(worst));
  }

  const DenseSpectral spectral = dense_generalized_eig(sys);
  {
    double resid = 0.0;
    double k_norm = DenseMatrix::from_csr(sys.stiffness).frobenius_norm();
    for (int j = 0; j < sys.dim; ++j) {
      std::vector<double> kv(sys.dim), mv(sys.dim);
      sys.stiffness.multiply(spectral.vectors.column(j), kv);
      sys.mass.multiply(spectral.vectors.column(j), mv);
      for (int i = 0; i < sys.dim; ++i) {
        kv[i] -= spectral.eigenvalues[j] * mv[i];
      }
      resid = std::max(resid, norm2(kv));
    }
    record("dense eigendecomposition residual", resid <= 1e-8 * k_norm,
           "worst column residual " + format_double(resid));
  }
  {
    const EigenPair pair = smallest_eigenpair(sys);
    sys.lambda1 = pair.lambda;
    const double rel =
        std::abs(pair.lambda - spectral.eigenvalues.front()) /
        spectral.eigenvalues.front();
    record("inverse iteration vs dense lambda1", rel <= 1e-8,
           "lambda1 " + format_double(pair.lambda) + ", rel err " +
               format_double(rel));
  }

  const double lambda1 = *sys.lambda1;
  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> w(sys.dim);
  for (double& v : w) v = gauss(rng);

  {
    FracPowConfig frac;
    frac.beta = 0.0;
    frac.delta = default_delta(lambda1);
    const std::vector<double> y = apply_inv_fracpow(sys, w, frac);
    double diff = 0.0;
    for (int i = 0; i < sys.dim; ++i) diff = std::max(diff, std::abs(y[i] - w[i]));
    record("beta = 0 identity", diff == 0.0, "max diff " + format_double(diff));
  }
  {
    FracPowConfig frac;
    frac.beta = 0.5;
    frac.delta = lambda1;
    frac.steps = 64;
    frac.stepper = CauchyStepper::CrankNicolson;
    const std::vector<double> projected = l2_project(
        sys, assemble_load(mesh, DiagonalStepSource{100.0}));
    const std::vector<double> y = apply_inv_fracpow(sys, projected, frac);
    const std::vector<double> exact = oracle_fracpow(spectral, projected,
                                                     -0.5);
    std::vector<double> diff(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - exact[i];
    const double rel = m_norm(sys.mass, diff) / m_norm(sys.mass, exact);
    record("Crank-Nicolson matches spectral oracle", rel <= 1e-3,
           "rel M-norm err " + format_double(rel));
  }
  {
    FracPowConfig frac;
    frac.beta = 0.5;
    frac.delta = lambda1;
    frac.steps = 10;
    frac.stepper = CauchyStepper::Euler;
    const SpectralBounds euler = qk_spectral_check(sys, frac, &spectral);
    frac.stepper = CauchyStepper::CrankNicolson;
    const SpectralBounds cn = qk_spectral_check(sys, frac, &spectral);
    const double cap = std::pow(frac.delta, -frac.beta) + 1e-9;
    const bool ok = euler.q_min > 0.0 && euler.q_max <= cap &&
                    cn.q_min >= -cap && cn.q_max <= cap;
    record("transfer operator bounds", ok,
           "euler [" + format_double(euler.q_min) + ", " +
               format_double(euler.q_max) + "], cn [" +
               format_double(cn.q_min) + ", " + format_double(cn.q_max) +
               "]");
  }
  {
    SchemeConfig scheme;
    scheme.alpha = 0.5;
    scheme.frac.beta = 0.5;
    scheme.frac.delta = default_delta(lambda1);
    scheme.frac.stepper = CauchyStepper::Euler;
    scheme.sigma = sigma_min(scheme.alpha, scheme.frac.delta);
    scheme.tau = 0.1;
    scheme.n_steps = 5;
    const std::vector<double> load =
        assemble_load(mesh, DiagonalStepSource{100.0});
    const StabilityReport report =
        verify_stability_operator(sys, scheme, load, w, &spectral);
    record("stability certificate D >= I",
           report.d_min_eigenvalue >= 1.0 - 1e-9 && report.estimate_held,
           "min eig " + format_double(report.d_min_eigenvalue));
  }
  {
    FracPowConfig frac;
    frac.beta = 0.5;
    frac.delta = default_delta(lambda1);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      for (double& v : w) v = gauss(rng);
      for (CauchyStepper stepper :
           {CauchyStepper::Euler, CauchyStepper::CrankNicolson}) {
        frac.stepper = stepper;
        std::vector<double> norms;
        apply_inv_fracpow(sys, w, frac, &norms);
        for (std::size_t k = 0; k + 1 < norms.size(); ++k) {
          const double ratio = norms[k + 1] / std::max(norms[k], 1e-300);
          worst = std::max(worst, ratio);
          if (ratio > 1.0 + 1e-12) ok = false;
        }
      }
    }
    record("level-wise monotonicity", ok,
           "worst ratio " + format_double(worst));
  }
  return checks;
}

}  // namespace fracdiff
