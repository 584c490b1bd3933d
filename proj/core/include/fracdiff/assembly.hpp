// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fracdiff/csr.hpp"
#include "fracdiff/mesh.hpp"

namespace fracdiff {

/// Constant problem coefficients for
///   -div(k grad u) + c u  with  k du/dn + mu u = 0 on the boundary.
struct Coefficients {
  double diffusion = 1.0;  // k > 0
  double reaction = 0.0;   // c >= 0
  double robin_mu = 1.0;   // mu > 0 in production; 0 allowed for testing

  void validate() const;
};

/// Assembled P1 pair: K is the stiffness matrix including the reaction
/// and Robin boundary terms, M the consistent mass matrix. The pair
/// realizes the discrete elliptic operator A through w' K v = (A w, v)_M.
struct FemSystem {
  CsrMatrix stiffness;
  CsrMatrix mass;
  int dim = 0;

  /// Smallest generalized eigenvalue estimate, filled by ensure_lambda1.
  std::optional<double> lambda1;
};

/// Assembles stiffness and mass from the mesh. Local matrices use the
/// closed-form P1 integrals; boundary edges contribute the Robin mass
/// term. Throws MeshError on a degenerate triangle (area <= 1e-14).
FemSystem assemble(const Mesh& mesh, const Coefficients& coeffs);

/// Load vector b_i = integral of f * basis_i, by the 3-point edge-midpoint
/// rule (exact for quadratic integrands).
std::vector<double> assemble_load(const Mesh& mesh,
                                  const std::function<double(Point2)>& f);

/// Coefficients of the L2 projection: solves M psi = load to relative
/// residual 1e-12.
std::vector<double> l2_project(const FemSystem& sys,
                               std::span<const double> load);

}  // namespace fracdiff
