// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "fracdiff/pcg.hpp"

namespace fracdiff {

void Coefficients::validate() const {
  if (!(diffusion > 0.0)) {
    throw std::invalid_argument("diffusion coefficient must be positive");
  }
  if (reaction < 0.0) {
    throw std::invalid_argument("reaction coefficient must be non-negative");
  }
  if (!(robin_mu > 0.0)) {
    throw std::invalid_argument("Robin coefficient mu must be positive");
  }
}

FemSystem assemble(const Mesh& mesh, const Coefficients& coeffs) {
  const int n = mesh.num_nodes();
  std::vector<Triplet> k_entries;
  std::vector<Triplet> m_entries;
  k_entries.reserve(9 * mesh.num_triangles() + 4 * mesh.boundary_edges.size());
  m_entries.reserve(9 * mesh.num_triangles());

  for (const auto& tri : mesh.triangles) {
    const Point2 p0 = mesh.nodes[tri[0]];
    const Point2 p1 = mesh.nodes[tri[1]];
    const Point2 p2 = mesh.nodes[tri[2]];
    const double twice = cross(p1 - p0, p2 - p0);
    const double area = 0.5 * twice;
    if (area <= 1e-14) {
      throw MeshError("degenerate triangle in assembly (area " +
                      std::to_string(area) + ")");
    }

    // Gradients of the barycentric basis.
    const double bx[3] = {(p1.y - p2.y) / twice, (p2.y - p0.y) / twice,
                          (p0.y - p1.y) / twice};
    const double by[3] = {(p2.x - p1.x) / twice, (p0.x - p2.x) / twice,
                          (p1.x - p0.x) / twice};

    double kloc[3][3];
    double mloc[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double mass = area / 12.0 * (i == j ? 2.0 : 1.0);
        const double stiff =
            coeffs.diffusion * area * (bx[i] * bx[j] + by[i] * by[j]) +
            coeffs.reaction * mass;
        kloc[i][j] = stiff;
        kloc[j][i] = stiff;
        mloc[i][j] = mass;
        mloc[j][i] = mass;
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        k_entries.push_back({tri[i], tri[j], kloc[i][j]});
        m_entries.push_back({tri[i], tri[j], mloc[i][j]});
      }
    }
  }

  for (const auto& edge : mesh.boundary_edges) {
    const double len = distance(mesh.nodes[edge[0]], mesh.nodes[edge[1]]);
    const double diag = coeffs.robin_mu * len / 3.0;
    const double off = coeffs.robin_mu * len / 6.0;
    k_entries.push_back({edge[0], edge[0], diag});
    k_entries.push_back({edge[0], edge[1], off});
    k_entries.push_back({edge[1], edge[0], off});
    k_entries.push_back({edge[1], edge[1], diag});
  }

  FemSystem sys;
  sys.dim = n;
  sys.stiffness = CsrMatrix::from_triplets(n, k_entries);
  sys.mass = CsrMatrix::from_triplets(n, m_entries);
  if (!sys.stiffness.is_symmetric(1e-13) || !sys.mass.is_symmetric(1e-13)) {
    throw std::runtime_error("assembled matrices lost symmetry");
  }
  return sys;
}

std::vector<double> assemble_load(const Mesh& mesh,
                                  const std::function<double(Point2)>& f) {
  std::vector<double> b(mesh.num_nodes(), 0.0);
  for (const auto& tri : mesh.triangles) {
    const Point2 p0 = mesh.nodes[tri[0]];
    const Point2 p1 = mesh.nodes[tri[1]];
    const Point2 p2 = mesh.nodes[tri[2]];
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    // Edge midpoints; each carries weight area/3, and the two adjacent
    // basis functions take value 1/2 there.
    const double f01 = f(midpoint(p0, p1));
    const double f12 = f(midpoint(p1, p2));
    const double f20 = f(midpoint(p2, p0));
    const double w = area / 6.0;
    b[tri[0]] += w * (f01 + f20);
    b[tri[1]] += w * (f01 + f12);
    b[tri[2]] += w * (f12 + f20);
  }
  return b;
}

std::vector<double> l2_project(const FemSystem& sys,
                               std::span<const double> load) {
  return pcg_solve(sys.mass, load, CgConfig{1e-12, 0}).x;
}

}  // namespace fracdiff
