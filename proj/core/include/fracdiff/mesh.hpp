// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/geometry.hpp"

namespace fracdiff {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangulation. Triangles are counter-clockwise; boundary
/// edges (undirected) are exactly the triangle edges shared by a single
/// triangle and form one closed loop.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> boundary_edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const;
  double total_area() const;
  double max_edge_length() const;
  double min_angle_degrees() const;
};

/// Triangulates the domain with target edge length h. Boundary nodes are
/// placed exactly on the pentagon edges and on the circle; interior nodes
/// come from a triangular background lattice. Throws MeshError when h is
/// too coarse to resolve the arc with at least 8 segments, or when the
/// resulting mesh violates the quality floor (min angle 15 degrees).
Mesh generate_mesh(double h, const DomainSpec& domain = {});

/// Structural validation: index ranges, positive areas, no duplicate nodes
/// within 1e-12, and a single closed boundary loop matching the edges
/// incident to exactly one triangle. Throws MeshError on violation.
void validate_mesh(const Mesh& mesh);

/// Plain-text format:
///   nodes <n>       followed by n lines "<x> <y>"
///   triangles <m>   followed by m lines "<i> <j> <k>" (0-based)
///   bedges <b>      followed by b lines "<i> <j>" (0-based)
/// Coordinates are written with 17 significant digits so that
/// read_mesh(write_mesh(m)) reproduces m bit-exactly.
void write_mesh(const Mesh& mesh, const std::string& path);

/// Parses the format above. Malformed input raises MeshError naming the
/// offending line; clockwise triangles are accepted and reoriented.
Mesh read_mesh(const std::string& path);

}  // namespace fracdiff
