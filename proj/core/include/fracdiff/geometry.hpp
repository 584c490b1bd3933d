// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

namespace fracdiff {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 midpoint(Point2 a, Point2 b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// The computational domain: the convex pentagon with vertices
/// (0,0), (1,0), (0.75,0.25), (0.25,0.75), (0,1) minus the disk of radius
/// sqrt(2)/4 centered at (0.5,0.5). The circle passes exactly through the
/// two pentagon vertices (0.75,0.25) and (0.25,0.75), so the boundary is
/// made of four straight segments and one circular arc.
struct DomainSpec {
  std::array<Point2, 5> pentagon{
      {{0.0, 0.0}, {1.0, 0.0}, {0.75, 0.25}, {0.25, 0.75}, {0.0, 1.0}}};
  Point2 arc_center{0.5, 0.5};
  double arc_radius = std::sqrt(2.0) / 4.0;

  /// Membership in {p in closed pentagon : |p - arc_center| >= arc_radius}.
  bool inside(Point2 p) const;

  /// Unsigned distance from p to the domain boundary.
  double boundary_distance(Point2 p) const;

  double pentagon_area() const;

  /// Closed-form area: pentagon minus the half-disk cut away by the arc.
  double area() const;
};

/// Membership test against the default domain.
bool inside_domain(Point2 p);

}  // namespace fracdiff
