// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracdiff {

namespace {

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

}  // namespace

bool DomainSpec::inside(Point2 p) const {
  for (std::size_t i = 0; i < pentagon.size(); ++i) {
    const Point2 a = pentagon[i];
    const Point2 b = pentagon[(i + 1) % pentagon.size()];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return distance(p, arc_center) >= arc_radius;
}

double DomainSpec::boundary_distance(Point2 p) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pentagon.size(); ++i) {
    // The segment between the two arc endpoints is replaced by the arc.
    if (i == 2) continue;
    d = std::min(d, segment_distance(p, pentagon[i],
                                     pentagon[(i + 1) % pentagon.size()]));
  }
  d = std::min(d, std::abs(distance(p, arc_center) - arc_radius));
  return d;
}

double DomainSpec::pentagon_area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < pentagon.size(); ++i) {
    const Point2 a = pentagon[i];
    const Point2 b = pentagon[(i + 1) % pentagon.size()];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

double DomainSpec::area() const {
  // The chord between the arc endpoints passes through the circle center,
  // so the removed piece is exactly half the disk.
  const double half_disk = 0.5 * M_PI * arc_radius * arc_radius;
  return pentagon_area() - half_disk;
}

bool inside_domain(Point2 p) { return DomainSpec{}.inside(p); }

}  // namespace fracdiff
