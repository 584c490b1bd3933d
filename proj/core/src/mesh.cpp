// Copyright the fracdiff authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "fracdiff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace fracdiff {

namespace {

// Background lattice step relative to the requested edge length. The
// triangular lattice at 0.5*h reproduces the expected node densities
// (about 1.4/h^2 nodes over this domain) while keeping every edge well
// below the 1.5*h cap.
constexpr double kLatticeFactor = 0.5;
constexpr int kMinArcSegments = 8;
constexpr double kDuplicateTol = 1e-12;
constexpr double kMinAngleDeg = 15.0;

double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// Lifted-paraboloid incircle test for a CCW triangle (a,b,c).
bool in_circumcircle(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double ax = a.x - p.x, ay = a.y - p.y;
  const double bx = b.x - p.x, by = b.y - p.y;
  const double cx = c.x - p.x, cy = c.y - p.y;
  const double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                     (bx * bx + by * by) * (ax * cy - ay * cx) +
                     (cx * cx + cy * cy) * (ax * by - ay * bx);
  return det > 0.0;
}

// Deterministic jitter in [-1,1] from a 64-bit mix of the lattice indices.
double lattice_jitter(std::uint64_t key) {
  key += 0x9e3779b97f4a7c15ull;
  key = (key ^ (key >> 30)) * 0xbf58476d1ce4e5b9ull;
  key = (key ^ (key >> 27)) * 0x94d049bb133111ebull;
  key = key ^ (key >> 31);
  return 2.0 * (static_cast<double>(key >> 11) * 0x1.0p-53) - 1.0;
}

// Incremental Bowyer-Watson triangulation seeded with the CCW triangle
// (seed0, seed1, seed2), which must contain every other point (points on
// its edges are fine: the zero-area fan across such an edge is skipped,
// which splits the hull edge). The caller removes triangles it does not
// want afterwards.
std::vector<std::array<int, 3>> delaunay(const std::vector<Point2>& pts,
                                         int seed0, int seed1, int seed2) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::array<int, 3>> tris{{seed0, seed1, seed2}};
  std::vector<char> bad;
  std::vector<std::pair<int, int>> cavity;

  for (int ip = 0; ip < n; ++ip) {
    if (ip == seed0 || ip == seed1 || ip == seed2) continue;
    const Point2 p = pts[ip];
    bad.assign(tris.size(), 0);
    cavity.clear();

    std::set<std::pair<int, int>> directed;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto& tr = tris[t];
      if (in_circumcircle(pts[tr[0]], pts[tr[1]], pts[tr[2]], p)) {
        bad[t] = 1;
        directed.insert({tr[0], tr[1]});
        directed.insert({tr[1], tr[2]});
        directed.insert({tr[2], tr[0]});
      }
    }
    if (directed.empty()) {
      throw MeshError("triangulation failed to locate an inserted point");
    }
    for (const auto& e : directed) {
      if (directed.count({e.second, e.first}) == 0) cavity.push_back(e);
    }

    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() + 2);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!bad[t]) next.push_back(tris[t]);
    }
    for (const auto& e : cavity) {
      if (orient2d(pts[e.first], pts[e.second], p) > 1e-12) {
        next.push_back({e.first, e.second, ip});
      }
    }
    tris = std::move(next);
  }
  return tris;
}

struct BoundarySample {
  std::vector<Point2> nodes;  // closed loop, counter-clockwise
  int corner_origin = 0;      // index of (0,0)
  int corner_right = 0;       // index of (1,0)
  int corner_top = 0;         // index of (0,1)
};

BoundarySample sample_boundary(const DomainSpec& dom, double step) {
  BoundarySample out;
  const auto& v = dom.pentagon;

  auto add_segment = [&](Point2 a, Point2 b) {
    const double len = distance(a, b);
    const int nseg = std::max(1, static_cast<int>(std::lround(len / step)));
    for (int i = 0; i < nseg; ++i) {
      const double t = static_cast<double>(i) / nseg;
      out.nodes.push_back(i == 0 ? a : a + t * (b - a));
    }
  };

  // (0,0) -> (1,0) -> (0.75,0.25), then the arc traversed clockwise around
  // the circle (the domain lies on the outside), then (0.25,0.75) -> (0,1)
  // -> (0,0). This walks the domain boundary counter-clockwise.
  out.corner_origin = 0;
  add_segment(v[0], v[1]);
  out.corner_right = static_cast<int>(out.nodes.size());
  add_segment(v[1], v[2]);

  const double arc_len = M_PI * dom.arc_radius;
  const int narc = static_cast<int>(std::lround(arc_len / step));
  if (narc < kMinArcSegments) {
    std::ostringstream msg;
    msg << "edge length leaves the boundary arc with " << narc
        << " segments (need >= " << kMinArcSegments << "); use a smaller h";
    throw MeshError(msg.str());
  }
  for (int i = 0; i < narc; ++i) {
    if (i == 0) {
      out.nodes.push_back(v[2]);
      continue;
    }
    const double theta = -M_PI / 4.0 - M_PI * static_cast<double>(i) / narc;
    out.nodes.push_back({dom.arc_center.x + dom.arc_radius * std::cos(theta),
                         dom.arc_center.y + dom.arc_radius * std::sin(theta)});
  }

  add_segment(v[3], v[4]);
  out.corner_top = static_cast<int>(out.nodes.size());
  add_segment(v[4], v[0]);
  return out;
}

double min_distance_to_loop(Point2 p, const std::vector<Point2>& loop) {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = loop[i];
    const Point2 b = loop[(i + 1) % n];
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t =
        len2 == 0.0 ? 0.0 : std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    d = std::min(d, distance(p, a + t * ab));
  }
  return d;
}

void orient_ccw(Mesh& mesh) {
  for (auto& t : mesh.triangles) {
    if (orient2d(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) < 0.0) {
      std::swap(t[1], t[2]);
    }
  }
}

std::vector<std::array<int, 2>> boundary_edges_from_triangles(
    const std::vector<std::array<int, 3>>& tris) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      count[{std::min(a, b), std::max(a, b)}] += 1;
    }
  }
  std::vector<std::array<int, 2>> edges;
  for (const auto& [edge, c] : count) {
    if (c == 1) edges.push_back({edge.first, edge.second});
  }
  return edges;
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  return 0.5 * orient2d(nodes[tr[0]], nodes[tr[1]], nodes[tr[2]]);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += triangle_area(t);
  return a;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      m = std::max(m, distance(nodes[t[e]], nodes[t[(e + 1) % 3]]));
    }
  }
  return m;
}

double Mesh::min_angle_degrees() const {
  double worst = 180.0;
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Point2 a = nodes[t[i]];
      const Point2 b = nodes[t[(i + 1) % 3]];
      const Point2 c = nodes[t[(i + 2) % 3]];
      const Point2 u = b - a;
      const Point2 w = c - a;
      const double cosang =
          std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0);
      worst = std::min(worst, std::acos(cosang) * 180.0 / M_PI);
    }
  }
  return worst;
}

Mesh generate_mesh(double h, const DomainSpec& domain) {
  if (!(h > 0.0) || h >= 0.5) {
    throw MeshError("target edge length h must lie in (0, 0.5)");
  }
  const double g = kLatticeFactor * h;

  const BoundarySample boundary = sample_boundary(domain, g);

  std::vector<Point2> points = boundary.nodes;
  const int n_boundary = static_cast<int>(points.size());

  // Triangular lattice covering the unit square; rows offset by half a
  // step. Points too close to the boundary loop are dropped so that the
  // boundary spacing controls the local triangle shape.
  const double rowstep = g * std::sqrt(3.0) / 2.0;
  const int jmax = static_cast<int>(std::ceil(1.0 / rowstep)) + 1;
  const int imax = static_cast<int>(std::ceil(1.0 / g)) + 1;
  for (int j = 0; j <= jmax; ++j) {
    const double y = j * rowstep;
    const double offset = (j % 2 == 0) ? 0.0 : 0.5 * g;
    for (int i = 0; i <= imax; ++i) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(j) << 32) ^ static_cast<std::uint64_t>(i);
      Point2 p{i * g + offset + 1e-6 * g * lattice_jitter(key),
               y + 1e-6 * g * lattice_jitter(~key)};
      if (!domain.inside(p)) continue;
      if (min_distance_to_loop(p, boundary.nodes) < 0.5 * g) continue;
      points.push_back(p);
    }
  }

  // Duplicate guard; boundary nodes take precedence.
  {
    std::vector<Point2> unique;
    unique.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool dup = false;
      for (std::size_t k = 0; k < unique.size() && !dup; ++k) {
        if (std::abs(points[i].x - unique[k].x) <= kDuplicateTol &&
            std::abs(points[i].y - unique[k].y) <= kDuplicateTol) {
          dup = true;
        }
      }
      if (!dup) unique.push_back(points[i]);
    }
    points = std::move(unique);
  }

  auto tris = delaunay(points, boundary.corner_origin, boundary.corner_right,
                       boundary.corner_top);

  // Keep triangles whose centroid lies in the domain; this carves the
  // circular notch out of the convex triangulation.
  std::vector<std::array<int, 3>> kept;
  kept.reserve(tris.size());
  for (const auto& t : tris) {
    const Point2 c = (1.0 / 3.0) *
                     (points[t[0]] + points[t[1]] + points[t[2]]);
    if (domain.inside(c)) kept.push_back(t);
  }

  // Compact node numbering (lattice points may end up unused).
  std::vector<int> remap(points.size(), -1);
  Mesh mesh;
  for (auto& t : kept) {
    for (int& idx : t) {
      if (remap[idx] < 0) {
        remap[idx] = mesh.num_nodes();
        mesh.nodes.push_back(points[idx]);
      }
      idx = remap[idx];
    }
  }
  mesh.triangles = std::move(kept);
  orient_ccw(mesh);
  mesh.boundary_edges = boundary_edges_from_triangles(mesh.triangles);

  validate_mesh(mesh);
  if (mesh.min_angle_degrees() < kMinAngleDeg) {
    std::ostringstream msg;
    msg << "generated mesh contains a triangle with min angle "
        << mesh.min_angle_degrees() << " deg (< " << kMinAngleDeg << ")";
    throw MeshError(msg.str());
  }
  if (mesh.max_edge_length() > 1.5 * h) {
    throw MeshError("generated mesh exceeds the 1.5*h edge-length cap");
  }
  const double half_h = 0.5 * h;
  for (const Point2 p : mesh.nodes) {
    if (!domain.inside(p) && domain.boundary_distance(p) > half_h) {
      throw MeshError("generated node escaped the domain");
    }
  }
  return mesh;
}

void validate_mesh(const Mesh& mesh) {
  const int n = mesh.num_nodes();
  for (const auto& t : mesh.triangles) {
    for (int idx : t) {
      if (idx < 0 || idx >= n) throw MeshError("triangle index out of range");
    }
    if (orient2d(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) <=
        0.0) {
      throw MeshError("triangle with non-positive area");
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n) {
      throw MeshError("boundary edge index out of range");
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(mesh.nodes[i].x - mesh.nodes[j].x) <= kDuplicateTol &&
          std::abs(mesh.nodes[i].y - mesh.nodes[j].y) <= kDuplicateTol) {
        throw MeshError("duplicate nodes " + std::to_string(i) + " and " +
                        std::to_string(j));
      }
    }
  }

  // The stored boundary must equal the set of edges used by exactly one
  // triangle and must close into a single loop.
  auto derived = boundary_edges_from_triangles(mesh.triangles);
  std::set<std::pair<int, int>> derived_set;
  for (const auto& e : derived) derived_set.insert({e[0], e[1]});
  std::set<std::pair<int, int>> stored_set;
  for (const auto& e : mesh.boundary_edges) {
    stored_set.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});
  }
  if (derived_set != stored_set) {
    throw MeshError("boundary edges do not match the triangle incidence");
  }

  std::map<int, std::vector<int>> adjacency;
  for (const auto& e : mesh.boundary_edges) {
    adjacency[e[0]].push_back(e[1]);
    adjacency[e[1]].push_back(e[0]);
  }
  for (const auto& [node, nbrs] : adjacency) {
    if (nbrs.size() != 2) {
      throw MeshError("boundary node " + std::to_string(node) +
                      " has degree " + std::to_string(nbrs.size()));
    }
  }
  if (!adjacency.empty()) {
    const int start = adjacency.begin()->first;
    int prev = start;
    int cur = adjacency[start][0];
    std::size_t visited = 1;
    while (cur != start) {
      const auto& nbrs = adjacency[cur];
      const int next = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
      prev = cur;
      cur = next;
      ++visited;
      if (visited > adjacency.size()) break;
    }
    if (visited != adjacency.size()) {
      throw MeshError("boundary edges form more than one loop");
    }
  }
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path + "' for writing");
  char buf[64];
  out << "nodes " << mesh.num_nodes() << "\n";
  for (const Point2 p : mesh.nodes) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", p.x, p.y);
    out << buf << "\n";
  }
  out << "triangles " << mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles) {
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  out << "bedges " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges) {
    out << e[0] << " " << e[1] << "\n";
  }
  if (!out) throw MeshError("write to '" + path + "' failed");
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string path)
      : in_(in), path_(std::move(path)) {}

  // Reads the next non-empty line; throws mentioning the expectation.
  std::istringstream next(const std::string& expectation) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      return std::istringstream(line);
    }
    fail("unexpected end of file, expected " + expectation);
    return std::istringstream();
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw MeshError(path_ + ":" + std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string path_;
  int line_no_ = 0;
};

}  // namespace

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path + "'");
  LineReader reader(in, path);

  auto read_count = [&](const std::string& keyword) {
    auto line = reader.next("'" + keyword + " <count>'");
    std::string word;
    long count = -1;
    if (!(line >> word >> count) || word != keyword || count < 0) {
      reader.fail("expected '" + keyword + " <count>'");
    }
    return count;
  };

  Mesh mesh;
  const long n_nodes = read_count("nodes");
  mesh.nodes.reserve(n_nodes);
  for (long i = 0; i < n_nodes; ++i) {
    auto line = reader.next("node coordinates");
    Point2 p;
    if (!(line >> p.x >> p.y)) reader.fail("expected two coordinates");
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      reader.fail("non-finite coordinate");
    }
    mesh.nodes.push_back(p);
  }

  const long n_tris = read_count("triangles");
  mesh.triangles.reserve(n_tris);
  for (long i = 0; i < n_tris; ++i) {
    auto line = reader.next("triangle indices");
    std::array<int, 3> t{};
    if (!(line >> t[0] >> t[1] >> t[2])) {
      reader.fail("expected three vertex indices");
    }
    for (int idx : t) {
      if (idx < 0 || idx >= mesh.num_nodes()) {
        reader.fail("triangle index " + std::to_string(idx) +
                    " out of range [0, " + std::to_string(mesh.num_nodes()) +
                    ")");
      }
    }
    const double twice =
        orient2d(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
    if (twice == 0.0) reader.fail("degenerate (zero-area) triangle");
    if (twice < 0.0) std::swap(t[1], t[2]);
    mesh.triangles.push_back(t);
  }

  const long n_edges = read_count("bedges");
  mesh.boundary_edges.reserve(n_edges);
  for (long i = 0; i < n_edges; ++i) {
    auto line = reader.next("boundary edge indices");
    std::array<int, 2> e{};
    if (!(line >> e[0] >> e[1])) reader.fail("expected two vertex indices");
    for (int idx : e) {
      if (idx < 0 || idx >= mesh.num_nodes()) {
        reader.fail("boundary edge index " + std::to_string(idx) +
                    " out of range [0, " + std::to_string(mesh.num_nodes()) +
                    ")");
      }
    }
    mesh.boundary_edges.push_back(e);
  }

  validate_mesh(mesh);
  return mesh;
}

}  // namespace fracdiff
