#pragma once

// Triangulation storage: edge/adjacency derivation, uniform midpoint
// refinement, mesh size metrics and point location.  Immutable after
// construction; refinement returns a new value.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "splinepde/bernstein.hpp"
#include "splinepde/common.hpp"

namespace splinepde {

constexpr int kNoTriangle = -1;

struct Edge {
  int a, b;             // vertex indices, a < b
  int left = kNoTriangle;   // first triangle discovered
  int right = kNoTriangle;  // second triangle, kNoTriangle on the boundary
  bool boundary() const { return right == kNoTriangle; }
};

struct MeshMetrics {
  double h = 0.0;                  // max triangle diameter
  std::vector<double> h_T;         // longest edge per triangle
  std::vector<double> rho_T;       // inradius per triangle
  double shape_parameter = 0.0;    // max h_T / rho_T
};

class Triangulation {
 public:
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<Edge> edges;
  std::vector<int> boundary_edges;  // indices into edges
  int level = 0;

  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  Triangle triangle(int t) const {
    const auto& tv = triangles[t];
    return {std::array<Point, 3>{vertices[tv[0]], vertices[tv[1]], vertices[tv[2]]}};
  }

  // Containing triangle and its barycentric coordinates; lowest triangle
  // index wins on shared edges.  Coordinates >= -1e-10 count as inside.
  std::pair<int, std::array<double, 3>> locate_point(Point p) const;

  struct BBox {
    double xmin, xmax, ymin, ymax;
  };
  BBox bounding_box() const {
    BBox b{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y};
    for (const auto& v : vertices) {
      b.xmin = std::min(b.xmin, v.x);
      b.xmax = std::max(b.xmax, v.x);
      b.ymin = std::min(b.ymin, v.y);
      b.ymax = std::max(b.ymax, v.y);
    }
    return b;
  }

 private:
  // point-location acceleration: uniform bucket grid over the bounding box
  friend Triangulation build_triangulation(std::vector<Point>,
                                           std::vector<std::array<int, 3>>, int);
  int grid_nx_ = 0, grid_ny_ = 0;
  BBox bbox_{};
  std::vector<std::vector<int>> buckets_;  // sorted triangle indices per cell

  void build_buckets();
};

// Derives edges, adjacency and boundary flags; reorients triangles to
// counterclockwise when needed.
inline Triangulation build_triangulation(std::vector<Point> vertices,
                                         std::vector<std::array<int, 3>> triangles,
                                         int level = 0) {
  Triangulation t;
  t.vertices = std::move(vertices);
  t.triangles = std::move(triangles);
  t.level = level;

  const int nv = t.num_vertices();
  for (auto& tri : t.triangles) {
    for (int v : tri)
      if (v < 0 || v >= nv)
        throw IndexOutOfRange("build_triangulation: vertex index " + std::to_string(v));
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw DegenerateTriangle("build_triangulation: repeated vertex in triangle");
    Triangle geom{std::array<Point, 3>{t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]}};
    const double sa = signed_area(geom);
    if (sa == 0.0) throw DegenerateTriangle("build_triangulation: zero-area triangle");
    if (sa < 0.0) std::swap(tri[1], tri[2]);
  }

  // value: edge index, plus the directed orientation of the first incidence.
  // After CCW normalization a manifold interior edge is traversed once in
  // each direction; a repeat of the same direction means overlapping triangles.
  std::map<std::pair<int, int>, std::pair<int, bool>> edge_of;
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const auto& tri = t.triangles[ti];
    for (int e = 0; e < 3; ++e) {
      const int u = tri[e], v = tri[(e + 1) % 3];
      const int a = std::min(u, v);
      const int b = std::max(u, v);
      const bool forward = (u == a);
      auto it = edge_of.find({a, b});
      if (it == edge_of.end()) {
        edge_of[{a, b}] = {static_cast<int>(t.edges.size()), forward};
        t.edges.push_back({a, b, ti, kNoTriangle});
      } else {
        Edge& ed = t.edges[it->second.first];
        if (ed.right != kNoTriangle)
          throw NonManifoldEdge("build_triangulation: edge shared by >2 triangles");
        if (it->second.second == forward)
          throw NonManifoldEdge("build_triangulation: edge traversed twice in the same direction");
        ed.right = ti;
      }
    }
  }
  for (int ei = 0; ei < static_cast<int>(t.edges.size()); ++ei)
    if (t.edges[ei].boundary()) t.boundary_edges.push_back(ei);

  t.build_buckets();
  return t;
}

inline void Triangulation::build_buckets() {
  bbox_ = bounding_box();
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(num_triangles()))));
  grid_nx_ = grid_ny_ = n;
  buckets_.assign(static_cast<size_t>(n) * n, {});
  const double dx = (bbox_.xmax - bbox_.xmin) / n;
  const double dy = (bbox_.ymax - bbox_.ymin) / n;
  auto cell_x = [&](double x) {
    return std::clamp(static_cast<int>((x - bbox_.xmin) / dx), 0, n - 1);
  };
  auto cell_y = [&](double y) {
    return std::clamp(static_cast<int>((y - bbox_.ymin) / dy), 0, n - 1);
  };
  for (int ti = 0; ti < num_triangles(); ++ti) {
    const Triangle g = triangle(ti);
    double xmin = g.v[0].x, xmax = g.v[0].x, ymin = g.v[0].y, ymax = g.v[0].y;
    for (const auto& v : g.v) {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
    for (int cx = cell_x(xmin); cx <= cell_x(xmax); ++cx)
      for (int cy = cell_y(ymin); cy <= cell_y(ymax); ++cy)
        buckets_[static_cast<size_t>(cy) * n + cx].push_back(ti);
  }
}

inline std::pair<int, std::array<double, 3>> Triangulation::locate_point(Point p) const {
  constexpr double tol = 1e-10;
  auto try_list = [&](const std::vector<int>& cand) -> std::pair<int, std::array<double, 3>> {
    for (int ti : cand) {  // candidates sorted by index: deterministic tie-break
      const auto bary = barycentric(triangle(ti), p);
      if (bary[0] >= -tol && bary[1] >= -tol && bary[2] >= -tol) return {ti, bary};
    }
    return {kNoTriangle, {}};
  };
  const int n = grid_nx_;
  const double dx = (bbox_.xmax - bbox_.xmin) / n;
  const double dy = (bbox_.ymax - bbox_.ymin) / n;
  const int cx = std::clamp(static_cast<int>((p.x - bbox_.xmin) / dx), 0, n - 1);
  const int cy = std::clamp(static_cast<int>((p.y - bbox_.ymin) / dy), 0, n - 1);
  auto hit = try_list(buckets_[static_cast<size_t>(cy) * n + cx]);
  if (hit.first != kNoTriangle) return hit;
  // points near cell borders can miss the primary bucket; scan everything
  std::vector<int> all(triangles.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  hit = try_list(all);
  if (hit.first != kNoTriangle) return hit;
  throw PointOutsideDomain("locate_point: (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ")");
}

// Splits each triangle into 4 congruent children via edge midpoints.
inline Triangulation uniform_refine(const Triangulation& t) {
  std::vector<Point> verts = t.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(verts.size());
    verts.push_back(0.5 * (t.vertices[a] + t.vertices[b]));
    midpoint[key] = idx;
    return idx;
  };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(t.triangles.size() * 4);
  for (const auto& tri : t.triangles) {
    const int m01 = mid(tri[0], tri[1]);
    const int m12 = mid(tri[1], tri[2]);
    const int m20 = mid(tri[2], tri[0]);
    tris.push_back({tri[0], m01, m20});
    tris.push_back({m01, tri[1], m12});
    tris.push_back({m20, m12, tri[2]});
    tris.push_back({m01, m12, m20});
  }
  return build_triangulation(std::move(verts), std::move(tris), t.level + 1);
}

inline MeshMetrics mesh_metrics(const Triangulation& t) {
  MeshMetrics m;
  m.h_T.reserve(t.num_triangles());
  m.rho_T.reserve(t.num_triangles());
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const Triangle g = t.triangle(ti);
    const double e0 = dist(g.v[0], g.v[1]);
    const double e1 = dist(g.v[1], g.v[2]);
    const double e2 = dist(g.v[2], g.v[0]);
    const double ht = std::max({e0, e1, e2});
    const double s = 0.5 * (e0 + e1 + e2);
    const double rho = area(g) / s;
    m.h_T.push_back(ht);
    m.rho_T.push_back(rho);
    m.h = std::max(m.h, ht);
    m.shape_parameter = std::max(m.shape_parameter, ht / rho);
  }
  return m;
}

// Plain-text mesh format: line 1 "V T"; V lines "x y"; T lines "i j k"
// with 1-based vertex indices.
inline Triangulation read_mesh(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt)) throw IoError("read_mesh: bad header");
  std::vector<Point> verts(nv);
  for (auto& v : verts)
    if (!(in >> v.x >> v.y)) throw IoError("read_mesh: bad vertex line");
  std::vector<std::array<int, 3>> tris(nt);
  for (auto& tr : tris) {
    if (!(in >> tr[0] >> tr[1] >> tr[2])) throw IoError("read_mesh: bad triangle line");
    for (auto& v : tr) v -= 1;
  }
  return build_triangulation(std::move(verts), std::move(tris));
}

inline Triangulation read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_mesh_file: cannot open " + path);
  return read_mesh(in);
}

inline void write_mesh(std::ostream& out, const Triangulation& t) {
  out << t.num_vertices() << " " << t.num_triangles() << "\n";
  out.precision(17);
  for (const auto& v : t.vertices) out << v.x << " " << v.y << "\n";
  for (const auto& tr : t.triangles)
    out << tr[0] + 1 << " " << tr[1] + 1 << " " << tr[2] + 1 << "\n";
}

}  // namespace splinepde
