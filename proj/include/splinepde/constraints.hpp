#pragma once

// Sparse smoothness constraints across interior edges (C0 and C1 conditions
// between the B-form coefficients of the two adjacent triangles) and Dirichlet
// boundary interpolation rows.

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "splinepde/mesh.hpp"

namespace splinepde {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct ConstraintSystem {
  SparseMatrix H;     // smoothness rows ([H0; H1]), cols = d(X_h)
  SparseMatrix B;     // boundary interpolation rows, cols = d(X_h)
  Eigen::VectorXd g;  // boundary values matching B's rows
};

namespace detail {

inline int local_vertex(const std::array<int, 3>& tri, int global) {
  for (int l = 0; l < 3; ++l)
    if (tri[l] == global) return l;
  throw IndexOutOfRange("local_vertex: vertex not in triangle");
}

// Column of the dof with exponent e[l] on local vertex l of triangle t.
inline int dof(int t, int k, const std::array<int, 3>& e) {
  return t * bdim(k) + bindex(k, e[0], e[1]);
}

}  // namespace detail

// Order-r smoothness rows across every interior edge.  r = 0: the k+1
// shared-edge coefficients of the two triangles must agree.  r = 1: k rows,
// each relating one coefficient of the second triangle to three of the first
// with the barycentric coordinates of the second triangle's off-edge vertex
// taken with respect to the first triangle.
inline SparseMatrix smoothness_matrix(const Triangulation& t, int k, int r) {
  if (r < 0 || r > 1) throw UnsupportedOrder("smoothness_matrix: r must be 0 or 1");
  if (k < r) throw DegreeTooLow("smoothness_matrix: degree below order");
  std::vector<Triplet> trip;
  int row = 0;
  for (const auto& e : t.edges) {
    if (e.boundary()) continue;
    const int ta = e.left, tb = e.right;
    const auto& va = t.triangles[ta];
    const auto& vb = t.triangles[tb];
    const int la_u = detail::local_vertex(va, e.a), la_w = detail::local_vertex(va, e.b);
    const int lb_u = detail::local_vertex(vb, e.a), lb_w = detail::local_vertex(vb, e.b);
    const int la_p = 3 - la_u - la_w;  // off-edge vertex, left triangle
    const int lb_p = 3 - lb_u - lb_w;
    if (r == 0) {
      for (int m = 0; m <= k; ++m) {
        std::array<int, 3> ea{}, eb{};
        ea[la_u] = k - m;
        ea[la_w] = m;
        eb[lb_u] = k - m;
        eb[lb_w] = m;
        trip.emplace_back(row, detail::dof(ta, k, ea), 1.0);
        trip.emplace_back(row, detail::dof(tb, k, eb), -1.0);
        ++row;
      }
    } else {
      // barycentric coordinates of the right triangle's off-edge vertex with
      // respect to the left triangle
      const auto bary = barycentric(t.triangle(ta), t.vertices[vb[lb_p]]);
      for (int m = 0; m < k; ++m) {
        std::array<int, 3> eb{};
        eb[lb_p] = 1;
        eb[lb_u] = k - 1 - m;
        eb[lb_w] = m;
        trip.emplace_back(row, detail::dof(tb, k, eb), 1.0);
        std::array<int, 3> e1{}, e2{}, e3{};
        e1[la_p] = 1;
        e1[la_u] = k - 1 - m;
        e1[la_w] = m;
        e2[la_u] = k - m;
        e2[la_w] = m;
        e3[la_u] = k - 1 - m;
        e3[la_w] = m + 1;
        trip.emplace_back(row, detail::dof(ta, k, e1), -bary[la_p]);
        trip.emplace_back(row, detail::dof(ta, k, e2), -bary[la_u]);
        trip.emplace_back(row, detail::dof(ta, k, e3), -bary[la_w]);
        ++row;
      }
    }
  }
  SparseMatrix H(row, t.num_triangles() * bdim(k));
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

// k+1 interpolation rows per boundary edge, at equally spaced points
// including the endpoints; corner points appear once per incident edge.
inline std::pair<SparseMatrix, Eigen::VectorXd> boundary_matrix(
    const Triangulation& t, int k, const std::function<double(Point)>& g) {
  std::vector<Triplet> trip;
  std::vector<double> gvals;
  const auto mis = multi_indices(k);
  int row = 0;
  for (int ei : t.boundary_edges) {
    const Edge& e = t.edges[ei];
    const int ta = e.left;
    const Triangle geom = t.triangle(ta);
    const Point pa = t.vertices[e.a], pb = t.vertices[e.b];
    for (int m = 0; m <= k; ++m) {
      const double s = static_cast<double>(m) / k;
      const Point p = (1.0 - s) * pa + s * pb;
      const auto bary = barycentric(geom, p);
      for (int c = 0; c < bdim(k); ++c) {
        const auto& mi = mis[c];
        const double val = detail::multinomial(k, mi.i, mi.j, mi.k) *
                           std::pow(bary[0], mi.i) * std::pow(bary[1], mi.j) *
                           std::pow(bary[2], mi.k);
        if (val != 0.0) trip.emplace_back(row, ta * bdim(k) + c, val);
      }
      gvals.push_back(g(p));
      ++row;
    }
  }
  SparseMatrix B(row, t.num_triangles() * bdim(k));
  B.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd gv = Eigen::Map<Eigen::VectorXd>(gvals.data(), gvals.size());
  return {std::move(B), std::move(gv)};
}

// Full constraint system: H = [H0; H1] plus the boundary rows.
inline ConstraintSystem assemble_constraints(const Triangulation& t, int k,
                                             const std::function<double(Point)>& g) {
  ConstraintSystem cs;
  const SparseMatrix H0 = smoothness_matrix(t, k, 0);
  const SparseMatrix H1 = smoothness_matrix(t, k, 1);
  SparseMatrix H(H0.rows() + H1.rows(), H0.cols());
  std::vector<Triplet> trip;
  trip.reserve(H0.nonZeros() + H1.nonZeros());
  for (int c = 0; c < H0.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(H0, c); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
    for (SparseMatrix::InnerIterator it(H1, c); it; ++it)
      trip.emplace_back(it.row() + H0.rows(), it.col(), it.value());
  }
  H.setFromTriplets(trip.begin(), trip.end());
  cs.H = std::move(H);
  auto [B, g_vec] = boundary_matrix(t, k, g);
  cs.B = std::move(B);
  cs.g = std::move(g_vec);
  return cs;
}

}  // namespace splinepde
