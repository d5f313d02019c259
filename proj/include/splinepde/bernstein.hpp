#pragma once

// Bernstein-Bezier polynomial algebra on a single triangle: domain-point
// indexing, de Casteljau evaluation, exact differentiation and the closed-form
// integrals of single, pairwise and triple products of B-forms.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "splinepde/common.hpp"

namespace splinepde {

struct Triangle {
  std::array<Point, 3> v;
};

inline double signed_area(const Triangle& t) {
  return 0.5 * ((t.v[1].x - t.v[0].x) * (t.v[2].y - t.v[0].y) -
                (t.v[2].x - t.v[0].x) * (t.v[1].y - t.v[0].y));
}

inline double area(const Triangle& t) { return std::abs(signed_area(t)); }

// Number of B-form coefficients of degree d.
constexpr int bdim(int d) { return (d + 1) * (d + 2) / 2; }

// Multi-index (i,j,k), i+j+k = d.  The fixed enumeration order is
// lexicographic with i descending: (d,0,0), (d-1,1,0), (d-1,0,1), (d-2,2,0),
// ...  Every coefficient vector in the project uses this order.
struct MultiIndex {
  int i, j, k;
};

inline int bindex(int d, int i, int j) {
  const int r = d - i;  // block of indices with this first component
  return r * (r + 1) / 2 + (r - j);
}

inline std::vector<MultiIndex> multi_indices(int d) {
  std::vector<MultiIndex> out;
  out.reserve(bdim(d));
  for (int i = d; i >= 0; --i)
    for (int j = d - i; j >= 0; --j) out.push_back({i, j, d - i - j});
  return out;
}

namespace detail {
inline double factorial(int n) {
  static const auto table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table[n];
}

inline double multinomial(int d, int i, int j, int k) {
  return factorial(d) / (factorial(i) * factorial(j) * factorial(k));
}
}  // namespace detail

// Barycentric coordinates of p with respect to t (b1+b2+b3 = 1, affine).
inline std::array<double, 3> barycentric(const Triangle& t, Point p) {
  const double a2 = 2.0 * signed_area(t);
  if (a2 == 0.0) throw DegenerateTriangle("barycentric: zero-area triangle");
  const Point &v1 = t.v[0], &v2 = t.v[1], &v3 = t.v[2];
  const double b1 = ((v2.x - p.x) * (v3.y - p.y) - (v3.x - p.x) * (v2.y - p.y)) / a2;
  const double b2 = ((v3.x - p.x) * (v1.y - p.y) - (v1.x - p.x) * (v3.y - p.y)) / a2;
  return {b1, b2, 1.0 - b1 - b2};
}

// Gradients of the three barycentric coordinate functions (constant on t).
inline std::array<Point, 3> barycentric_gradients(const Triangle& t) {
  const double a2 = 2.0 * signed_area(t);
  if (a2 == 0.0) throw DegenerateTriangle("barycentric_gradients: zero-area triangle");
  const Point &v1 = t.v[0], &v2 = t.v[1], &v3 = t.v[2];
  return {Point{(v2.y - v3.y) / a2, (v3.x - v2.x) / a2},
          Point{(v3.y - v1.y) / a2, (v1.x - v3.x) / a2},
          Point{(v1.y - v2.y) / a2, (v2.x - v1.x) / a2}};
}

// Domain points {(i v1 + j v2 + k v3)/d} in coefficient order.
inline std::vector<Point> domain_points(const Triangle& t, int d) {
  std::vector<Point> pts;
  pts.reserve(bdim(d));
  if (d == 0) {
    pts.push_back((1.0 / 3.0) * (t.v[0] + t.v[1] + t.v[2]));
    return pts;
  }
  for (const auto& mi : multi_indices(d))
    pts.push_back((1.0 / d) * (static_cast<double>(mi.i) * t.v[0] +
                               static_cast<double>(mi.j) * t.v[1] +
                               static_cast<double>(mi.k) * t.v[2]));
  return pts;
}

// A polynomial of degree `degree` on `tri` in Bernstein-Bezier form.
struct BForm {
  int degree = 0;
  Triangle tri;
  Eigen::VectorXd coef;

  BForm() = default;
  BForm(int d, const Triangle& t) : degree(d), tri(t), coef(Eigen::VectorXd::Zero(bdim(d))) {}
  BForm(int d, const Triangle& t, Eigen::VectorXd c) : degree(d), tri(t), coef(std::move(c)) {
    if (coef.size() != bdim(d)) throw DimensionMismatch("BForm: coefficient length");
  }
};

// de Casteljau evaluation at barycentric coordinates.
inline double eval(const BForm& b, const std::array<double, 3>& bary) {
  const int d = b.degree;
  if (d == 0) return b.coef[0];
  Eigen::VectorXd work = b.coef;
  for (int level = d; level >= 1; --level) {
    const auto mis = multi_indices(level - 1);
    for (const auto& mi : mis) {
      const double c1 = work[bindex(level, mi.i + 1, mi.j)];
      const double c2 = work[bindex(level, mi.i, mi.j + 1)];
      const double c3 = work[bindex(level, mi.i, mi.j)];
      work[bindex(level - 1, mi.i, mi.j)] = bary[0] * c1 + bary[1] * c2 + bary[2] * c3;
    }
  }
  return work[0];
}

inline double eval(const BForm& b, Point p) { return eval(b, barycentric(b.tri, p)); }

namespace detail {

// Coefficients of the directional derivative along barycentric direction a
// (a1+a2+a3 = 0 for a spatial direction).
inline Eigen::VectorXd directional_derivative_coef(int d, const Eigen::VectorXd& c,
                                                   const std::array<double, 3>& a) {
  Eigen::VectorXd out(bdim(d - 1));
  for (const auto& mi : multi_indices(d - 1)) {
    out[bindex(d - 1, mi.i, mi.j)] =
        d * (a[0] * c[bindex(d, mi.i + 1, mi.j)] + a[1] * c[bindex(d, mi.i, mi.j + 1)] +
             a[2] * c[bindex(d, mi.i, mi.j)]);
  }
  return out;
}

}  // namespace detail

enum class Direction { x, y };

// Exact B-form of the partial derivative, one degree lower.
inline BForm derivative(const BForm& b, Direction dir) {
  if (b.degree < 1) throw DegreeTooLow("derivative: degree 0 form");
  const auto g = barycentric_gradients(b.tri);
  std::array<double, 3> a{};
  for (int l = 0; l < 3; ++l) a[l] = (dir == Direction::x) ? g[l].x : g[l].y;
  return {b.degree - 1, b.tri, detail::directional_derivative_coef(b.degree, b.coef, a)};
}

// Degree elevation d -> d+1; the represented polynomial is unchanged.
inline BForm elevate(const BForm& b) {
  const int d = b.degree;
  Eigen::VectorXd out(bdim(d + 1));
  auto get = [&](int i, int j, int k) -> double {
    if (i < 0 || j < 0 || k < 0) return 0.0;
    return b.coef[bindex(d, i, j)];
  };
  for (const auto& mi : multi_indices(d + 1)) {
    out[bindex(d + 1, mi.i, mi.j)] =
        (mi.i * get(mi.i - 1, mi.j, mi.k) + mi.j * get(mi.i, mi.j - 1, mi.k) +
         mi.k * get(mi.i, mi.j, mi.k - 1)) /
        (d + 1);
  }
  return {d + 1, b.tri, std::move(out)};
}

// Exact integral over the triangle: every basis function of degree d has the
// same integral Area/bdim(d).
inline double integral(const BForm& b) { return area(b.tri) * b.coef.sum() / bdim(b.degree); }

namespace detail {
inline bool same_triangle(const Triangle& a, const Triangle& b) {
  for (int i = 0; i < 3; ++i)
    if (a.v[i].x != b.v[i].x || a.v[i].y != b.v[i].y) return false;
  return true;
}
}  // namespace detail

// Product of two B-forms on the same triangle, degree d1+d2, with exact
// binomial-coefficient weights.
inline BForm bform_product(const BForm& b1, const BForm& b2) {
  if (!detail::same_triangle(b1.tri, b2.tri))
    throw TriangleMismatch("bform_product: different triangles");
  const int d1 = b1.degree, d2 = b2.degree, d = d1 + d2;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(bdim(d));
  const auto mi1 = multi_indices(d1);
  const auto mi2 = multi_indices(d2);
  for (const auto& a : mi1) {
    const double ca = b1.coef[bindex(d1, a.i, a.j)];
    if (ca == 0.0) continue;
    const double ma = detail::multinomial(d1, a.i, a.j, a.k);
    for (const auto& b : mi2) {
      const double cb = b2.coef[bindex(d2, b.i, b.j)];
      if (cb == 0.0) continue;
      const double mb = detail::multinomial(d2, b.i, b.j, b.k);
      const double mg = detail::multinomial(d, a.i + b.i, a.j + b.j, a.k + b.k);
      out[bindex(d, a.i + b.i, a.j + b.j)] += ca * cb * ma * mb / mg;
    }
  }
  return {d, b1.tri, std::move(out)};
}

inline double product_integral(const BForm& b1, const BForm& b2) {
  return integral(bform_product(b1, b2));
}

inline double triple_product_integral(const BForm& w, const BForm& b1, const BForm& b2) {
  return integral(bform_product(bform_product(w, b1), b2));
}

// B-form interpolating f at the domain points of degree d; exact when f is a
// polynomial of degree <= d.
inline BForm bform_interpolate(const Triangle& t, int d,
                               const std::function<double(Point)>& f) {
  const int n = bdim(d);
  const auto pts = domain_points(t, d);
  const auto mis = multi_indices(d);
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd rhs(n);
  for (int r = 0; r < n; ++r) {
    const auto bary = barycentric(t, pts[r]);
    for (int c = 0; c < n; ++c) {
      const auto& mi = mis[c];
      V(r, c) = detail::multinomial(d, mi.i, mi.j, mi.k) * std::pow(bary[0], mi.i) *
                std::pow(bary[1], mi.j) * std::pow(bary[2], mi.k);
    }
    rhs[r] = f(pts[r]);
  }
  return {d, t, V.fullPivLu().solve(rhs)};
}

}  // namespace splinepde
