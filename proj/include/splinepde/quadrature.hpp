#pragma once

// Gauss quadrature on triangles via a Duffy-type collapse of a tensor
// Gauss-Legendre rule.  Used for the moment computations in the right-hand
// side projection and as the independent integration oracle in the tests.

#include <cmath>
#include <functional>
#include <vector>

#include "splinepde/bernstein.hpp"

namespace splinepde {

struct QuadPoint {
  Point p;
  double w;  // weight, already scaled so that sum(w) = area
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1], exact for polynomials of degree 2n-1.
inline void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate on [-1,1].
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = 0.5 * (1.0 + t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace detail

// Quadrature rule on a triangle, exact for polynomials of total degree
// <= `exact_degree`.  All points are strictly interior.
inline std::vector<QuadPoint> triangle_rule(const Triangle& tri, int exact_degree) {
  const int n = exact_degree / 2 + 2;  // 2n-2 >= exact_degree + 1 after Duffy collapse
  std::vector<double> gx, gw;
  detail::gauss_legendre01(n, gx, gw);
  const double a2 = 2.0 * area(tri);
  std::vector<QuadPoint> out;
  out.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // reference map (u,v) -> (u, v(1-u)), Jacobian (1-u)
      const double u = gx[i], v = gx[j] * (1.0 - gx[i]);
      const double l1 = 1.0 - u - v;
      const Point p = l1 * tri.v[0] + u * tri.v[1] + v * tri.v[2];
      out.push_back({p, a2 * gw[i] * gw[j] * (1.0 - gx[i])});
    }
  }
  return out;
}

inline double integrate(const Triangle& tri, int exact_degree,
                        const std::function<double(Point)>& f) {
  double s = 0.0;
  for (const auto& q : triangle_rule(tri, exact_degree)) s += q.w * f(q.p);
  return s;
}

}  // namespace splinepde
