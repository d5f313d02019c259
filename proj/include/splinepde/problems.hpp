#pragma once

// Built-in benchmark problems: coefficient tensors, manufactured exact
// solutions with closed-form derivatives, and the right-hand side f obtained
// by applying the operator to the exact solution by hand.  The cross term is
// stored symmetrically (a12 = a21 = half the total cross coefficient).

#include <cmath>
#include <functional>
#include <string>

#include "splinepde/assembly.hpp"
#include "splinepde/mesh.hpp"

namespace splinepde {

struct ExactDerivatives {
  double u, ux, uy, uxx, uxy, uyy;
};

struct ProblemDefinition {
  std::string id;
  Point domain_lo, domain_hi;
  Triangulation initial_triangulation;
  CoefficientField coefficients;
  ScalarField f;
  ScalarField g;
  bool has_exact = false;
  // coefficients or exact derivatives are only piecewise smooth; evaluation
  // points on the interior kink lines must be resolved by quadrant
  bool piecewise = false;
  std::function<ExactDerivatives(Point)> exact;
};

inline ExactDerivatives exact_derivatives(const ProblemDefinition& p, Point pt) {
  if (!p.has_exact) throw NoExactSolution("exact_derivatives: " + p.id);
  return p.exact(pt);
}

namespace detail {

inline double sgn(double t) { return (t > 0.0) - (t < 0.0); }

// unit square split along the (0,0)-(1,1) diagonal
inline Triangulation unit_square_mesh() {
  return build_triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                             {{0, 1, 2}, {0, 2, 3}});
}

// [-1,1]^2 split into two triangles, then refined once so the axes lie on
// mesh edges
inline Triangulation big_square_mesh() {
  Triangulation t = uniform_refine(build_triangulation(
      {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, {{0, 1, 2}, {0, 2, 3}}));
  t.level = 0;
  return t;
}

// [-1,1]^2 as four unit sub-squares, each split along its own main diagonal
inline Triangulation four_square_mesh() {
  std::vector<Point> v;
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 3; ++ix) v.push_back({ix - 1.0, iy - 1.0});
  std::vector<std::array<int, 3>> tris;
  for (int iy = 0; iy < 2; ++iy)
    for (int ix = 0; ix < 2; ++ix) {
      const int a = iy * 3 + ix, b = a + 1, c = a + 4, d = a + 3;
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  return build_triangulation(std::move(v), std::move(tris));
}

// one factor of the nonsmooth tensor-product solution x(e^{1-|x|}-1)
inline void kink_factor(double t, double& X, double& dX, double& d2X) {
  const double e = std::exp(1.0 - std::abs(t));
  X = t * (e - 1.0);
  dX = e * (1.0 - std::abs(t)) - 1.0;
  d2X = -sgn(t) * e * (2.0 - std::abs(t));
}

inline ProblemDefinition sine_problem(std::string id, double w) {
  ProblemDefinition p;
  p.id = std::move(id);
  p.domain_lo = {0, 0};
  p.domain_hi = {1, 1};
  p.initial_triangulation = unit_square_mesh();
  p.coefficients = {[](Point) { return 3.0; }, [](Point) { return 1.0; },
                    [](Point) { return 2.0; }, [](Point) { return 0.0; }};
  p.f = [w](Point q) {
    return -5.0 * w * w * std::sin(w * q.x) * std::sin(w * q.y) +
           2.0 * w * w * std::cos(w * q.x) * std::cos(w * q.y);
  };
  p.g = [w](Point q) { return std::sin(w * q.x) * std::sin(w * q.y); };
  p.has_exact = true;
  p.exact = [w](Point q) {
    const double sx = std::sin(w * q.x), sy = std::sin(w * q.y);
    const double cx = std::cos(w * q.x), cy = std::cos(w * q.y);
    return ExactDerivatives{sx * sy,          w * cx * sy,      w * sx * cy,
                            -w * w * sx * sy, w * w * cx * cy, -w * w * sx * sy};
  };
  return p;
}

inline ProblemDefinition kink_problem(std::string id, bool with_c) {
  ProblemDefinition p;
  p.id = std::move(id);
  p.domain_lo = {-1, -1};
  p.domain_hi = {1, 1};
  p.initial_triangulation = with_c ? four_square_mesh() : big_square_mesh();
  p.coefficients = {[](Point) { return 2.0; },
                    [](Point q) { return sgn(q.x) * sgn(q.y); },
                    [](Point) { return 2.0; },
                    with_c ? ScalarField{[](Point q) {
                      return -(1.0 + q.x * q.x + q.y * q.y);
                    }}
                           : ScalarField{[](Point) { return 0.0; }}};
  p.f = [with_c](Point q) {
    double X, dX, d2X, Y, dY, d2Y;
    kink_factor(q.x, X, dX, d2X);
    kink_factor(q.y, Y, dY, d2Y);
    double v = 2.0 * d2X * Y + 2.0 * sgn(q.x) * sgn(q.y) * dX * dY + 2.0 * X * d2Y;
    if (with_c) v -= (1.0 + q.x * q.x + q.y * q.y) * X * Y;
    return v;
  };
  p.g = [](Point) { return 0.0; };
  p.has_exact = true;
  p.piecewise = true;
  p.exact = [](Point q) {
    double X, dX, d2X, Y, dY, d2Y;
    kink_factor(q.x, X, dX, d2X);
    kink_factor(q.y, Y, dY, d2Y);
    return ExactDerivatives{X * Y, dX * Y, X * dY, d2X * Y, dX * dY, X * d2Y};
  };
  return p;
}

inline ProblemDefinition lower_order_problem(std::string id, bool varying_a) {
  ProblemDefinition p;
  p.id = std::move(id);
  p.domain_lo = {-1, -1};
  p.domain_hi = {1, 1};
  p.initial_triangulation = four_square_mesh();
  const double pi = M_PI;
  if (varying_a) {
    p.coefficients = {[](Point q) { return 1.0 + std::abs(q.x); },
                      [](Point q) { return 0.5 * std::cbrt(q.x * q.y); },
                      [](Point q) { return 1.0 + std::abs(q.y); },
                      [](Point q) { return -(1.0 + q.x * q.x + q.y * q.y); }};
    p.piecewise = true;
  } else {
    p.coefficients = {[](Point) { return 3.0; }, [](Point) { return 1.0; },
                      [](Point) { return 2.0; },
                      [](Point q) { return -(1.0 + q.x * q.x + q.y * q.y); }};
  }
  p.f = [varying_a, pi](Point q) {
    const double sx = std::sin(pi * q.x), sy = std::sin(pi * q.y);
    const double cx = std::cos(pi * q.x), cy = std::cos(pi * q.y);
    const double u = sx * sy, cross = pi * pi * cx * cy;
    double v;
    if (varying_a)
      v = -(2.0 + std::abs(q.x) + std::abs(q.y)) * pi * pi * u +
          std::cbrt(q.x * q.y) * cross;
    else
      v = -5.0 * pi * pi * u + 2.0 * cross;
    return v - (1.0 + q.x * q.x + q.y * q.y) * u;
  };
  p.g = [](Point) { return 0.0; };
  p.has_exact = true;
  p.exact = [pi](Point q) {
    const double sx = std::sin(pi * q.x), sy = std::sin(pi * q.y);
    const double cx = std::cos(pi * q.x), cy = std::cos(pi * q.y);
    return ExactDerivatives{sx * sy,           pi * cx * sy,      pi * sx * cy,
                            -pi * pi * sx * sy, pi * pi * cx * cy, -pi * pi * sx * sy};
  };
  return p;
}

}  // namespace detail

inline ProblemDefinition get_problem(const std::string& id) {
  if (id == "ex1") return detail::sine_problem("ex1", 1.0);
  if (id == "ex1-2pi") return detail::sine_problem("ex1-2pi", 2.0 * M_PI);
  if (id == "ex3") return detail::kink_problem("ex3", false);
  if (id == "ex51") return detail::lower_order_problem("ex51", false);
  if (id == "ex52") return detail::lower_order_problem("ex52", true);
  if (id == "ex53") return detail::kink_problem("ex53", true);
  throw UnknownProblem("get_problem: " + id);
}

}  // namespace splinepde
