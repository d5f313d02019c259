#pragma once

// Discrete PDE operator assembly: per-triangle coefficient interpolants S_ij,
// right-hand-side projection, the rectangular stiffness matrix encoding
// sum_ij S_ij d2_ij u + S_c u tested against the dual basis, and the
// block-diagonal mass matrix.  All integrals use the exact Bernstein product
// formulas; quadrature appears only in the moment computation of the
// projection.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <limits>
#include <vector>

#include "splinepde/constraints.hpp"
#include "splinepde/mesh.hpp"
#include "splinepde/quadrature.hpp"

namespace splinepde {

using ScalarField = std::function<double(Point)>;

struct CoefficientField {
  ScalarField a11, a12, a22, c;  // a21 == a12 (symmetric tensor)
};

// Piecewise-polynomial coefficient vector over the whole triangulation,
// per-triangle blocks in triangle order.
struct SplineCoefficients {
  int degree = 0;
  const Triangulation* tri = nullptr;
  Eigen::VectorXd coef;
};

// Per-triangle interpolants of the PDE coefficients, degree k2.
struct CoefficientSplines {
  int degree = 0;
  std::vector<BForm> s11, s12, s22, sc;
};

enum class CoefficientMode {
  interpolate,  // nodal interpolation at the domain points (default)
  project,      // local L2 projection
};

struct DiscreteOperator {
  SparseMatrix K;        // d(M_h) x d(X_h), second-order terms
  SparseMatrix Kc;       // d(M_h) x d(X_h), c-term contribution
  SparseMatrix M;        // d(M_h) x d(M_h), block-diagonal mass
  Eigen::VectorXd f_vec; // M * f coefficients
  int block_rows = 0;    // per-triangle block sizes of K
  int block_cols = 0;
  SparseMatrix total() const { return K + Kc; }
};

namespace detail {

// Exact closed-form mass block: integral of B^d_beta * B^d_gamma over the
// triangle.
inline Eigen::MatrixXd mass_block(int d, double tri_area) {
  const auto mis = multi_indices(d);
  const int n = bdim(d);
  Eigen::MatrixXd M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto &a = mis[r], &b = mis[c];
      M(r, c) = 2.0 * tri_area * multinomial(d, a.i, a.j, a.k) *
                multinomial(d, b.i, b.j, b.k) * factorial(a.i + b.i) *
                factorial(a.j + b.j) * factorial(a.k + b.k) / factorial(2 * d + 2);
    }
  return M;
}

// Pair-integral weights for unit area: W(r,c) = integral of
// B^{d1}_r * B^{d2}_c over a triangle of area 1.
inline Eigen::MatrixXd pair_integral_unit(int d1, int d2) {
  const auto m1 = multi_indices(d1);
  const auto m2 = multi_indices(d2);
  Eigen::MatrixXd W(bdim(d1), bdim(d2));
  for (int r = 0; r < bdim(d1); ++r)
    for (int c = 0; c < bdim(d2); ++c) {
      const auto &a = m1[r], &b = m2[c];
      W(r, c) = 2.0 * multinomial(d1, a.i, a.j, a.k) * multinomial(d2, b.i, b.j, b.k) *
                factorial(a.i + b.i) * factorial(a.j + b.j) * factorial(a.k + b.k) /
                factorial(d1 + d2 + 2);
    }
  return W;
}

// Evaluation point pulled slightly toward the triangle centroid, so that
// piecewise-defined coefficients (sign, |x|) are sampled from the correct
// quadrant when a domain point sits on a kink-aligned edge.
inline Point toward_centroid(Point p, const Triangle& t) {
  constexpr double eps = 1e-10;
  const Point c = (1.0 / 3.0) * (t.v[0] + t.v[1] + t.v[2]);
  return (1.0 - eps) * p + eps * c;
}

inline BForm local_projection(const Triangle& tri, int d, const ScalarField& f) {
  const auto rule = triangle_rule(tri, d + 10);
  const int n = bdim(d);
  const auto mis = multi_indices(d);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(n);
  for (const auto& q : rule) {
    const auto bary = barycentric(tri, q.p);
    const double fv = f(q.p) * q.w;
    for (int c = 0; c < n; ++c) {
      const auto& mi = mis[c];
      moments[c] += fv * multinomial(d, mi.i, mi.j, mi.k) * std::pow(bary[0], mi.i) *
                    std::pow(bary[1], mi.j) * std::pow(bary[2], mi.k);
    }
  }
  const Eigen::MatrixXd Mb = mass_block(d, area(tri));
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Mb);
  if (ldlt.info() != Eigen::Success)
    throw SingularLocalMass("local_projection: mass block not factorizable");
  return {d, tri, ldlt.solve(moments)};
}

}  // namespace detail

// Per-triangle least-squares projection of f onto piecewise polynomials of
// degree m; reproduces members of the space and contracts the L2 norm.
inline SplineCoefficients project_to_space(const ScalarField& f, const Triangulation& t,
                                           int m) {
  SplineCoefficients out{m, &t, Eigen::VectorXd(t.num_triangles() * bdim(m))};
  for (int ti = 0; ti < t.num_triangles(); ++ti)
    out.coef.segment(ti * bdim(m), bdim(m)) =
        detail::local_projection(t.triangle(ti), m, f).coef;
  return out;
}

inline CoefficientSplines interpolate_coefficients(
    const CoefficientField& field, const Triangulation& t, int k2,
    CoefficientMode mode = CoefficientMode::interpolate) {
  CoefficientSplines cs;
  cs.degree = k2;
  const int nt = t.num_triangles();
  cs.s11.reserve(nt);
  cs.s12.reserve(nt);
  cs.s22.reserve(nt);
  cs.sc.reserve(nt);
  for (int ti = 0; ti < nt; ++ti) {
    const Triangle geom = t.triangle(ti);
    auto fit = [&](const ScalarField& f) {
      auto nudged = [&](Point p) { return f(detail::toward_centroid(p, geom)); };
      if (mode == CoefficientMode::interpolate) return bform_interpolate(geom, k2, nudged);
      return detail::local_projection(geom, k2, nudged);
    };
    cs.s11.push_back(fit(field.a11));
    cs.s12.push_back(fit(field.a12));
    cs.s22.push_back(fit(field.a22));
    cs.sc.push_back(fit(field.c));
  }
  return cs;
}

// Block-diagonal Gram matrix of the degree-k1 basis (exact closed form).
inline SparseMatrix mass_matrix(const Triangulation& t, int k1) {
  const int n = bdim(k1);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(t.num_triangles()) * n * n);
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const Eigen::MatrixXd Mb = detail::mass_block(k1, area(t.triangle(ti)));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        trip.emplace_back(ti * n + r, ti * n + c, Mb(r, c));
  }
  SparseMatrix M(t.num_triangles() * n, t.num_triangles() * n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

// Stiffness blocks: K(beta,alpha) = sum_ij int_T S_ij d2_ij B^k_alpha
// B^{k1}_beta, and the separate c-term Kc(beta,alpha) = int_T S_c B^k_alpha
// B^{k1}_beta.  Blocks couple no distinct triangles.
inline DiscreteOperator stiffness_matrix(const Triangulation& t, int k, int k1,
                                         const CoefficientSplines& cs) {
  if (k < 2) throw DegreeTooLow("stiffness_matrix: need k >= 2");
  const int k2 = cs.degree;
  const int nX = bdim(k), nM = bdim(k1);
  const int dK = k2 + (k - 2);   // degree of S_ij * d2 B_alpha
  const int dC = k2 + k;         // degree of S_c * B_alpha
  const Eigen::MatrixXd WK = detail::pair_integral_unit(dK, k1);
  const Eigen::MatrixXd WC = detail::pair_integral_unit(dC, k1);

  std::vector<Triplet> tripK, tripC;
  tripK.reserve(static_cast<size_t>(t.num_triangles()) * nX * nM);
  tripC.reserve(tripK.capacity());
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    const Triangle geom = t.triangle(ti);
    const double A = area(geom);
    const auto g = barycentric_gradients(geom);
    const std::array<double, 3> ax{g[0].x, g[1].x, g[2].x};
    const std::array<double, 3> ay{g[0].y, g[1].y, g[2].y};

    Eigen::MatrixXd EK = Eigen::MatrixXd::Zero(bdim(dK), nX);
    Eigen::MatrixXd EC = Eigen::MatrixXd::Zero(bdim(dC), nX);
    for (int a = 0; a < nX; ++a) {
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(nX);
      unit[a] = 1.0;
      const Eigen::VectorXd dx = detail::directional_derivative_coef(k, unit, ax);
      const Eigen::VectorXd dy = detail::directional_derivative_coef(k, unit, ay);
      const BForm dxx{k - 2, geom, detail::directional_derivative_coef(k - 1, dx, ax)};
      const BForm dxy{k - 2, geom, detail::directional_derivative_coef(k - 1, dx, ay)};
      const BForm dyy{k - 2, geom, detail::directional_derivative_coef(k - 1, dy, ay)};
      // a12 d2_xy + a21 d2_yx contributes twice the cross term
      EK.col(a) = bform_product(cs.s11[ti], dxx).coef +
                  2.0 * bform_product(cs.s12[ti], dxy).coef +
                  bform_product(cs.s22[ti], dyy).coef;
      EC.col(a) = bform_product(cs.sc[ti], BForm{k, geom, unit}).coef;
    }
    const Eigen::MatrixXd BK = A * WK.transpose() * EK;  // nM x nX
    const Eigen::MatrixXd BC = A * WC.transpose() * EC;
    for (int r = 0; r < nM; ++r)
      for (int c = 0; c < nX; ++c) {
        if (BK(r, c) != 0.0) tripK.emplace_back(ti * nM + r, ti * nX + c, BK(r, c));
        if (BC(r, c) != 0.0) tripC.emplace_back(ti * nM + r, ti * nX + c, BC(r, c));
      }
  }
  DiscreteOperator op;
  op.block_rows = nM;
  op.block_cols = nX;
  op.K.resize(t.num_triangles() * nM, t.num_triangles() * nX);
  op.Kc.resize(t.num_triangles() * nM, t.num_triangles() * nX);
  op.K.setFromTriplets(tripK.begin(), tripK.end());
  op.Kc.setFromTriplets(tripC.begin(), tripC.end());
  return op;
}

// M * f with f projected onto the degree-k1 space.
inline Eigen::VectorXd load_vector(const Triangulation& t, int k1, const ScalarField& f) {
  return mass_matrix(t, k1) * project_to_space(f, t, k1).coef;
}

// Full operator for one level: stiffness, mass and load together.
inline DiscreteOperator assemble_operator(const Triangulation& t, int k, int k1,
                                          const CoefficientSplines& cs,
                                          const ScalarField& f) {
  DiscreteOperator op = stiffness_matrix(t, k, k1, cs);
  op.M = mass_matrix(t, k1);
  op.f_vec = op.M * project_to_space(f, t, k1).coef;
  return op;
}

// Cordes margin estimate: min over the samples of trace(a)^2 / sum a_ij^2 - 1.
// Positive means the condition holds at the sampled points.  Diagnostic only.
inline double cordes_diagnostic(const CoefficientField& field,
                                const std::vector<Point>& samples) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    const double a11 = field.a11(p), a12 = field.a12(p), a22 = field.a22(p);
    const double tr = a11 + a22;
    const double frob2 = a11 * a11 + 2.0 * a12 * a12 + a22 * a22;
    margin = std::min(margin, tr * tr / frob2 - 1.0);
  }
  return margin;
}

}  // namespace splinepde
