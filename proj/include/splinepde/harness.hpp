#pragma once

// Convergence-study driver: solve a benchmark problem over a sequence of
// uniform refinement levels, measure RMSE of the value/gradient/Hessian
// errors on an evaluation lattice, compute level-to-level rates and format
// the result table.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "splinepde/problems.hpp"
#include "splinepde/saddle_solver.hpp"

namespace splinepde {

struct StudyConfig {
  std::string problem = "ex1";
  int degree = 5;       // k, primal spline degree
  int dual_degree = 5;  // k1, test space degree
  std::vector<int> levels = {1, 2, 3, 4};
  int grid_n = 201;
  int k2 = 2;  // coefficient interpolation degree
  SolveMethod method = SolveMethod::direct;
  double tol = 1e-10;
  int max_it = 200;
  CoefficientMode coefficient_mode = CoefficientMode::interpolate;
};

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double rmse_value = 0.0, rate_value = 0.0;
  double rmse_gradient = 0.0, rate_gradient = 0.0;
  double rmse_hessian = 0.0, rate_hessian = 0.0;
  double constraint_residual = 0.0;
  double solve_seconds = 0.0;
  int iterations = 0;
  bool converged = true;
};

constexpr double kPlateauRmse = 1e-13;  // below this, rates are noise

struct ErrorSummary {
  double rmse_value, rmse_gradient, rmse_hessian;
};

// RMSE of S_u - u and its first/second derivatives on a grid_n x grid_n
// lattice over the bounding rectangle.  Gradient RMSE averages the two
// component RMSEs, Hessian RMSE the three.  For piecewise problems lattice
// points on kink lines are nudged into the containing triangle so spline and
// exact values come from the same quadrant.
inline ErrorSummary evaluate_errors(const SplineCoefficients& u,
                                    const ProblemDefinition& p, int grid_n) {
  if (!p.has_exact) throw NoExactSolution("evaluate_errors: " + p.id);
  const Triangulation& t = *u.tri;
  const int k = u.degree, n = bdim(k);

  std::vector<BForm> su, sx, sy, sxx, sxy, syy;
  su.reserve(t.num_triangles());
  for (int ti = 0; ti < t.num_triangles(); ++ti) {
    su.emplace_back(k, t.triangle(ti), u.coef.segment(ti * n, n));
    sx.push_back(derivative(su[ti], Direction::x));
    sy.push_back(derivative(su[ti], Direction::y));
    sxx.push_back(derivative(sx[ti], Direction::x));
    sxy.push_back(derivative(sx[ti], Direction::y));
    syy.push_back(derivative(sy[ti], Direction::y));
  }

  double s_u = 0, s_x = 0, s_y = 0, s_xx = 0, s_xy = 0, s_yy = 0;
  const double dx = (p.domain_hi.x - p.domain_lo.x) / (grid_n - 1);
  const double dy = (p.domain_hi.y - p.domain_lo.y) / (grid_n - 1);
  for (int iy = 0; iy < grid_n; ++iy) {
    for (int ix = 0; ix < grid_n; ++ix) {
      Point q{p.domain_lo.x + ix * dx, p.domain_lo.y + iy * dy};
      const auto [ti, bary0] = t.locate_point(q);
      auto bary = bary0;
      if (p.piecewise) {
        q = detail::toward_centroid(q, su[ti].tri);
        bary = barycentric(su[ti].tri, q);
      }
      const ExactDerivatives ex = p.exact(q);
      auto sq = [](double v) { return v * v; };
      s_u += sq(eval(su[ti], bary) - ex.u);
      s_x += sq(eval(sx[ti], bary) - ex.ux);
      s_y += sq(eval(sy[ti], bary) - ex.uy);
      s_xx += sq(eval(sxx[ti], bary) - ex.uxx);
      s_xy += sq(eval(sxy[ti], bary) - ex.uxy);
      s_yy += sq(eval(syy[ti], bary) - ex.uyy);
    }
  }
  const double np = static_cast<double>(grid_n) * grid_n;
  auto rmse = [&](double s) { return std::sqrt(s / np); };
  return {rmse(s_u), 0.5 * (rmse(s_x) + rmse(s_y)),
          (rmse(s_xx) + rmse(s_xy) + rmse(s_yy)) / 3.0};
}

struct LevelSolution {
  Triangulation mesh;
  SplineCoefficients u;
  SolveReport report;
};

// Assemble and solve one refinement level.
inline LevelSolution solve_level(const ProblemDefinition& p, Triangulation mesh,
                                 const StudyConfig& cfg) {
  const double h = mesh_metrics(mesh).h;
  const auto cs = assemble_constraints(mesh, cfg.degree, p.g);
  const auto coeffs =
      interpolate_coefficients(p.coefficients, mesh, cfg.k2, cfg.coefficient_mode);
  const auto op =
      assemble_operator(mesh, cfg.degree, cfg.dual_degree, coeffs, p.f);
  const auto kkt = assemble_kkt(cs, op, h);
  SolveReport rep = solve(kkt, cfg.method, cfg.tol, cfg.max_it);
  LevelSolution out;
  out.u = SplineCoefficients{cfg.degree, nullptr, std::move(rep.u)};
  out.report = std::move(rep);
  out.report.u.resize(0);
  out.mesh = std::move(mesh);
  out.u.tri = &out.mesh;
  return out;
}

inline std::vector<ConvergenceRow> run_study(const StudyConfig& cfg) {
  if (cfg.degree < 2) throw DegreeTooLow("run_study: degree must be >= 2");
  if (cfg.dual_degree < 0 || cfg.dual_degree > cfg.degree)
    throw DimensionMismatch("run_study: need 0 <= dual degree <= degree");
  if (const char* env = std::getenv("SPLINEPDE_THREADS"))
    Eigen::setNbThreads(std::atoi(env));

  const ProblemDefinition p = get_problem(cfg.problem);
  std::vector<ConvergenceRow> rows;
  Triangulation mesh = p.initial_triangulation;
  int current = 0;
  for (int level : cfg.levels) {
    if (level < current)
      throw DimensionMismatch("run_study: levels must be non-decreasing");
    for (; current < level; ++current) mesh = uniform_refine(mesh);

    const auto t0 = std::chrono::steady_clock::now();
    LevelSolution sol = solve_level(p, mesh, cfg);
    const auto err = evaluate_errors(sol.u, p, cfg.grid_n);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

    ConvergenceRow row;
    row.level = level;
    row.h = mesh_metrics(mesh).h;
    row.rmse_value = err.rmse_value;
    row.rmse_gradient = err.rmse_gradient;
    row.rmse_hessian = err.rmse_hessian;
    if (!rows.empty()) {
      const auto& pr = rows.back();
      auto rate = [](double prev, double cur) {
        return (prev > 0 && cur > 0) ? std::log2(prev / cur) : 0.0;
      };
      row.rate_value = rate(pr.rmse_value, row.rmse_value);
      row.rate_gradient = rate(pr.rmse_gradient, row.rmse_gradient);
      row.rate_hessian = rate(pr.rmse_hessian, row.rmse_hessian);
    }
    row.constraint_residual = sol.report.constraint_residual;
    row.solve_seconds = dt.count();
    row.iterations = sol.report.iterations;
    row.converged = sol.report.converged;
    rows.push_back(row);
  }
  return rows;
}

enum class TableFormat { text, csv };

inline std::string emit_table(const std::vector<ConvergenceRow>& rows,
                              TableFormat format) {
  if (rows.empty()) throw IoError("emit_table: no rows");
  std::ostringstream os;
  auto rate_cell = [](std::ostream& o, double rmse, double rate) {
    o << std::fixed << std::setprecision(2) << rate;
    if (rmse < kPlateauRmse) o << "*";  // at machine-precision plateau
  };
  if (format == TableFormat::csv) {
    os << "h,rmse_u,rate_u,rmse_grad,rate_grad,rmse_hess,rate_hess,"
          "constraint_residual,solve_seconds\n";
    for (const auto& r : rows) {
      os << std::setprecision(6) << std::fixed << r.h << ","
         << std::scientific << r.rmse_value << "," << std::fixed << r.rate_value
         << "," << std::scientific << r.rmse_gradient << "," << std::fixed
         << r.rate_gradient << "," << std::scientific << r.rmse_hessian << ","
         << std::fixed << r.rate_hessian << "," << std::scientific
         << r.constraint_residual << "," << std::fixed << r.solve_seconds << "\n";
    }
    return os.str();
  }
  for (const auto& r : rows) {
    os << std::fixed << std::setprecision(4) << r.h;
    os << " & " << std::scientific << std::setprecision(6) << r.rmse_value << " & ";
    rate_cell(os, r.rmse_value, r.rate_value);
    os << " & " << std::scientific << std::setprecision(6) << r.rmse_gradient
       << " & ";
    rate_cell(os, r.rmse_gradient, r.rate_gradient);
    os << " & " << std::scientific << std::setprecision(6) << r.rmse_hessian
       << " & ";
    rate_cell(os, r.rmse_hessian, r.rate_hessian);
    os << "\n";
  }
  return os.str();
}

}  // namespace splinepde
