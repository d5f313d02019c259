#pragma once

// Solver for the constrained least-squares problem
//
//   min (h^2/2) (||H u||^2 + ||B u - g||^2)   subject to   K u = M f.
//
// The constraint matrix is block-diagonal (one rectangular block per
// triangle) and, depending on the degree pair, its blocks range from full
// row rank to rank-deficient with an inconsistent right-hand side, so the
// constraint is enforced through a quadratic penalty rather than exactly:
//
//   (A + rho C^T C) u = rhs_primal + rho C^T rhs_dual,   lambda = rho (C u - rhs_dual).
//
// The default weight rho = h^2/6 keeps the enforcement balanced against the
// h^2-scaled objective; hard enforcement of the inconsistent fine-level
// constraints measurably degrades the value-error convergence.  The direct
// method factorizes the penalized normal matrix once, the iterative method
// solves the same system by conjugate gradients.

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "splinepde/assembly.hpp"
#include "splinepde/constraints.hpp"

namespace splinepde {

struct KKTSystem {
  SparseMatrix A;              // h^2 (H^T H + B^T B), symmetric PSD
  SparseMatrix C;              // K + Kc, block diagonal per triangle
  Eigen::VectorXd rhs_primal;  // h^2 B^T g
  Eigen::VectorXd rhs_dual;    // M f
  double h = 0.0;
  double g_sq = 0.0;           // h^2 * ||g||^2, completes the objective value
  int block_rows = 0;          // C block sizes
  int block_cols = 0;
};

enum class SolveMethod { direct, iterative };

struct SolveReport {
  Eigen::VectorXd u;       // primal coefficients
  Eigen::VectorXd lambda;  // multiplier
  double constraint_residual = 0.0;    // ||C u - rhs_dual||
  double stationarity_residual = 0.0;  // ||(A + rho C^T C) u - rhs|| of the penalized system
  double rhs_norm = 0.0;               // ||rhs|| of the penalized system, for relative checks
  double objective = 0.0;              // h^2/2 (||H u||^2 + ||B u - g||^2)
  SolveMethod method = SolveMethod::direct;
  int iterations = 0;
  bool converged = true;
};

inline KKTSystem assemble_kkt(const ConstraintSystem& cs, const DiscreteOperator& op,
                              double h) {
  if (cs.H.cols() != op.K.cols() || cs.B.cols() != op.K.cols())
    throw DimensionMismatch("assemble_kkt: constraint/operator column mismatch");
  if (op.f_vec.size() != op.K.rows())
    throw DimensionMismatch("assemble_kkt: load vector length");
  KKTSystem kkt;
  const double w = h * h;
  kkt.A = w * (SparseMatrix(cs.H.transpose()) * cs.H +
               SparseMatrix(cs.B.transpose()) * cs.B);
  kkt.C = op.total();
  kkt.rhs_primal = w * (cs.B.transpose() * cs.g);
  kkt.rhs_dual = op.f_vec;
  kkt.h = h;
  kkt.g_sq = w * cs.g.squaredNorm();
  kkt.block_rows = op.block_rows;
  kkt.block_cols = op.block_cols;
  return kkt;
}

namespace detail {

inline double default_penalty(const KKTSystem& kkt) {
  return kkt.h > 0.0 ? kkt.h * kkt.h / 6.0 : 1.0 / 6.0;
}

inline double objective_value(const KKTSystem& kkt, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(kkt.A * u) - kkt.rhs_primal.dot(u) + 0.5 * kkt.g_sq;
}

// The multiplier from the penalty formula rho (C u - rhs_dual) amplifies the
// rounding error of C u by rho.  Recovering it from stationarity,
// C^T lambda = rhs_primal - A u, in the least-squares sense avoids that; fall
// back to the penalty formula when C C^T is rank deficient.
inline Eigen::VectorXd recover_multiplier(const KKTSystem& kkt, const Eigen::VectorXd& u,
                                          double rho) {
  const Eigen::VectorXd lambda_pen = rho * (kkt.C * u - kkt.rhs_dual);
  const Eigen::VectorXd r = kkt.rhs_primal - kkt.A * u;
  const SparseMatrix Ct = kkt.C.transpose();
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(SparseMatrix(kkt.C * Ct));
  if (ldlt.info() != Eigen::Success) return lambda_pen;
  const Eigen::VectorXd lambda_ls = ldlt.solve(kkt.C * r);
  if (!lambda_ls.allFinite()) return lambda_pen;
  return (Ct * lambda_ls - r).norm() <= (Ct * lambda_pen - r).norm() ? lambda_ls
                                                                     : lambda_pen;
}

inline SolveReport finish_report(const KKTSystem& kkt, const SparseMatrix& aug,
                                 const Eigen::VectorXd& rhs, double rho,
                                 Eigen::VectorXd u) {
  SolveReport rep;
  rep.u = std::move(u);
  rep.lambda = recover_multiplier(kkt, rep.u, rho);
  rep.constraint_residual = (kkt.C * rep.u - kkt.rhs_dual).norm();
  rep.stationarity_residual = (aug * rep.u - rhs).norm();
  rep.rhs_norm = rhs.norm();
  rep.objective = objective_value(kkt, rep.u);
  return rep;
}

inline SolveReport solve_direct(const KKTSystem& kkt, const SparseMatrix& aug,
                                const Eigen::VectorXd& rhs, double rho) {
  Eigen::VectorXd u;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(aug);
  if (ldlt.info() == Eigen::Success) {
    u = ldlt.solve(rhs);
    for (int pass = 0; pass < 3; ++pass) u += ldlt.solve(rhs - aug * u);
  } else {
    Eigen::SparseLU<SparseMatrix> lu(aug);
    if (lu.info() != Eigen::Success)
      throw SingularSystem("solve: penalized system not factorizable");
    u = lu.solve(rhs);
    for (int pass = 0; pass < 3; ++pass) u += lu.solve(rhs - aug * u);
  }
  SolveReport rep = finish_report(kkt, aug, rhs, rho, std::move(u));
  rep.method = SolveMethod::direct;
  rep.iterations = 1;
  return rep;
}

inline SolveReport solve_iterative(const KKTSystem& kkt, const SparseMatrix& aug,
                                   const Eigen::VectorXd& rhs, double rho,
                                   double tol, int max_it) {
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_it);
  cg.compute(aug);
  if (cg.info() != Eigen::Success)
    throw SingularSystem("solve: penalized system not usable");
  Eigen::VectorXd u = cg.solve(rhs);
  SolveReport rep = finish_report(kkt, aug, rhs, rho, std::move(u));
  rep.method = SolveMethod::iterative;
  rep.iterations = static_cast<int>(cg.iterations());
  rep.converged = cg.info() == Eigen::Success;
  return rep;
}

}  // namespace detail

// rho <= 0 selects the default constraint weight h^2/6.
inline SolveReport solve(const KKTSystem& kkt, SolveMethod method = SolveMethod::direct,
                         double tol = 1e-10, int max_it = 200, double rho = 0.0) {
  if (kkt.A.rows() != kkt.C.cols())
    throw DimensionMismatch("solve: A/C dimension mismatch");
  if (rho <= 0.0) rho = detail::default_penalty(kkt);
  const SparseMatrix Ct = kkt.C.transpose();
  const SparseMatrix aug = kkt.A + rho * (Ct * kkt.C);
  const Eigen::VectorXd rhs = kkt.rhs_primal + rho * (Ct * kkt.rhs_dual);
  if (method == SolveMethod::direct) return detail::solve_direct(kkt, aug, rhs, rho);
  return detail::solve_iterative(kkt, aug, rhs, rho, tol, max_it);
}

}  // namespace splinepde
