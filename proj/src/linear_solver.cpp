#include "biharm/linear_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>

namespace biharm {

namespace {

Eigen::VectorXd solve_ldlt(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options,
                           SolverStats& stats) {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("LDL^T factorization failed");
  stats.method = "ldlt";
  stats.factor_nonzeros = ldlt.matrixL().nestedExpression().nonZeros() + a.rows();
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.size() > 0 ? d.cwiseAbs().maxCoeff() : 0.0;
  Index bad = 0;
  for (Index i = 0; i < d.size(); ++i) {
    if (d(i) <= 1e-14 * dmax) ++bad;
  }
  stats.nonpositive_pivots = bad;
  if (options.expect_spd && bad > 0) {
    throw NonCoerciveError("system is not positive definite: " + std::to_string(bad) +
                               " non-positive pivots; the scheme is not coercive for these penalty parameters",
                           bad);
  }
  Eigen::VectorXd x = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success) throw SolverError("LDL^T solve failed");
  return x;
}

Eigen::VectorXd solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options,
                         SolverStats& stats) {
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(options.cg_tolerance);
  cg.setMaxIterations(options.cg_max_iterations > 0 ? options.cg_max_iterations : 10 * a.rows());
  cg.compute(a);
  Eigen::VectorXd x = cg.solve(b);
  stats.method = "cg";
  stats.iterations = cg.iterations();
  if (cg.info() == Eigen::NumericalIssue) {
    throw NonCoerciveError("conjugate gradients broke down; the system is not positive definite", 0);
  }
  if (cg.info() != Eigen::Success) stats.converged = false;
  return x;
}

Eigen::VectorXd solve_lu(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options,
                         SolverStats& stats) {
  if (a.rows() < options.dense_limit) {
    const Eigen::MatrixXd dense(a);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
    stats.method = "dense-lu";
    stats.factor_nonzeros = dense.size();
    const double dmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    const double dmax = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
    if (!(dmin > 1e-14 * dmax)) throw SolverError("matrix is singular to working precision");
    return lu.solve(b);
  }
  SparseMatrix copy = a;
  copy.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(copy);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU failed: " + lu.lastErrorMessage());
  stats.method = "sparse-lu";
  stats.factor_nonzeros = lu.nnzL() + lu.nnzU();
  return lu.solve(b);
}

}  // namespace

Eigen::VectorXd solve_linear(const SparseMatrix& a, const Eigen::VectorXd& b, bool symmetric,
                             const SolverOptions& options, SolverStats* stats_out) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw SolverError("dimension mismatch");
  SolverStats stats;
  Eigen::VectorXd x;
  if (a.rows() == 0) {
    stats.method = "empty";
    x = Eigen::VectorXd(0);
  } else if (!symmetric) {
    x = solve_lu(a, b, options, stats);
  } else if (options.method == SolverMethod::ConjugateGradient) {
    x = solve_cg(a, b, options, stats);
  } else {
    x = solve_ldlt(a, b, options, stats);
  }
  if (!x.allFinite()) throw SolverError("solution contains non-finite values");
  const double bnorm = b.norm();
  const double r = (a * x - b).norm();
  stats.residual = bnorm > 0.0 ? r / bnorm : r;
  if (stats.residual > options.residual_tolerance) stats.converged = false;
  if (stats_out) *stats_out = stats;
  return x;
}

}  // namespace biharm
