#pragma once

#include "biharm/fespace.hpp"

#include <string>

namespace biharm {

enum class SolverMethod { Auto, Direct, ConjugateGradient };

struct SolverOptions {
  SolverMethod method = SolverMethod::Auto;
  /// Reject symmetric systems whose LDL^T factor has non-positive pivots.
  bool expect_spd = true;
  double cg_tolerance = 1e-12;
  /// 0 selects 10 * dimension.
  Index cg_max_iterations = 0;
  double residual_tolerance = 1e-10;
  /// Below this size nonsymmetric systems are solved densely.
  Index dense_limit = 2000;
};

struct SolverStats {
  std::string method;
  Index iterations = 0;
  /// Stored entries of the factor (direct methods).
  Index factor_nonzeros = 0;
  Index nonpositive_pivots = 0;
  double residual = 0.0;
  bool converged = true;
};

/// Solve A x = b. Symmetric systems use sparse LDL^T (or Jacobi-CG on request),
/// nonsymmetric ones dense or sparse LU. Throws NonCoerciveError when an SPD
/// system is expected but the factorization shows otherwise, SolverError on
/// breakdown. A residual above tolerance only clears `stats.converged`.
Eigen::VectorXd solve_linear(const SparseMatrix& a, const Eigen::VectorXd& b, bool symmetric,
                             const SolverOptions& options = {}, SolverStats* stats = nullptr);

}  // namespace biharm
