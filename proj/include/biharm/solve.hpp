#pragma once

#include "biharm/forms.hpp"
#include "biharm/linear_solver.hpp"
#include "biharm/rhs.hpp"

namespace biharm {

/// Wall-clock seconds per phase.
struct Timings {
  double assemble = 0.0;
  double load = 0.0;
  double solve = 0.0;
  double postprocess = 0.0;
};

struct Solution {
  SchemeConfig config;
  DiscreteFunction uh;
  /// J I_M u_h.
  DiscreteFunction ustar;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  SolverStats stats;
  Timings timings;
};

/// Assemble A_h and b = F(J I_M .), solve, and post-process.
Solution solve_scheme(const Smoother& smoother, const SchemeConfig& config, const LoadSpec& load,
                      const SolverOptions& options = {});
Solution solve_scheme(std::shared_ptr<const Triangulation> mesh, const SchemeConfig& config,
                      const LoadSpec& load, const SolverOptions& options = {});

}  // namespace biharm
