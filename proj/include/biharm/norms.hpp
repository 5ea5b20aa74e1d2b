#pragma once

#include "biharm/solve.hpp"

#include <vector>

namespace biharm {

/// Errors of u - u_h (and u - J I_M u_h for the starred entries).
struct ErrorReport {
  double energy_pw = 0.0;
  double jump = 0.0;
  double norm_h = 0.0;
  /// ||.||_h for Morley, ||.||_dG, ||.||_IP or ||.||_P otherwise.
  double norm_scheme = 0.0;
  double l2 = 0.0;
  /// Full broken H1 norm.
  double h1_pw = 0.0;
  double h1_star = 0.0;
  double energy_star = 0.0;
  double best_approx = 0.0;
  int quad_order = 7;
};

/// Errors against a smooth clamped solution by triangle quadrature of `quad_order`.
ErrorReport compute_errors(const AnalyticFunction& u, const Solution& sol, int quad_order = 7);

/// The penalty part c_h(v, v) of the scheme's norm for a DgP2 coefficient vector (0 for Morley).
double scheme_penalty(const Triangulation& mesh, const SchemeConfig& config, const Eigen::VectorXd& dg);

/// ||(1 - Pi_0) D^2 u||_{L2}.
double pi0_hessian_deviation(const AnalyticFunction& u, const Triangulation& mesh, int quad_order = 7);

/// |||h_T I_M u|||_pw.
double scaled_interpolant_energy(const AnalyticFunction& u, std::shared_ptr<const Triangulation> mesh);

/// Coarse ancestor of every triangle of the last mesh in a nested hierarchy
/// (coarsest first) built by repeated refine_uniform.
std::vector<Index> coarse_ancestors(const std::vector<std::shared_ptr<const Triangulation>>& hierarchy);

/// Exact representation on a refined mesh of a piecewise quadratic on a coarse one.
Eigen::VectorXd prolong_dg(const Triangulation& coarse, const Eigen::VectorXd& dg, const Triangulation& fine,
                           const std::vector<Index>& ancestor);

/// Errors of a coarse solution against a fine reference solution, measured on
/// the fine mesh. The scheme norm uses the coarse solution's configuration.
ErrorReport compute_reference_errors(const Solution& reference, const Solution& coarse,
                                     const std::vector<Index>& ancestor, int quad_order = 7);

}  // namespace biharm
