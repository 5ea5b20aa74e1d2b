#pragma once

#include "biharm/fespace.hpp"

#include <iosfwd>
#include <memory>
#include <string_view>

namespace biharm {

enum class SchemeTag { Morley, Dg, C0ip, Wopsip };

std::string_view to_string(SchemeTag tag);
SchemeTag scheme_from_string(std::string_view name);
SpaceTag scheme_space(SchemeTag tag);

struct SchemeConfig {
  SchemeTag scheme = SchemeTag::Morley;
  double theta = 1.0;
  double sigma1 = 100.0;
  double sigma2 = 20.0;
  double sigma_ip = 20.0;
  int quad_order = 7;

  void validate() const;
  bool symmetric() const;
};

// Every form is assembled on DgP2 and restricted to Morley or LagrangeP2 as
// E^T A E with the space's DgP2 embedding E. Entry (i, j) is form(phi_j, phi_i).

/// sum_T int_T D^2 v : D^2 w.
SparseMatrix assemble_apw(const FiniteElementSpace& space);
/// J(v, w) = sum_E int_E [grad v] . <D^2 w> nu_E ds.
SparseMatrix assemble_jump_form(const FiniteElementSpace& space);
/// b_h = -theta J - J^T.
SparseMatrix assemble_consistency(const FiniteElementSpace& space, double theta);
SparseMatrix assemble_cdg(const FiniteElementSpace& space, double sigma1, double sigma2);
SparseMatrix assemble_cip(const FiniteElementSpace& space, double sigma_ip);
SparseMatrix assemble_cp(const FiniteElementSpace& space);
/// Quadratic form of j_h^2.
SparseMatrix assemble_jh(const FiniteElementSpace& space);

struct SchemeSystem {
  SparseMatrix matrix;
  bool symmetric = true;
  SpacePtr space;
  SchemeConfig config;
};

SchemeSystem assemble_scheme(std::shared_ptr<const Triangulation> mesh, const SchemeConfig& config);

/// Jump functionals of a piecewise quadratic on one edge: value jumps at both
/// endpoints and the mean of the normal-derivative jump. Single trace on the boundary.
struct EdgeJumps {
  double vertex[2] = {0.0, 0.0};
  double mean_normal = 0.0;
};

EdgeJumps edge_jumps(const Triangulation& mesh, const Eigen::VectorXd& dg, Index e);
/// j_h(v) from traces of a DgP2 coefficient vector.
double jump_seminorm(const Triangulation& mesh, const Eigen::VectorXd& dg);
/// c_P(v, v) from traces of a DgP2 coefficient vector.
double cp_energy(const Triangulation& mesh, const Eigen::VectorXd& dg);
/// |||v|||_pw of a DgP2 coefficient vector.
double energy_norm_pw(const Triangulation& mesh, const Eigen::VectorXd& dg);

/// min over random samples of v^T A v / v^T N v.
double measured_coercivity(const SparseMatrix& a, const SparseMatrix& norm, int samples, unsigned seed);

/// "i j value" lines, 1-based, one per stored entry.
void write_coordinate(std::ostream& out, const SparseMatrix& m);

}  // namespace biharm
