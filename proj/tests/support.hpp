#pragma once

#include "biharm/interp.hpp"
#include "biharm/mesh.hpp"
#include "biharm/quadrature.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace biharm::testing {

inline std::shared_ptr<const Triangulation> square(int n) {
  return std::make_shared<const Triangulation>(unit_square_mesh(n));
}

inline Eigen::VectorXd random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

/// Piecewise quadratic nodal vector of the continuous P2 interpolant of u.
inline DiscreteFunction lagrange_interpolant(const AnalyticFunction& u, SpacePtr lagrange) {
  const Triangulation& mesh = lagrange->mesh();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(lagrange->dimension());
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    if (lagrange->dofs().vertex_dofs[v] >= 0) c(lagrange->dofs().vertex_dofs[v]) = u(mesh.vertex(v)).value;
  for (Index e = 0; e < mesh.num_edges(); ++e)
    if (lagrange->dofs().edge_dofs[e] >= 0) c(lagrange->dofs().edge_dofs[e]) = u(mesh.edge(e).midpoint).value;
  return DiscreteFunction(lagrange, c);
}

struct BrokenNorms {
  double energy2 = 0.0;     // sum_T ||D^2 e||^2
  double scaled_l2_2 = 0.0;  // sum_T h_T^-4 ||e||^2
};

/// Norms of u - v for a DgP2 nodal vector v.
inline BrokenNorms analytic_minus_dg(const AnalyticFunction& u, const Triangulation& mesh, const Eigen::VectorXd& dg,
                                     int degree = 12) {
  const TriangleRule rule = triangle_rule(degree);
  BrokenNorms out;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry geo = mesh.geometry(t);
    const double h4 = std::pow(mesh.diameter(t), 4);
    for (int q = 0; q < rule.size(); ++q) {
      const Jet2d e = u(geo.point(rule.barycentric[q])) - p2::evaluate(geo, dg.segment<6>(6 * t), rule.barycentric[q]);
      out.energy2 += geo.area * rule.weights[q] * e.hessian.squaredNorm();
      out.scaled_l2_2 += geo.area * rule.weights[q] * e.value * e.value / h4;
    }
  }
  return out;
}

/// sum_T ||D^2 (v - w)||^2 for DgP2 nodal v and an HCT function w, exact per sub-triangle.
inline double dg_minus_hct_energy2(const Eigen::VectorXd& dg, const DiscreteFunction& hct) {
  const Triangulation& mesh = hct.mesh();
  const TriangleRule rule = triangle_rule(4);
  double sum = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const HctElement& el = hct.space->hct_element(t);
    const HctElement::Dofs dofs = hct_local_dofs(hct, t);
    const TriangleGeometry geo = mesh.geometry(t);
    for (int s = 0; s < 3; ++s) {
      const TriangleGeometry sub = el.sub_geometry(s);
      for (int q = 0; q < rule.size(); ++q) {
        const Point x = sub.point(rule.barycentric[q]);
        const Jet2d a = p2::evaluate(geo, dg.segment<6>(6 * t), geo.barycentric(x));
        const Jet2d b = el.evaluate(s, dofs, x);
        sum += sub.area * rule.weights[q] * (a.hessian - b.hessian).squaredNorm();
      }
    }
  }
  return sum;
}

}  // namespace biharm::testing
