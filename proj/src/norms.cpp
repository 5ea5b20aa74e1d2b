#include "biharm/norms.hpp"

#include "biharm/quadrature.hpp"

#include <cmath>
#include <limits>

namespace biharm {

namespace {

double frobenius2(const Eigen::Matrix2d& m) { return m.squaredNorm(); }

Eigen::Matrix2d hessian_of(const Eigen::Vector3d& h) {
  Eigen::Matrix2d m;
  m << h(0), h(1), h(1), h(2);
  return m;
}

struct Sums {
  double energy = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

/// Integrals of (u - u*)^2 etc. over the HCT sub-triangles of every triangle.
template <typename ExactFn>
Sums hct_error_sums(const DiscreteFunction& ustar, ExactFn&& exact, int quad_order) {
  const FiniteElementSpace& hct = *ustar.space;
  const Triangulation& mesh = hct.mesh();
  const TriangleRule rule = triangle_rule(quad_order);
  Sums sums;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const HctElement& element = hct.hct_element(t);
    const HctElement::Dofs dofs = hct_local_dofs(ustar, t);
    for (int s = 0; s < 3; ++s) {
      const TriangleGeometry sub = element.sub_geometry(s);
      for (int q = 0; q < rule.size(); ++q) {
        const Point x = sub.point(rule.barycentric[q]);
        const Jet2d e = exact(t, x) - element.evaluate(s, dofs, x);
        const double w = sub.area * rule.weights[q];
        sums.l2 += w * e.value * e.value;
        sums.h1 += w * e.gradient.squaredNorm();
        sums.energy += w * frobenius2(e.hessian);
      }
    }
  }
  return sums;
}

}  // namespace

double scheme_penalty(const Triangulation& mesh, const SchemeConfig& config, const Eigen::VectorXd& dg) {
  switch (config.scheme) {
    case SchemeTag::Morley:
      return 0.0;
    case SchemeTag::Wopsip:
      return cp_energy(mesh, dg);
    default:
      break;
  }
  // The penalty forms act on DgP2 through their traces; a non-owning alias suffices.
  const std::shared_ptr<const Triangulation> alias(std::shared_ptr<const Triangulation>(), &mesh);
  const FiniteElementSpace space(alias, SpaceTag::DgP2);
  const SparseMatrix c = config.scheme == SchemeTag::Dg ? assemble_cdg(space, config.sigma1, config.sigma2)
                                                        : assemble_cip(space, config.sigma_ip);
  return dg.dot(c * dg);
}

double pi0_hessian_deviation(const AnalyticFunction& u, const Triangulation& mesh, int quad_order) {
  const TriangleRule rule = triangle_rule(quad_order);
  double sum = 0.0;
  std::vector<Eigen::Matrix2d> values(rule.size());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry geo = mesh.geometry(t);
    Eigen::Matrix2d mean = Eigen::Matrix2d::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      values[q] = u(geo.point(rule.barycentric[q])).hessian;
      mean += rule.weights[q] * values[q];
    }
    for (int q = 0; q < rule.size(); ++q) sum += geo.area * rule.weights[q] * frobenius2(values[q] - mean);
  }
  return std::sqrt(sum);
}

double scaled_interpolant_energy(const AnalyticFunction& u, std::shared_ptr<const Triangulation> mesh) {
  const Triangulation& m = *mesh;
  const DiscreteFunction im = morley_interp_avg(u, make_space(std::move(mesh), SpaceTag::Morley));
  const Eigen::VectorXd dg = to_dg(im);
  double sum = 0.0;
  for (Index t = 0; t < m.num_triangles(); ++t) {
    const Eigen::Vector3d h = p2::basis_hessians(m.geometry(t)) * dg.segment<6>(6 * t);
    const double ht = m.diameter(t);
    sum += ht * ht * m.area(t) * frobenius2(hessian_of(h));
  }
  return std::sqrt(sum);
}

ErrorReport compute_errors(const AnalyticFunction& u, const Solution& sol, int quad_order) {
  if (quad_order < 4) throw ConfigError("error quadrature order must be at least 4");
  const Triangulation& mesh = sol.uh.mesh();
  const Eigen::VectorXd dg = to_dg(sol.uh);
  const TriangleRule rule = triangle_rule(quad_order);

  ErrorReport r;
  r.quad_order = quad_order;
  double energy = 0.0, l2 = 0.0, h1 = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry geo = mesh.geometry(t);
    const Eigen::Matrix<double, 6, 1> nodal = dg.segment<6>(6 * t);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector3d& lambda = rule.barycentric[q];
      const Jet2d e = u(geo.point(lambda)) - p2::evaluate(geo, nodal, lambda);
      const double w = geo.area * rule.weights[q];
      energy += w * frobenius2(e.hessian);
      l2 += w * e.value * e.value;
      h1 += w * e.gradient.squaredNorm();
    }
  }
  // u is clamped and smooth, so all jumps of u - u_h are those of u_h.
  const double jump2 = std::pow(jump_seminorm(mesh, dg), 2);
  r.energy_pw = std::sqrt(energy);
  r.jump = std::sqrt(jump2);
  r.norm_h = std::sqrt(energy + jump2);
  r.norm_scheme = sol.config.scheme == SchemeTag::Morley
                      ? r.norm_h
                      : std::sqrt(energy + scheme_penalty(mesh, sol.config, dg));
  r.l2 = std::sqrt(l2);
  r.h1_pw = std::sqrt(l2 + h1);

  const Sums star = hct_error_sums(sol.ustar, [&](Index, const Point& x) { return u(x); }, quad_order);
  r.h1_star = std::sqrt(star.l2 + star.h1);
  r.energy_star = std::sqrt(star.energy);
  r.best_approx = pi0_hessian_deviation(u, mesh, quad_order);
  return r;
}

std::vector<Index> coarse_ancestors(const std::vector<std::shared_ptr<const Triangulation>>& hierarchy) {
  if (hierarchy.empty()) throw Error("coarse_ancestors: empty hierarchy");
  const Triangulation& fine = *hierarchy.back();
  std::vector<Index> ancestor(fine.num_triangles());
  for (Index t = 0; t < fine.num_triangles(); ++t) ancestor[t] = t;
  for (std::size_t level = hierarchy.size() - 1; level > 0; --level) {
    const auto& parents = hierarchy[level]->parents();
    if (static_cast<Index>(parents.size()) != hierarchy[level]->num_triangles()) {
      throw Error("coarse_ancestors: mesh was not produced by refinement");
    }
    for (Index& a : ancestor) a = parents[a];
  }
  return ancestor;
}

Eigen::VectorXd prolong_dg(const Triangulation& coarse, const Eigen::VectorXd& dg, const Triangulation& fine,
                           const std::vector<Index>& ancestor) {
  Eigen::VectorXd out(6 * fine.num_triangles());
  for (Index t = 0; t < fine.num_triangles(); ++t) {
    const Index parent = ancestor[t];
    const TriangleGeometry cgeo = coarse.geometry(parent);
    const TriangleGeometry fgeo = fine.geometry(t);
    const Eigen::Matrix<double, 6, 1> nodal = dg.segment<6>(6 * parent);
    out.segment<6>(6 * t) = p2::interpolate(fgeo, [&](const Point& x) {
      return p2::basis_values(cgeo.barycentric(x)).dot(nodal);
    });
  }
  return out;
}

ErrorReport compute_reference_errors(const Solution& reference, const Solution& coarse,
                                     const std::vector<Index>& ancestor, int quad_order) {
  if (quad_order < 4) throw ConfigError("error quadrature order must be at least 4");
  const Triangulation& fine = reference.uh.mesh();
  const Triangulation& cmesh = coarse.uh.mesh();
  if (static_cast<Index>(ancestor.size()) != fine.num_triangles()) {
    throw Error("compute_reference_errors: ancestor map does not match the reference mesh");
  }
  const Eigen::VectorXd diff = to_dg(reference.uh) - prolong_dg(cmesh, to_dg(coarse.uh), fine, ancestor);

  ErrorReport r;
  r.quad_order = quad_order;
  const TriangleRule rule = triangle_rule(quad_order);
  double l2 = 0.0, h1 = 0.0;
  for (Index t = 0; t < fine.num_triangles(); ++t) {
    const TriangleGeometry geo = fine.geometry(t);
    const Eigen::Matrix<double, 6, 1> nodal = diff.segment<6>(6 * t);
    for (int q = 0; q < rule.size(); ++q) {
      const Jet2d e = p2::evaluate(geo, nodal, rule.barycentric[q]);
      const double w = geo.area * rule.weights[q];
      l2 += w * e.value * e.value;
      h1 += w * e.gradient.squaredNorm();
    }
  }
  r.energy_pw = energy_norm_pw(fine, diff);
  r.jump = jump_seminorm(fine, diff);
  r.norm_h = std::hypot(r.energy_pw, r.jump);
  r.norm_scheme = coarse.config.scheme == SchemeTag::Morley
                      ? r.norm_h
                      : std::sqrt(r.energy_pw * r.energy_pw + scheme_penalty(fine, coarse.config, diff));
  r.l2 = std::sqrt(l2);
  r.h1_pw = std::sqrt(l2 + h1);

  // J I_M of the coarse solution evaluated at quadrature points of the fine HCT sub-triangles.
  const FiniteElementSpace& chct = *coarse.ustar.space;
  const Sums star = hct_error_sums(
      reference.ustar,
      [&](Index t, const Point& x) {
        const Index parent = ancestor[t];
        const HctElement& element = chct.hct_element(parent);
        return element.evaluate(hct_local_dofs(coarse.ustar, parent), x);
      },
      quad_order);
  // hct_error_sums integrates exact - discrete; the sign is irrelevant for the norms.
  r.h1_star = std::sqrt(star.l2 + star.h1);
  r.energy_star = std::sqrt(star.energy);
  r.best_approx = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace biharm
