#include "biharm/rhs.hpp"

#include "biharm/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace biharm {

int LoadSpec::effective_order() const {
  if (quad_order < 3) throw ConfigError("load quadrature order must be at least 3");
  if (density && density->degree) return 3 + *density->degree;
  return quad_order;
}

LoadSpec manufactured_load(const AnalyticFunction& u, int quad_order) {
  if (!u.bilaplacian) throw ConfigError("function '" + u.name + "' has no bilaplacian");
  LoadSpec load;
  load.density = Density{u.bilaplacian, std::nullopt, "bilaplacian(" + u.name + ")"};
  load.quad_order = quad_order;
  return load;
}

PointLocation locate_point(const Triangulation& mesh, const Point& x) {
  const double scale = std::max(1.0, x.norm());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if ((mesh.vertex(v) - x).norm() <= kSnapTolerance * scale) {
      const Index t = mesh.vertex_patch(v).front();
      PointLocation loc{t, Eigen::Vector3d::Zero(), v};
      loc.lambda(mesh.local_vertex(t, v)) = 1.0;
      return loc;
    }
  }
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector3d lambda = mesh.geometry(t).barycentric(x);
    if (lambda.minCoeff() >= -kSnapTolerance) {
      return {t, lambda.cwiseMax(0.0) / lambda.cwiseMax(0.0).sum(), -1};
    }
  }
  std::ostringstream msg;
  msg << "point load at (" << x.x() << ", " << x.y() << ") lies outside the domain";
  throw ConfigError(msg.str());
}

int snapped_point_loads(const Triangulation& mesh, const LoadSpec& load) {
  int count = 0;
  for (const PointLoad& p : load.points) count += locate_point(mesh, p.location).vertex >= 0 ? 1 : 0;
  return count;
}

Eigen::VectorXd hct_load_vector(const FiniteElementSpace& hct, const LoadSpec& load) {
  if (hct.tag() != SpaceTag::Hct) throw Error("hct_load_vector: expects an Hct space");
  const Triangulation& mesh = hct.mesh();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(hct.dimension());

  if (load.density) {
    const TriangleRule rule = triangle_rule(load.effective_order());
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const HctElement& element = hct.hct_element(t);
      const auto indices = hct.local_indices(t);
      const auto signs = hct.local_signs(t);
      HctElement::Dofs local = HctElement::Dofs::Zero();
      for (int s = 0; s < 3; ++s) {
        const TriangleGeometry sub = element.sub_geometry(s);
        for (int q = 0; q < rule.size(); ++q) {
          const Point x = sub.point(rule.barycentric[q]);
          local += (sub.area * rule.weights[q] * load.density->f(x)) * element.basis_values(s, x);
        }
      }
      for (int k = 0; k < HctElement::kDofs; ++k) {
        if (indices[k] >= 0) b(indices[k]) += signs[k] * local(k);
      }
    }
  } else {
    load.effective_order();
  }

  for (const PointLoad& p : load.points) {
    const PointLocation loc = locate_point(mesh, p.location);
    if (loc.vertex >= 0) {
      // Every HCT basis function but the vertex-value one vanishes at a vertex.
      const Index dof = hct.dofs().vertex_dofs[loc.vertex];
      if (dof >= 0) b(dof) += p.weight;
      continue;
    }
    const HctElement& element = hct.hct_element(loc.triangle);
    const Point x = mesh.geometry(loc.triangle).point(loc.lambda);
    const HctElement::Dofs values = element.basis_values(element.sub_triangle(x), x);
    const auto indices = hct.local_indices(loc.triangle);
    const auto signs = hct.local_signs(loc.triangle);
    for (int k = 0; k < HctElement::kDofs; ++k) {
      if (indices[k] >= 0) b(indices[k]) += p.weight * signs[k] * values(k);
    }
  }
  return b;
}

Eigen::VectorXd smoothed_load_vector(const FiniteElementSpace& space, const Smoother& smoother,
                                     const LoadSpec& load) {
  if (space.tag() == SpaceTag::Hct) throw Error("smoothed_load_vector: source space must be P2-type");
  if (&space.mesh() != &smoother.morley_space()->mesh()) throw Error("smoothed_load_vector: meshes differ");
  const Eigen::VectorXd f = hct_load_vector(*smoother.hct_space(), load);
  return smoother.matrix(space).transpose() * f;
}

Eigen::VectorXd plain_load_vector(const FiniteElementSpace& space, const LoadSpec& load) {
  if (!load.points.empty()) {
    throw ConfigError("point loads are not square integrable; use the smoothed load vector");
  }
  if (space.tag() == SpaceTag::Hct) throw Error("plain_load_vector: source space must be P2-type");
  const Triangulation& mesh = space.mesh();
  Eigen::VectorXd dg = Eigen::VectorXd::Zero(6 * mesh.num_triangles());
  if (load.density) {
    const TriangleRule rule = triangle_rule(load.effective_order());
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const TriangleGeometry geo = mesh.geometry(t);
      Eigen::Matrix<double, 6, 1> local = Eigen::Matrix<double, 6, 1>::Zero();
      for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector3d& lambda = rule.barycentric[q];
        local += (geo.area * rule.weights[q] * load.density->f(geo.point(lambda))) * p2::basis_values(lambda);
      }
      dg.segment<6>(6 * t) = local;
    }
  }
  if (space.tag() == SpaceTag::DgP2) return dg;
  return space.dg_embedding().transpose() * dg;
}

double apply_load(const LoadSpec& load, const DiscreteFunction& v_hct) {
  return hct_load_vector(*v_hct.space, load).dot(v_hct.coefficients);
}

}  // namespace biharm
