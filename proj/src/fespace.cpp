#include "biharm/fespace.hpp"

#include <utility>

namespace biharm {

std::string_view to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::Morley: return "Morley";
    case SpaceTag::DgP2: return "DgP2";
    case SpaceTag::LagrangeP2: return "LagrangeP2";
    case SpaceTag::Hct: return "Hct";
  }
  return "?";
}

DofMap build_dof_map(const Triangulation& mesh, SpaceTag tag) {
  DofMap map;
  map.tag = tag;
  map.vertex_dofs.assign(mesh.num_vertices(), -1);
  map.edge_dofs.assign(mesh.num_edges(), -1);
  if (tag == SpaceTag::DgP2) {
    map.num_free = 6 * mesh.num_triangles();
    return map;
  }
  const int per_vertex = tag == SpaceTag::Hct ? 3 : 1;
  Index next = 0;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) {
      map.num_constrained += per_vertex;
    } else {
      map.vertex_dofs[v] = next;
      next += per_vertex;
    }
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).is_boundary()) {
      ++map.num_constrained;
    } else {
      map.edge_dofs[e] = next++;
    }
  }
  map.num_free = next;
  return map;
}

namespace p2 {

namespace {

/// Derivatives of the six shape functions with respect to the barycentric coordinates.
Eigen::Matrix<double, 6, 3> barycentric_derivatives(const Eigen::Vector3d& l) {
  Eigen::Matrix<double, 6, 3> d = Eigen::Matrix<double, 6, 3>::Zero();
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    d(i, i) = 4.0 * l(i) - 1.0;
    d(3 + i, j) = 4.0 * l(k);
    d(3 + i, k) = 4.0 * l(j);
  }
  return d;
}

}  // namespace

Eigen::Matrix<double, 6, 1> basis_values(const Eigen::Vector3d& l) {
  Eigen::Matrix<double, 6, 1> v;
  for (int i = 0; i < 3; ++i) {
    v(i) = l(i) * (2.0 * l(i) - 1.0);
    v(3 + i) = 4.0 * l((i + 1) % 3) * l((i + 2) % 3);
  }
  return v;
}

Eigen::Matrix<double, 6, 2> basis_gradients(const TriangleGeometry& geo, const Eigen::Vector3d& lambda) {
  return barycentric_derivatives(lambda) * geo.grad_lambda;
}

Eigen::Matrix<double, 3, 6> basis_hessians(const TriangleGeometry& geo) {
  Eigen::Matrix<double, 3, 6> h;
  const auto& g = geo.grad_lambda;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    h(0, i) = 4.0 * g(i, 0) * g(i, 0);
    h(1, i) = 4.0 * g(i, 0) * g(i, 1);
    h(2, i) = 4.0 * g(i, 1) * g(i, 1);
    h(0, 3 + i) = 8.0 * g(j, 0) * g(k, 0);
    h(1, 3 + i) = 4.0 * (g(j, 0) * g(k, 1) + g(k, 0) * g(j, 1));
    h(2, 3 + i) = 8.0 * g(j, 1) * g(k, 1);
  }
  return h;
}

Jet2d evaluate(const TriangleGeometry& geo, const Eigen::Matrix<double, 6, 1>& nodal,
               const Eigen::Vector3d& lambda) {
  Jet2d jet;
  jet.value = basis_values(lambda).dot(nodal);
  jet.gradient = basis_gradients(geo, lambda).transpose() * nodal;
  const Eigen::Vector3d h = basis_hessians(geo) * nodal;
  jet.hessian << h(0), h(1), h(1), h(2);
  return jet;
}

}  // namespace p2

namespace {

Eigen::Matrix<double, 6, 1> morley_to_nodal(const TriangleGeometry& geo,
                                            const Eigen::Matrix<double, 6, 1>& dofs) {
  // For a quadratic, the outward normal derivative at mid(E_i) is
  //   m_i = -v_i g_i + v_j g_j + v_k g_k + 2 g_i (w_j + w_k - w_i),
  // with g_l = grad(lambda_l) . n_i and w the midpoint values. Solve for w.
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const Point n = geo.outward_normal(i);
    const double gi = geo.grad_lambda.row(i).dot(n);
    const double gj = geo.grad_lambda.row(j).dot(n);
    const double gk = geo.grad_lambda.row(k).dot(n);
    r(i) = (dofs(3 + i) + dofs(i) * gi - dofs(j) * gj - dofs(k) * gk) / (2.0 * gi);
  }
  const double sum = r.sum();
  Eigen::Matrix<double, 6, 1> nodal;
  nodal.head<3>() = dofs.head<3>();
  for (int i = 0; i < 3; ++i) nodal(3 + i) = 0.5 * (sum - r(i));
  return nodal;
}

}  // namespace

Eigen::Matrix<double, 6, 6> morley_local_basis(const TriangleGeometry& geo) {
  Eigen::Matrix<double, 6, 6> basis;
  for (int k = 0; k < 6; ++k) {
    basis.col(k) = morley_to_nodal(geo, Eigen::Matrix<double, 6, 1>::Unit(k));
  }
  return basis;
}

Eigen::Matrix<double, 6, 1> morley_local_dofs(const TriangleGeometry& geo,
                                              const Eigen::Matrix<double, 6, 1>& nodal) {
  Eigen::Matrix<double, 6, 1> dofs;
  dofs.head<3>() = nodal.head<3>();
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d mid = Eigen::Vector3d::Constant(0.5);
    mid(i) = 0.0;
    dofs(3 + i) = p2::evaluate(geo, nodal, mid).gradient.dot(geo.outward_normal(i));
  }
  return dofs;
}

FiniteElementSpace::FiniteElementSpace(std::shared_ptr<const Triangulation> mesh, SpaceTag tag)
    : mesh_(std::move(mesh)), dofs_(build_dof_map(*mesh_, tag)) {
  const Index nt = mesh_->num_triangles();
  if (tag == SpaceTag::Hct) {
    hct_.reserve(nt);
    for (Index t = 0; t < nt; ++t) hct_.emplace_back(mesh_->geometry(t));
    return;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(36 * nt);
  for (Index t = 0; t < nt; ++t) {
    const auto idx = local_indices(t);
    const auto map = local_nodal_map(t);
    for (int c = 0; c < 6; ++c) {
      if (idx[c] < 0) continue;
      for (int r = 0; r < 6; ++r) {
        if (map(r, c) != 0.0) triplets.emplace_back(DofMap::cell_dof(t, r), idx[c], map(r, c));
      }
    }
  }
  embedding_.resize(6 * nt, dofs_.num_free);
  embedding_.setFromTriplets(triplets.begin(), triplets.end());
}

std::vector<Index> FiniteElementSpace::local_indices(Index t) const {
  const auto& tri = mesh_->triangle(t);
  const auto& te = mesh_->triangle_edges(t);
  switch (tag()) {
    case SpaceTag::DgP2: {
      std::vector<Index> idx(6);
      for (int i = 0; i < 6; ++i) idx[i] = DofMap::cell_dof(t, i);
      return idx;
    }
    case SpaceTag::Morley:
    case SpaceTag::LagrangeP2:
      return {dofs_.vertex_dofs[tri[0]], dofs_.vertex_dofs[tri[1]], dofs_.vertex_dofs[tri[2]],
              dofs_.edge_dofs[te[0]],    dofs_.edge_dofs[te[1]],    dofs_.edge_dofs[te[2]]};
    case SpaceTag::Hct: {
      std::vector<Index> idx(12, -1);
      for (int i = 0; i < 3; ++i) {
        const Index first = dofs_.vertex_dofs[tri[i]];
        if (first >= 0) {
          for (int c = 0; c < 3; ++c) idx[3 * i + c] = first + c;
        }
        idx[9 + i] = dofs_.edge_dofs[te[i]];
      }
      return idx;
    }
  }
  return {};
}

std::vector<double> FiniteElementSpace::local_signs(Index t) const {
  if (tag() == SpaceTag::Morley) {
    return {1, 1, 1, double(mesh_->edge_sign(t, 0)), double(mesh_->edge_sign(t, 1)),
            double(mesh_->edge_sign(t, 2))};
  }
  if (tag() == SpaceTag::Hct) {
    std::vector<double> signs(12, 1.0);
    for (int i = 0; i < 3; ++i) signs[9 + i] = mesh_->edge_sign(t, i);
    return signs;
  }
  return std::vector<double>(6, 1.0);
}

Eigen::Matrix<double, 6, 6> FiniteElementSpace::local_nodal_map(Index t) const {
  switch (tag()) {
    case SpaceTag::DgP2:
    case SpaceTag::LagrangeP2:
      return Eigen::Matrix<double, 6, 6>::Identity();
    case SpaceTag::Morley: {
      Eigen::Matrix<double, 6, 6> map = morley_local_basis(mesh_->geometry(t));
      for (int i = 0; i < 3; ++i) map.col(3 + i) *= mesh_->edge_sign(t, i);
      return map;
    }
    case SpaceTag::Hct:
      break;
  }
  throw Error("local_nodal_map: Hct functions are not piecewise quadratic");
}

const SparseMatrix& FiniteElementSpace::dg_embedding() const {
  if (tag() == SpaceTag::Hct) throw Error("dg_embedding: Hct functions are not piecewise quadratic");
  return embedding_;
}

const HctElement& FiniteElementSpace::hct_element(Index t) const {
  if (tag() != SpaceTag::Hct) throw Error("hct_element: space is not Hct");
  return hct_[t];
}

SpacePtr make_space(std::shared_ptr<const Triangulation> mesh, SpaceTag tag) {
  return std::make_shared<const FiniteElementSpace>(std::move(mesh), tag);
}

DiscreteFunction::DiscreteFunction(SpacePtr s)
    : space(std::move(s)), coefficients(Eigen::VectorXd::Zero(space->dimension())) {}

DiscreteFunction::DiscreteFunction(SpacePtr s, Eigen::VectorXd c)
    : space(std::move(s)), coefficients(std::move(c)) {
  if (coefficients.size() != space->dimension()) {
    throw Error("DiscreteFunction: coefficient length " + std::to_string(coefficients.size()) +
                " does not match the " + std::string(to_string(space->tag())) + " dimension " +
                std::to_string(space->dimension()));
  }
}

Eigen::VectorXd to_dg(const DiscreteFunction& f) {
  return f.space->dg_embedding() * f.coefficients;
}

HctElement::Dofs hct_local_dofs(const DiscreteFunction& f, Index t) {
  const auto idx = f.space->local_indices(t);
  const auto signs = f.space->local_signs(t);
  HctElement::Dofs dofs;
  for (int k = 0; k < HctElement::kDofs; ++k) dofs(k) = idx[k] >= 0 ? signs[k] * f.coefficients(idx[k]) : 0.0;
  return dofs;
}

Jet2d evaluate(const DiscreteFunction& f, Index t, const Eigen::Vector3d& lambda, int order) {
  if (order < 0 || order > 2) throw Error("evaluate: derivative order must be 0, 1 or 2");
  if (lambda.minCoeff() < -1e-12 || std::abs(lambda.sum() - 1.0) > 1e-12) {
    throw Error("evaluate: point outside triangle " + std::to_string(t));
  }
  Jet2d jet;
  const TriangleGeometry geo = f.mesh().geometry(t);
  if (f.tag() == SpaceTag::Hct) {
    jet = f.space->hct_element(t).evaluate(hct_local_dofs(f, t), geo.point(lambda));
  } else {
    const auto idx = f.space->local_indices(t);
    Eigen::Matrix<double, 6, 1> local;
    for (int k = 0; k < 6; ++k) local(k) = idx[k] >= 0 ? f.coefficients(idx[k]) : 0.0;
    jet = p2::evaluate(geo, f.space->local_nodal_map(t) * local, lambda);
  }
  if (order < 2) jet.hessian.setZero();
  if (order < 1) jet.gradient.setZero();
  return jet;
}

}  // namespace biharm
