#include "biharm/interp.hpp"

#include "biharm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace biharm {

PiecewiseJet piecewise(const AnalyticFunction& f) {
  return [jet = f.jet](Index, const Point& x) { return jet(x); };
}

PiecewiseJet piecewise(const DiscreteFunction& f) {
  return [f](Index t, const Point& x) {
    const Eigen::Vector3d lambda = f.mesh().geometry(t).barycentric(x);
    return evaluate(f, t, lambda.cwiseMax(0.0) / lambda.cwiseMax(0.0).sum());
  };
}

namespace {

/// Mean over edge e of the derivative of f|_t along the global edge normal.
double edge_mean_normal_derivative(const PiecewiseJet& f, const Triangulation& mesh, Index e, Index t,
                                   const IntervalRule<double>& rule) {
  const Edge& edge = mesh.edge(e);
  const Point a = mesh.vertex(edge.vertices[0]);
  const Point b = mesh.vertex(edge.vertices[1]);
  double mean = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    mean += rule.weights[q] * f(t, a + rule.points[q] * (b - a)).gradient.dot(edge.normal);
  }
  return mean;
}

int exact_edge_points(SpaceTag tag) { return tag == SpaceTag::Hct ? 2 : 1; }

}  // namespace

InterpolationReport compare_dofs(const DiscreteFunction& expected, const DiscreteFunction& actual) {
  if (expected.tag() != actual.tag() || expected.coefficients.size() != actual.coefficients.size()) {
    throw Error("compare_dofs: functions live in different spaces");
  }
  InterpolationReport report;
  report.input = expected.tag();
  report.output = actual.tag();
  report.residuals.resize(expected.coefficients.size());
  for (Index i = 0; i < expected.coefficients.size(); ++i) {
    report.residuals[i] = std::abs(expected.coefficients(i) - actual.coefficients(i));
    report.max_residual = std::max(report.max_residual, report.residuals[i]);
  }
  return report;
}

DiscreteFunction morley_interp_local(const PiecewiseJet& f, SpacePtr dg_space, int edge_points) {
  if (dg_space->tag() != SpaceTag::DgP2) throw Error("morley_interp_local: target must be DgP2");
  const Triangulation& mesh = dg_space->mesh();
  const auto rule = gauss_legendre<double>(edge_points);
  DiscreteFunction out(dg_space);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry geo = mesh.geometry(t);
    Eigen::Matrix<double, 6, 1> dofs;
    for (int i = 0; i < 3; ++i) {
      dofs(i) = f(t, geo.vertices[i]).value;
      const Index e = mesh.triangle_edges(t)[i];
      dofs(3 + i) = mesh.edge_sign(t, i) * edge_mean_normal_derivative(f, mesh, e, t, rule);
    }
    out.coefficients.segment<6>(6 * t) = morley_local_basis(geo) * dofs;
  }
  return out;
}

DiscreteFunction morley_interp_avg(const PiecewiseJet& f, SpacePtr morley_space, int edge_points) {
  if (morley_space->tag() != SpaceTag::Morley) throw Error("morley_interp_avg: target must be Morley");
  const Triangulation& mesh = morley_space->mesh();
  const DofMap& dofs = morley_space->dofs();
  const auto rule = gauss_legendre<double>(edge_points);
  DiscreteFunction out(morley_space);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (dofs.vertex_dofs[v] < 0) continue;
    const auto patch = mesh.vertex_patch(v);
    double sum = 0.0;
    for (Index t : patch) sum += f(t, mesh.vertex(v)).value;
    out.coefficients(dofs.vertex_dofs[v]) = sum / static_cast<double>(patch.size());
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (dofs.edge_dofs[e] < 0) continue;
    const Edge& edge = mesh.edge(e);
    out.coefficients(dofs.edge_dofs[e]) =
        0.5 * (edge_mean_normal_derivative(f, mesh, e, edge.plus, rule) +
               edge_mean_normal_derivative(f, mesh, e, edge.minus, rule));
  }
  return out;
}

DiscreteFunction morley_interp_avg(const AnalyticFunction& f, SpacePtr morley_space) {
  return morley_interp_avg(piecewise(f), std::move(morley_space), kAnalyticEdgePoints);
}

DiscreteFunction morley_interp_avg(const DiscreteFunction& v, SpacePtr morley_space) {
  if (&v.mesh() != &morley_space->mesh()) throw Error("morley_interp_avg: meshes differ");
  return morley_interp_avg(piecewise(v), std::move(morley_space), exact_edge_points(v.tag()));
}

DiscreteFunction companion(const DiscreteFunction& v_morley, SpacePtr hct_space) {
  if (v_morley.tag() != SpaceTag::Morley || hct_space->tag() != SpaceTag::Hct) {
    throw Error("companion: expects a Morley function and an Hct target");
  }
  const Triangulation& mesh = hct_space->mesh();
  const DofMap& mdofs = v_morley.space->dofs();
  const DofMap& hdofs = hct_space->dofs();
  DiscreteFunction out(hct_space);

  std::vector<Point> gradient(mesh.num_vertices(), Point::Zero());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Index first = hdofs.vertex_dofs[v];
    if (first < 0) continue;
    const auto patch = mesh.vertex_patch(v);
    for (Index t : patch) {
      Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
      lambda(mesh.local_vertex(t, v)) = 1.0;
      gradient[v] += evaluate(v_morley, t, lambda, 1).gradient;
    }
    gradient[v] /= static_cast<double>(patch.size());
    out.coefficients(first) = v_morley.coefficients(mdofs.vertex_dofs[v]);
    out.coefficients(first + 1) = gradient[v].x();
    out.coefficients(first + 2) = gradient[v].y();
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (hdofs.edge_dofs[e] < 0) continue;
    // The normal derivative of a cubic is quadratic along E; Simpson's rule
    // fixes its midpoint value from the target mean and the endpoint gradients.
    const Edge& edge = mesh.edge(e);
    const double mean = v_morley.coefficients(mdofs.edge_dofs[e]);
    const double qa = gradient[edge.vertices[0]].dot(edge.normal);
    const double qb = gradient[edge.vertices[1]].dot(edge.normal);
    out.coefficients(hdofs.edge_dofs[e]) = (6.0 * mean - qa - qb) / 4.0;
  }
  return out;
}

DiscreteFunction transfer_ic(const DiscreteFunction& v_morley, SpacePtr lagrange_space) {
  if (v_morley.tag() != SpaceTag::Morley || lagrange_space->tag() != SpaceTag::LagrangeP2) {
    throw Error("transfer_ic: expects a Morley function and a LagrangeP2 target");
  }
  const Triangulation& mesh = lagrange_space->mesh();
  const DofMap& mdofs = v_morley.space->dofs();
  const DofMap& ldofs = lagrange_space->dofs();
  DiscreteFunction out(lagrange_space);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (ldofs.vertex_dofs[v] >= 0) out.coefficients(ldofs.vertex_dofs[v]) = v_morley.coefficients(mdofs.vertex_dofs[v]);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (ldofs.edge_dofs[e] < 0) continue;
    const Edge& edge = mesh.edge(e);
    double sum = 0.0;
    for (auto [t, i] : {std::pair{edge.plus, edge.plus_local}, std::pair{edge.minus, edge.minus_local}}) {
      Eigen::Vector3d mid = Eigen::Vector3d::Constant(0.5);
      mid(i) = 0.0;
      sum += evaluate(v_morley, t, mid, 0).value;
    }
    out.coefficients(ldofs.edge_dofs[e]) = 0.5 * sum;
  }
  return out;
}

namespace {

SparseMatrix dg_morley_interp_matrix(const Triangulation& mesh, const FiniteElementSpace& morley) {
  const DofMap& dofs = morley.dofs();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (dofs.vertex_dofs[v] < 0) continue;
    const auto patch = mesh.vertex_patch(v);
    const double w = 1.0 / static_cast<double>(patch.size());
    for (Index t : patch) triplets.emplace_back(dofs.vertex_dofs[v], DofMap::cell_dof(t, mesh.local_vertex(t, v)), w);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (dofs.edge_dofs[e] < 0) continue;
    const Edge& edge = mesh.edge(e);
    for (auto [t, i] : {std::pair{edge.plus, edge.plus_local}, std::pair{edge.minus, edge.minus_local}}) {
      Eigen::Vector3d mid = Eigen::Vector3d::Constant(0.5);
      mid(i) = 0.0;
      const Eigen::Matrix<double, 6, 1> dn = p2::basis_gradients(mesh.geometry(t), mid) * edge.normal;
      for (int k = 0; k < 6; ++k) triplets.emplace_back(dofs.edge_dofs[e], DofMap::cell_dof(t, k), 0.5 * dn(k));
    }
  }
  SparseMatrix m(morley.dimension(), 6 * mesh.num_triangles());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix hct_morley_interp_matrix(const FiniteElementSpace& hct, const FiniteElementSpace& morley) {
  const Triangulation& mesh = morley.mesh();
  const DofMap& mdofs = morley.dofs();
  const DofMap& hdofs = hct.dofs();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (mdofs.vertex_dofs[v] >= 0) triplets.emplace_back(mdofs.vertex_dofs[v], hdofs.vertex_dofs[v], 1.0);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mdofs.edge_dofs[e] < 0) continue;
    // Simpson's rule is exact for the quadratic normal derivative of a C1 cubic trace.
    const Edge& edge = mesh.edge(e);
    const Index row = mdofs.edge_dofs[e];
    triplets.emplace_back(row, hdofs.edge_dofs[e], 4.0 / 6.0);
    for (Index v : edge.vertices) {
      const Index first = hdofs.vertex_dofs[v];
      if (first < 0) continue;
      triplets.emplace_back(row, first + 1, edge.normal.x() / 6.0);
      triplets.emplace_back(row, first + 2, edge.normal.y() / 6.0);
    }
  }
  SparseMatrix m(morley.dimension(), hct.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

SparseMatrix morley_interp_matrix(const FiniteElementSpace& source, const FiniteElementSpace& morley) {
  if (morley.tag() != SpaceTag::Morley) throw Error("morley_interp_matrix: target must be Morley");
  if (&source.mesh() != &morley.mesh()) throw Error("morley_interp_matrix: meshes differ");
  if (source.tag() == SpaceTag::Hct) return hct_morley_interp_matrix(source, morley);
  SparseMatrix dg = dg_morley_interp_matrix(morley.mesh(), morley);
  if (source.tag() == SpaceTag::DgP2) return dg;
  return dg * source.dg_embedding();
}

SparseMatrix companion_matrix(const FiniteElementSpace& morley, const FiniteElementSpace& hct) {
  if (morley.tag() != SpaceTag::Morley || hct.tag() != SpaceTag::Hct) {
    throw Error("companion_matrix: expects Morley and Hct spaces");
  }
  const Triangulation& mesh = morley.mesh();
  const DofMap& mdofs = morley.dofs();
  const DofMap& hdofs = hct.dofs();

  // Patch-averaged vertex gradients as rows (2v, 2v+1) over DgP2, then over Morley.
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (hdofs.vertex_dofs[v] < 0) continue;
    const auto patch = mesh.vertex_patch(v);
    const double w = 1.0 / static_cast<double>(patch.size());
    for (Index t : patch) {
      Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
      lambda(mesh.local_vertex(t, v)) = 1.0;
      const auto grads = p2::basis_gradients(mesh.geometry(t), lambda);
      for (int k = 0; k < 6; ++k) {
        triplets.emplace_back(2 * v, DofMap::cell_dof(t, k), w * grads(k, 0));
        triplets.emplace_back(2 * v + 1, DofMap::cell_dof(t, k), w * grads(k, 1));
      }
    }
  }
  SparseMatrix grad_dg(2 * mesh.num_vertices(), 6 * mesh.num_triangles());
  grad_dg.setFromTriplets(triplets.begin(), triplets.end());
  const Eigen::SparseMatrix<double, Eigen::RowMajor> grad = grad_dg * morley.dg_embedding();

  triplets.clear();
  auto add_row = [&](Index target, Index source_row, double scale) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(grad, source_row); it; ++it) {
      triplets.emplace_back(target, it.col(), scale * it.value());
    }
  };
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Index first = hdofs.vertex_dofs[v];
    if (first < 0) continue;
    triplets.emplace_back(first, mdofs.vertex_dofs[v], 1.0);
    add_row(first + 1, 2 * v, 1.0);
    add_row(first + 2, 2 * v + 1, 1.0);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Index row = hdofs.edge_dofs[e];
    if (row < 0) continue;
    const Edge& edge = mesh.edge(e);
    triplets.emplace_back(row, mdofs.edge_dofs[e], 1.5);
    for (Index v : edge.vertices) {
      if (hdofs.vertex_dofs[v] < 0) continue;
      add_row(row, 2 * v, -0.25 * edge.normal.x());
      add_row(row, 2 * v + 1, -0.25 * edge.normal.y());
    }
  }
  SparseMatrix j(hct.dimension(), morley.dimension());
  j.setFromTriplets(triplets.begin(), triplets.end());
  return j;
}

Smoother::Smoother(std::shared_ptr<const Triangulation> mesh)
    : morley_(make_space(mesh, SpaceTag::Morley)),
      hct_(make_space(mesh, SpaceTag::Hct)),
      companion_(companion_matrix(*morley_, *hct_)) {}

SparseMatrix Smoother::matrix(const FiniteElementSpace& source) const {
  if (source.tag() == SpaceTag::Morley) return companion_;
  return companion_ * morley_interp_matrix(source, *morley_);
}

DiscreteFunction Smoother::apply(const DiscreteFunction& v) const {
  return smoother(v, morley_, hct_);
}

DiscreteFunction smoother(const DiscreteFunction& v, SpacePtr morley_space, SpacePtr hct_space) {
  return companion(morley_interp_avg(v, std::move(morley_space)), std::move(hct_space));
}

}  // namespace biharm
