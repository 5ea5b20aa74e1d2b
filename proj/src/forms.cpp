#include "biharm/forms.hpp"

#include "biharm/quadrature.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

namespace biharm {

std::string_view to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::Morley: return "morley";
    case SchemeTag::Dg: return "dg";
    case SchemeTag::C0ip: return "c0ip";
    case SchemeTag::Wopsip: return "wopsip";
  }
  return "?";
}

SchemeTag scheme_from_string(std::string_view name) {
  for (SchemeTag tag : {SchemeTag::Morley, SchemeTag::Dg, SchemeTag::C0ip, SchemeTag::Wopsip}) {
    if (name == to_string(tag)) return tag;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected morley, dg, c0ip or wopsip)");
}

SpaceTag scheme_space(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::Morley: return SpaceTag::Morley;
    case SchemeTag::Dg: return SpaceTag::DgP2;
    case SchemeTag::C0ip: return SpaceTag::LagrangeP2;
    case SchemeTag::Wopsip: return SpaceTag::DgP2;
  }
  return SpaceTag::DgP2;
}

void SchemeConfig::validate() const {
  if (!(theta >= -1.0 && theta <= 1.0)) throw ConfigError("theta must lie in [-1, 1]");
  if (!(sigma1 > 0.0 && sigma2 > 0.0 && sigma_ip > 0.0)) throw ConfigError("penalty parameters must be positive");
  if (quad_order < 4) throw ConfigError("quadrature order must be at least 4");
}

bool SchemeConfig::symmetric() const {
  return scheme == SchemeTag::Morley || scheme == SchemeTag::Wopsip || theta == 1.0;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12x2 = Eigen::Matrix<double, 12, 2>;

/// Traces of the DgP2 basis functions of the (one or two) triangles adjacent
/// to an edge. Local slot 6s + k is shape function k on side s (0 = T+, 1 = T-).
class EdgeTrace {
 public:
  EdgeTrace(const Triangulation& mesh, Index e) : edge_(mesh.edge(e)) {
    a_ = mesh.vertex(edge_.vertices[0]);
    b_ = mesh.vertex(edge_.vertices[1]);
    sides_ = edge_.is_boundary() ? 1 : 2;
    const Index tris[2] = {edge_.plus, edge_.minus};
    for (int s = 0; s < sides_; ++s) {
      geo_.push_back(mesh.geometry(tris[s]));
      hess_[s] = p2::basis_hessians(geo_[s]);
      for (int k = 0; k < 6; ++k) dofs_[6 * s + k] = DofMap::cell_dof(tris[s], k);
    }
  }

  int size() const { return 6 * sides_; }
  Index dof(int slot) const { return dofs_[slot]; }
  double length() const { return edge_.length; }
  Point at(double s) const { return a_ + s * (b_ - a_); }

  /// [phi] at x.
  Vec12 jump_value(const Point& x) const {
    Vec12 r = Vec12::Zero();
    for (int s = 0; s < sides_; ++s) r.segment<6>(6 * s) = sign(s) * p2::basis_values(geo_[s].barycentric(x));
    return r;
  }

  /// [grad phi] at x.
  Mat12x2 jump_gradient(const Point& x) const {
    Mat12x2 r = Mat12x2::Zero();
    for (int s = 0; s < sides_; ++s) {
      r.middleRows<6>(6 * s) = sign(s) * p2::basis_gradients(geo_[s], geo_[s].barycentric(x));
    }
    return r;
  }

  Vec12 jump_normal(const Point& x) const { return jump_gradient(x) * edge_.normal; }

  /// <D^2 phi> nu_E (constant along the edge).
  Mat12x2 average_hessian_normal() const {
    Mat12x2 r = Mat12x2::Zero();
    const double w = sides_ == 2 ? 0.5 : 1.0;
    const Point& n = edge_.normal;
    for (int s = 0; s < sides_; ++s) {
      for (int k = 0; k < 6; ++k) {
        const auto h = hess_[s].col(k);
        r(6 * s + k, 0) = w * (h(0) * n.x() + h(1) * n.y());
        r(6 * s + k, 1) = w * (h(1) * n.x() + h(2) * n.y());
      }
    }
    return r;
  }

 private:
  double sign(int s) const { return s == 0 ? 1.0 : -1.0; }

  const Edge& edge_;
  Point a_, b_;
  int sides_ = 1;
  std::vector<TriangleGeometry> geo_;
  Eigen::Matrix<double, 3, 6> hess_[2];
  Index dofs_[12] = {};
};

void scatter(Triplets& out, const EdgeTrace& trace, const Eigen::Matrix<double, 12, 12>& local) {
  const int n = trace.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (local(i, j) != 0.0) out.emplace_back(trace.dof(i), trace.dof(j), local(i, j));
    }
  }
}

/// Assemble a sum of edge contributions on DgP2 and restrict to the space.
template <typename EdgeKernel>
SparseMatrix assemble_edges(const FiniteElementSpace& space, EdgeKernel&& kernel) {
  const Triangulation& mesh = space.mesh();
  Triplets triplets;
  triplets.reserve(144 * mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const EdgeTrace trace(mesh, e);
    Eigen::Matrix<double, 12, 12> local = Eigen::Matrix<double, 12, 12>::Zero();
    kernel(trace, local);
    scatter(triplets, trace, local);
  }
  const Index n = 6 * mesh.num_triangles();
  SparseMatrix dg(n, n);
  dg.setFromTriplets(triplets.begin(), triplets.end());
  if (space.tag() == SpaceTag::DgP2) return dg;
  const SparseMatrix& e = space.dg_embedding();
  return SparseMatrix(e.transpose() * dg * e);
}

}  // namespace

SparseMatrix assemble_apw(const FiniteElementSpace& space) {
  const Triangulation& mesh = space.mesh();
  Triplets triplets;
  triplets.reserve(36 * mesh.num_triangles());
  const Eigen::Vector3d frobenius(1.0, 2.0, 1.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Matrix<double, 3, 6> h = p2::basis_hessians(mesh.geometry(t));
    const Eigen::Matrix<double, 6, 6> local = mesh.area(t) * h.transpose() * frobenius.asDiagonal() * h;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) triplets.emplace_back(DofMap::cell_dof(t, i), DofMap::cell_dof(t, j), local(i, j));
    }
  }
  const Index n = 6 * mesh.num_triangles();
  SparseMatrix dg(n, n);
  dg.setFromTriplets(triplets.begin(), triplets.end());
  if (space.tag() == SpaceTag::DgP2) return dg;
  const SparseMatrix& e = space.dg_embedding();
  return SparseMatrix(e.transpose() * dg * e);
}

SparseMatrix assemble_jump_form(const FiniteElementSpace& space) {
  // [grad v] is affine and <D^2 w> constant along E: two Gauss points are exact.
  const auto rule = gauss_legendre<double>(2);
  return assemble_edges(space, [&](const EdgeTrace& trace, Eigen::Matrix<double, 12, 12>& local) {
    const Mat12x2 avg = trace.average_hessian_normal();
    for (int q = 0; q < rule.size(); ++q) {
      const Mat12x2 jump = trace.jump_gradient(trace.at(rule.points[q]));
      local.noalias() += rule.weights[q] * trace.length() * avg * jump.transpose();
    }
  });
}

SparseMatrix assemble_consistency(const FiniteElementSpace& space, double theta) {
  const SparseMatrix j = assemble_jump_form(space);
  const SparseMatrix jt = j.transpose();
  return SparseMatrix(-theta * j - jt);
}

SparseMatrix assemble_cdg(const FiniteElementSpace& space, double sigma1, double sigma2) {
  const auto rule = gauss_legendre<double>(3);
  return assemble_edges(space, [&](const EdgeTrace& trace, Eigen::Matrix<double, 12, 12>& local) {
    const double h = trace.length();
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = trace.at(rule.points[q]);
      const Vec12 jv = trace.jump_value(x);
      const Vec12 jn = trace.jump_normal(x);
      local.noalias() += rule.weights[q] * h * (sigma1 / (h * h * h) * jv * jv.transpose() + sigma2 / h * jn * jn.transpose());
    }
  });
}

SparseMatrix assemble_cip(const FiniteElementSpace& space, double sigma_ip) {
  const auto rule = gauss_legendre<double>(3);
  return assemble_edges(space, [&](const EdgeTrace& trace, Eigen::Matrix<double, 12, 12>& local) {
    for (int q = 0; q < rule.size(); ++q) {
      const Vec12 jn = trace.jump_normal(trace.at(rule.points[q]));
      local.noalias() += rule.weights[q] * sigma_ip * jn * jn.transpose();
    }
  });
}

namespace {

/// h^-p sum_z [v](z)[w](z) + h^-q (mean [dv/dn])(mean [dw/dn]).
SparseMatrix assemble_jump_functionals(const FiniteElementSpace& space, int vertex_power, int normal_power) {
  return assemble_edges(space, [&](const EdgeTrace& trace, Eigen::Matrix<double, 12, 12>& local) {
    const double h = trace.length();
    for (double s : {0.0, 1.0}) {
      const Vec12 jv = trace.jump_value(trace.at(s));
      local.noalias() += std::pow(h, -vertex_power) * jv * jv.transpose();
    }
    // The normal-derivative jump is affine: its edge mean is the midpoint value.
    const Vec12 jn = trace.jump_normal(trace.at(0.5));
    local.noalias() += std::pow(h, -normal_power) * jn * jn.transpose();
  });
}

}  // namespace

SparseMatrix assemble_cp(const FiniteElementSpace& space) { return assemble_jump_functionals(space, 4, 2); }

SparseMatrix assemble_jh(const FiniteElementSpace& space) { return assemble_jump_functionals(space, 2, 0); }

SchemeSystem assemble_scheme(std::shared_ptr<const Triangulation> mesh, const SchemeConfig& config) {
  config.validate();
  SchemeSystem system;
  system.config = config;
  system.symmetric = config.symmetric();
  system.space = make_space(std::move(mesh), scheme_space(config.scheme));
  const FiniteElementSpace& space = *system.space;
  SparseMatrix a = assemble_apw(space);
  switch (config.scheme) {
    case SchemeTag::Morley:
      break;
    case SchemeTag::Dg:
      a += assemble_consistency(space, config.theta);
      a += assemble_cdg(space, config.sigma1, config.sigma2);
      break;
    case SchemeTag::C0ip:
      a += assemble_consistency(space, config.theta);
      a += assemble_cip(space, config.sigma_ip);
      break;
    case SchemeTag::Wopsip:
      a += assemble_cp(space);
      break;
  }
  a.prune(0.0);
  system.matrix = std::move(a);
  return system;
}

EdgeJumps edge_jumps(const Triangulation& mesh, const Eigen::VectorXd& dg, Index e) {
  const Edge& edge = mesh.edge(e);
  EdgeJumps jumps;
  const Index tris[2] = {edge.plus, edge.minus};
  const int locals[2] = {edge.plus_local, edge.minus_local};
  for (int s = 0; s < (edge.is_boundary() ? 1 : 2); ++s) {
    const Index t = tris[s];
    const int i = locals[s];
    const double sign = s == 0 ? 1.0 : -1.0;
    const Eigen::Matrix<double, 6, 1> nodal = dg.segment<6>(6 * t);
    for (int c = 0; c < 2; ++c) {
      jumps.vertex[c] += sign * nodal(mesh.local_vertex(t, edge.vertices[c]));
    }
    Eigen::Vector3d mid = Eigen::Vector3d::Constant(0.5);
    mid(i) = 0.0;
    jumps.mean_normal += sign * p2::evaluate(mesh.geometry(t), nodal, mid).gradient.dot(edge.normal);
  }
  return jumps;
}

double jump_seminorm(const Triangulation& mesh, const Eigen::VectorXd& dg) {
  double sum = 0.0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const EdgeJumps j = edge_jumps(mesh, dg, e);
    const double h = mesh.edge(e).length;
    sum += (j.vertex[0] * j.vertex[0] + j.vertex[1] * j.vertex[1]) / (h * h) + j.mean_normal * j.mean_normal;
  }
  return std::sqrt(sum);
}

double cp_energy(const Triangulation& mesh, const Eigen::VectorXd& dg) {
  double sum = 0.0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const EdgeJumps j = edge_jumps(mesh, dg, e);
    const double h2 = mesh.edge(e).length * mesh.edge(e).length;
    sum += (j.vertex[0] * j.vertex[0] + j.vertex[1] * j.vertex[1]) / (h2 * h2) + j.mean_normal * j.mean_normal / h2;
  }
  return sum;
}

double energy_norm_pw(const Triangulation& mesh, const Eigen::VectorXd& dg) {
  double sum = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Vector3d h = p2::basis_hessians(mesh.geometry(t)) * dg.segment<6>(6 * t);
    sum += mesh.area(t) * (h(0) * h(0) + 2.0 * h(1) * h(1) + h(2) * h(2));
  }
  return std::sqrt(sum);
}

double measured_coercivity(const SparseMatrix& a, const SparseMatrix& norm, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = std::numeric_limits<double>::infinity();
  Eigen::VectorXd v(a.cols());
  for (int k = 0; k < samples; ++k) {
    for (Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    const double denom = v.dot(norm * v);
    if (denom <= 0.0) continue;
    worst = std::min(worst, v.dot(a * v) / denom);
  }
  return worst;
}

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  const auto precision = out.precision(17);
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace biharm
