#pragma once

#include "biharm/hct.hpp"
#include "biharm/mesh.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <string_view>
#include <vector>

namespace biharm {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class SpaceTag { Morley, DgP2, LagrangeP2, Hct };

std::string_view to_string(SpaceTag tag);

/// Global numbering of free degrees of freedom. Constrained (clamped
/// boundary) entities carry index -1 and are implicitly zero.
struct DofMap {
  SpaceTag tag = SpaceTag::DgP2;
  Index num_free = 0;
  Index num_constrained = 0;
  /// First DOF of each vertex (Hct: value, d/dx, d/dy follow consecutively).
  std::vector<Index> vertex_dofs;
  std::vector<Index> edge_dofs;

  /// DgP2 numbering: six per triangle, vertices then midpoints of edges 0..2.
  static Index cell_dof(Index t, int local) { return 6 * t + local; }
};

DofMap build_dof_map(const Triangulation& mesh, SpaceTag tag);

/// Quadratic Lagrange shape functions on a triangle in barycentric form.
/// Node i < 3 is vertex i, node 3 + i is the midpoint of edge i.
namespace p2 {

Eigen::Matrix<double, 6, 1> basis_values(const Eigen::Vector3d& lambda);
Eigen::Matrix<double, 6, 2> basis_gradients(const TriangleGeometry& geo, const Eigen::Vector3d& lambda);
/// Constant Hessians; column k stores (xx, xy, yy) of shape function k.
Eigen::Matrix<double, 3, 6> basis_hessians(const TriangleGeometry& geo);
Jet2d evaluate(const TriangleGeometry& geo, const Eigen::Matrix<double, 6, 1>& nodal,
               const Eigen::Vector3d& lambda);

/// Nodal values of the quadratic interpolating a smooth function.
template <typename Fn>
Eigen::Matrix<double, 6, 1> interpolate(const TriangleGeometry& geo, Fn&& value) {
  Eigen::Matrix<double, 6, 1> nodal;
  for (int i = 0; i < 3; ++i) {
    nodal(i) = value(geo.vertices[i]);
    nodal(3 + i) = value(geo.edge_midpoint(i));
  }
  return nodal;
}

}  // namespace p2

/// Morley shape functions as quadratic nodal values: column k holds the nodal
/// values of the function dual to local Morley DOF k, where DOFs 0..2 are
/// vertex values and 3 + i is the mean over edge i of the derivative along the
/// outward normal.
Eigen::Matrix<double, 6, 6> morley_local_basis(const TriangleGeometry& geo);

/// The six Morley DOFs of a quadratic given by its nodal values.
Eigen::Matrix<double, 6, 1> morley_local_dofs(const TriangleGeometry& geo,
                                              const Eigen::Matrix<double, 6, 1>& nodal);

/// Mesh, DOF numbering and cached element data for one discrete space.
class FiniteElementSpace {
 public:
  FiniteElementSpace(std::shared_ptr<const Triangulation> mesh, SpaceTag tag);

  SpaceTag tag() const { return dofs_.tag; }
  const Triangulation& mesh() const { return *mesh_; }
  const std::shared_ptr<const Triangulation>& mesh_ptr() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  Index dimension() const { return dofs_.num_free; }

  /// Global indices (-1 if constrained) and signs of the local DOFs of triangle t.
  /// P2-type spaces have 6 local DOFs, Hct has 12.
  std::vector<Index> local_indices(Index t) const;
  std::vector<double> local_signs(Index t) const;

  /// 6 x 6 map from (signed) local DOFs to quadratic nodal values. P2-type spaces only.
  Eigen::Matrix<double, 6, 6> local_nodal_map(Index t) const;

  /// Coefficients in DgP2 of the basis functions: a (6|T|) x dimension matrix.
  const SparseMatrix& dg_embedding() const;

  const HctElement& hct_element(Index t) const;

 private:
  std::shared_ptr<const Triangulation> mesh_;
  DofMap dofs_;
  SparseMatrix embedding_;
  std::vector<HctElement> hct_;
};

using SpacePtr = std::shared_ptr<const FiniteElementSpace>;

SpacePtr make_space(std::shared_ptr<const Triangulation> mesh, SpaceTag tag);

/// Coefficient vector over the free DOFs of a space.
struct DiscreteFunction {
  SpacePtr space;
  Eigen::VectorXd coefficients;

  DiscreteFunction() = default;
  explicit DiscreteFunction(SpacePtr s);
  DiscreteFunction(SpacePtr s, Eigen::VectorXd c);

  SpaceTag tag() const { return space->tag(); }
  const Triangulation& mesh() const { return space->mesh(); }
};

/// Quadratic nodal values on every triangle (length 6|T|). P2-type spaces only.
Eigen::VectorXd to_dg(const DiscreteFunction& f);

/// The 12 local HCT DOFs of triangle t, boundary constraints and edge signs applied.
HctElement::Dofs hct_local_dofs(const DiscreteFunction& f, Index t);

/// Jet of f restricted to triangle t at a barycentric point. `order` (0, 1, 2)
/// limits which parts are filled; higher parts stay zero.
Jet2d evaluate(const DiscreteFunction& f, Index t, const Eigen::Vector3d& lambda, int order = 2);

}  // namespace biharm
