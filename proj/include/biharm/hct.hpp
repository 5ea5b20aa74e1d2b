#pragma once

#include "biharm/mesh.hpp"

#include <array>

namespace biharm {

/// Cubic monomials in coordinates shifted to `origin` and scaled by `scale`,
/// with physical-coordinate derivatives. Hessian columns are (xx, xy, yy).
struct CubicMonomials {
  Eigen::Matrix<double, 10, 1> value;
  Eigen::Matrix<double, 10, 2> gradient;
  Eigen::Matrix<double, 10, 3> hessian;
};

CubicMonomials cubic_monomials(const Point& x, const Point& origin, double scale);

/// Hsieh-Clough-Tocher macro element on one triangle, split at its centroid.
///
/// Local degrees of freedom, in order: for each vertex i the value and the two
/// gradient components (3i, 3i+1, 3i+2); then for each edge i the normal
/// derivative at its midpoint along the outward normal of the triangle (9+i).
/// Sub-triangle s is conv{edge s, centroid}; each basis function is stored as
/// three cubics (one column of `coefficients(s)` per basis function).
class HctElement {
 public:
  static constexpr int kDofs = 12;
  using Dofs = Eigen::Matrix<double, kDofs, 1>;

  explicit HctElement(const TriangleGeometry& geometry);

  const TriangleGeometry& geometry() const { return geometry_; }
  Point split_point() const { return origin_; }
  TriangleGeometry sub_geometry(int s) const;
  /// Sub-triangle containing x (smallest macro barycentric coordinate).
  int sub_triangle(const Point& x) const;

  const Eigen::Matrix<double, 10, kDofs>& coefficients(int s) const { return coefficients_[s]; }

  Eigen::Matrix<double, kDofs, 1> basis_values(int s, const Point& x) const;
  Eigen::Matrix<double, kDofs, 2> basis_gradients(int s, const Point& x) const;

  Jet2d evaluate(int s, const Dofs& dofs, const Point& x) const;
  Jet2d evaluate(const Dofs& dofs, const Point& x) const { return evaluate(sub_triangle(x), dofs, x); }

  /// The 12 degrees of freedom of a smooth function given by its jet.
  template <typename JetFn>
  Dofs interpolate(JetFn&& jet) const {
    Dofs dofs;
    for (int i = 0; i < 3; ++i) {
      const Jet2d j = jet(geometry_.vertices[i]);
      dofs(3 * i) = j.value;
      dofs(3 * i + 1) = j.gradient.x();
      dofs(3 * i + 2) = j.gradient.y();
      dofs(9 + i) = jet(geometry_.edge_midpoint(i)).gradient.dot(geometry_.outward_normal(i));
    }
    return dofs;
  }

 private:
  TriangleGeometry geometry_;
  Point origin_;
  double scale_;
  std::array<Eigen::Matrix<double, 10, kDofs>, 3> coefficients_;
};

}  // namespace biharm
