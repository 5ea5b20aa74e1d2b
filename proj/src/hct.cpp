#include "biharm/hct.hpp"

#include <Eigen/QR>

namespace biharm {

namespace {

constexpr int kExponents[10][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                   {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};

double ipow(double x, int p) { return p <= 0 ? 1.0 : (p == 1 ? x : (p == 2 ? x * x : x * x * x)); }

}  // namespace

CubicMonomials cubic_monomials(const Point& x, const Point& origin, double scale) {
  const double xi = (x.x() - origin.x()) / scale;
  const double eta = (x.y() - origin.y()) / scale;
  const double s1 = 1.0 / scale;
  const double s2 = s1 * s1;
  CubicMonomials m;
  for (int k = 0; k < 10; ++k) {
    const int a = kExponents[k][0];
    const int b = kExponents[k][1];
    m.value(k) = ipow(xi, a) * ipow(eta, b);
    m.gradient(k, 0) = a > 0 ? a * ipow(xi, a - 1) * ipow(eta, b) * s1 : 0.0;
    m.gradient(k, 1) = b > 0 ? b * ipow(xi, a) * ipow(eta, b - 1) * s1 : 0.0;
    m.hessian(k, 0) = a > 1 ? a * (a - 1) * ipow(xi, a - 2) * ipow(eta, b) * s2 : 0.0;
    m.hessian(k, 1) = (a > 0 && b > 0) ? a * b * ipow(xi, a - 1) * ipow(eta, b - 1) * s2 : 0.0;
    m.hessian(k, 2) = b > 1 ? b * (b - 1) * ipow(xi, a) * ipow(eta, b - 2) * s2 : 0.0;
  }
  return m;
}

HctElement::HctElement(const TriangleGeometry& geometry)
    : geometry_(geometry), origin_(geometry.centroid()), scale_(geometry.diameter()) {
  // 12 DOF rows, then per interior sub-edge 4 value-continuity and 3
  // normal-derivative-continuity rows. Derivative rows are scaled by h so all
  // entries are O(1).
  constexpr int kRows = kDofs + 3 * 7;
  Eigen::Matrix<double, kRows, 30> system = Eigen::Matrix<double, kRows, 30>::Zero();
  Eigen::Matrix<double, kRows, kDofs> rhs = Eigen::Matrix<double, kRows, kDofs>::Zero();
  const double h = scale_;

  for (int i = 0; i < 3; ++i) {
    const int s = (i + 1) % 3;
    const auto m = cubic_monomials(geometry_.vertices[i], origin_, h);
    system.block<1, 10>(3 * i, 10 * s) = m.value.transpose();
    system.block<1, 10>(3 * i + 1, 10 * s) = h * m.gradient.col(0).transpose();
    system.block<1, 10>(3 * i + 2, 10 * s) = h * m.gradient.col(1).transpose();
    rhs(3 * i, 3 * i) = 1.0;
    rhs(3 * i + 1, 3 * i + 1) = h;
    rhs(3 * i + 2, 3 * i + 2) = h;

    const auto mid = cubic_monomials(geometry_.edge_midpoint(i), origin_, h);
    system.block<1, 10>(9 + i, 10 * i) = h * (mid.gradient * geometry_.outward_normal(i)).transpose();
    rhs(9 + i, 9 + i) = h;
  }

  int row = kDofs;
  for (int i = 0; i < 3; ++i) {
    // Sub-edge from the centroid to vertex i separates sub-triangles i+1 and i+2.
    const int left = (i + 1) % 3;
    const int right = (i + 2) % 3;
    const Point dir = geometry_.vertices[i] - origin_;
    const Point normal = Point(dir.y(), -dir.x()).normalized();
    for (double t : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
      const auto m = cubic_monomials(origin_ + t * dir, origin_, h);
      system.block<1, 10>(row, 10 * left) = m.value.transpose();
      system.block<1, 10>(row, 10 * right) = -m.value.transpose();
      ++row;
    }
    for (double t : {0.0, 0.5, 1.0}) {
      const auto m = cubic_monomials(origin_ + t * dir, origin_, h);
      const Eigen::Matrix<double, 10, 1> dn = h * m.gradient * normal;
      system.block<1, 10>(row, 10 * left) = dn.transpose();
      system.block<1, 10>(row, 10 * right) = -dn.transpose();
      ++row;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, kRows, 30>> qr(system);
  qr.setThreshold(1e-10);
  if (qr.rank() != 30) {
    throw SingularElementError("HCT local system is rank deficient (rank " +
                               std::to_string(qr.rank()) + " of 30)");
  }
  const Eigen::Matrix<double, 30, kDofs> solution = qr.solve(rhs);
  if ((system * solution - rhs).cwiseAbs().maxCoeff() > 1e-8) {
    throw SingularElementError("HCT local system is inconsistent");
  }
  for (int s = 0; s < 3; ++s) coefficients_[s] = solution.middleRows<10>(10 * s);
}

TriangleGeometry HctElement::sub_geometry(int s) const {
  return TriangleGeometry(geometry_.vertices[(s + 1) % 3], geometry_.vertices[(s + 2) % 3], origin_);
}

int HctElement::sub_triangle(const Point& x) const {
  const Eigen::Vector3d lambda = geometry_.barycentric(x);
  int s = 0;
  for (int i = 1; i < 3; ++i) {
    if (lambda(i) < lambda(s)) s = i;
  }
  return s;
}

Eigen::Matrix<double, HctElement::kDofs, 1> HctElement::basis_values(int s, const Point& x) const {
  return coefficients_[s].transpose() * cubic_monomials(x, origin_, scale_).value;
}

Eigen::Matrix<double, HctElement::kDofs, 2> HctElement::basis_gradients(int s, const Point& x) const {
  return coefficients_[s].transpose() * cubic_monomials(x, origin_, scale_).gradient;
}

Jet2d HctElement::evaluate(int s, const Dofs& dofs, const Point& x) const {
  const auto m = cubic_monomials(x, origin_, scale_);
  const Eigen::Matrix<double, 10, 1> c = coefficients_[s] * dofs;
  Jet2d jet;
  jet.value = c.dot(m.value);
  jet.gradient = m.gradient.transpose() * c;
  const Eigen::Vector3d hess = m.hessian.transpose() * c;
  jet.hessian << hess(0), hess(1), hess(1), hess(2);
  return jet;
}

}  // namespace biharm
