#pragma once

#include "biharm/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace biharm {

/// Gauss rule on the unit interval [0, 1]; weights sum to one.
template <typename Scalar = double>
struct IntervalRule {
  std::vector<Scalar> points;
  std::vector<Scalar> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule on a triangle in barycentric coordinates; weights sum to one, so
/// integrals are `area * sum(w_q f(x_q))`.
struct TriangleRule {
  std::vector<Eigen::Vector3d> barycentric;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point Gauss-Legendre rule via Golub-Welsch, exact for degree 2n-1.
template <typename Scalar = double>
IntervalRule<Scalar> gauss_legendre(int n) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (n < 1) throw Error("gauss_legendre: need at least one point");
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const Scalar beta = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  IntervalRule<Scalar> rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const Scalar v0 = eig.eigenvectors()(0, k);
    rule.points[k] = (eig.eigenvalues()(k) + Scalar(1)) / Scalar(2);
    rule.weights[k] = v0 * v0;
  }
  return rule;
}

/// Collapsed (conical product) Gauss rule exact for total degree `degree`.
TriangleRule triangle_rule(int degree);

}  // namespace biharm
