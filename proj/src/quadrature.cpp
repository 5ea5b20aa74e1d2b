#include "biharm/quadrature.hpp"

namespace biharm {

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw Error("triangle_rule: negative degree");
  // The collapsed direction carries the Jacobian factor (1 - u), one degree more.
  const int n = (degree + 3) / 2;
  const auto gauss = gauss_legendre<double>(n);
  TriangleRule rule;
  rule.degree = degree;
  rule.barycentric.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double u = gauss.points[i];
    for (int j = 0; j < n; ++j) {
      const double v = gauss.points[j];
      const double l1 = u;
      const double l2 = v * (1.0 - u);
      rule.barycentric.emplace_back(1.0 - l1 - l2, l1, l2);
      rule.weights.push_back(2.0 * gauss.weights[i] * gauss.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace biharm
