#include "biharm/hct.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace biharm;

namespace {

const TriangleGeometry kReference(Point(0, 0), Point(1, 0), Point(0, 1));
const TriangleGeometry kSkewed(Point(0.2, -0.1), Point(1.7, 0.3), Point(0.4, 1.1));

Jet2d x2y(const Point& p) {
  Jet2d j;
  j.value = p.x() * p.x() * p.y();
  j.gradient = Point(2 * p.x() * p.y(), p.x() * p.x());
  j.hessian << 2 * p.y(), 2 * p.x(), 2 * p.x(), 0;
  return j;
}

Jet2d smooth(const Point& p) {
  Jet2d j;
  const double s = std::sin(p.x()), c = std::cos(p.x()), e = std::exp(p.y());
  j.value = s * e;
  j.gradient = Point(c * e, s * e);
  j.hessian << -s * e, c * e, c * e, s * e;
  return j;
}

// Plain monomials x^a y^b (a + b <= 3) with gradients.
void monomials(const Point& p, Eigen::Matrix<double, 10, 1>& v, Eigen::Matrix<double, 10, 2>& g) {
  int k = 0;
  for (int d = 0; d <= 3; ++d) {
    for (int b = 0; b <= d; ++b, ++k) {
      const int a = d - b;
      v(k) = std::pow(p.x(), a) * std::pow(p.y(), b);
      g(k, 0) = a > 0 ? a * std::pow(p.x(), a - 1) * std::pow(p.y(), b) : 0.0;
      g(k, 1) = b > 0 ? b * std::pow(p.x(), a) * std::pow(p.y(), b - 1) : 0.0;
    }
  }
}

// Independent dense construction: overdetermined C0/C1 gluing plus the 12
// interpolation conditions, solved in the least-squares sense. Returns the
// value of the macro interpolant at `x` evaluated on sub-triangle `s`.
double least_squares_hct(const TriangleGeometry& geo, Jet2d (*f)(const Point&), int s, const Point& x) {
  const Point c = geo.centroid();
  std::vector<Eigen::Matrix<double, 1, 30>> rows;
  std::vector<double> rhs;
  Eigen::Matrix<double, 10, 1> v;
  Eigen::Matrix<double, 10, 2> g;
  auto row = [&]() {
    rows.emplace_back(Eigen::Matrix<double, 1, 30>::Zero());
    return rows.size() - 1;
  };
  for (int i = 0; i < 3; ++i) {
    const Jet2d j = f(geo.vertices[i]);
    for (int sub : {(i + 1) % 3, (i + 2) % 3}) {
      monomials(geo.vertices[i], v, g);
      rows[row()].segment<10>(10 * sub) = v.transpose();
      rhs.push_back(j.value);
      rows[row()].segment<10>(10 * sub) = g.col(0).transpose();
      rhs.push_back(j.gradient.x());
      rows[row()].segment<10>(10 * sub) = g.col(1).transpose();
      rhs.push_back(j.gradient.y());
    }
    const Point m = geo.edge_midpoint(i);
    monomials(m, v, g);
    rows[row()].segment<10>(10 * i) = (g * geo.outward_normal(i)).transpose();
    rhs.push_back(f(m).gradient.dot(geo.outward_normal(i)));
    // Gluing along the sub-edge from the centroid to vertex i.
    const Point dir = geo.vertices[i] - c;
    const Point n(dir.y(), -dir.x());
    for (int k = 0; k <= 6; ++k) {
      monomials(c + (k / 6.0) * dir, v, g);
      std::size_t r = row();
      rows[r].segment<10>(10 * ((i + 1) % 3)) = v.transpose();
      rows[r].segment<10>(10 * ((i + 2) % 3)) = -v.transpose();
      rhs.push_back(0.0);
      r = row();
      rows[r].segment<10>(10 * ((i + 1) % 3)) = (g * n).transpose();
      rows[r].segment<10>(10 * ((i + 2) % 3)) = -(g * n).transpose();
      rhs.push_back(0.0);
    }
  }
  Eigen::MatrixXd a(rows.size(), 30);
  for (std::size_t r = 0; r < rows.size(); ++r) a.row(r) = rows[r];
  const Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());
  const Eigen::VectorXd coeffs = a.completeOrthogonalDecomposition().solve(b);
  monomials(x, v, g);
  return v.dot(coeffs.segment<10>(10 * s));
}

HctElement::Dofs random_dofs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  HctElement::Dofs dofs;
  for (int k = 0; k < HctElement::kDofs; ++k) dofs(k) = d(rng);
  return dofs;
}

}  // namespace

TEST(Hct, ReproducesAffineFunction) {
  for (const TriangleGeometry& geo : {kReference, kSkewed}) {
    const HctElement el(geo);
    auto g = [](const Point& p) {
      Jet2d j;
      j.value = p.x();
      j.gradient = Point(1, 0);
      return j;
    };
    const HctElement::Dofs dofs = el.interpolate(g);
    for (const Eigen::Vector3d& l : {Eigen::Vector3d(0.1, 0.2, 0.7), Eigen::Vector3d(0.6, 0.3, 0.1)}) {
      const Point x = geo.point(l);
      const Jet2d j = el.evaluate(dofs, x);
      EXPECT_NEAR(j.value, x.x(), 1e-13);
      EXPECT_NEAR((j.gradient - Point(1, 0)).norm(), 0.0, 1e-12);
      EXPECT_NEAR(j.hessian.norm(), 0.0, 1e-10);
    }
  }
}

TEST(Hct, ReproducesCubics) {
  const HctElement el(kSkewed);
  const HctElement::Dofs dofs = el.interpolate(x2y);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Eigen::Vector3d l(d(rng), d(rng), d(rng));
    l /= l.sum();
    const Point x = kSkewed.point(l);
    const Jet2d j = el.evaluate(dofs, x);
    const Jet2d ref = x2y(x);
    EXPECT_NEAR(j.value, ref.value, 1e-12);
    EXPECT_NEAR((j.gradient - ref.gradient).norm(), 0.0, 1e-11);
    EXPECT_NEAR((j.hessian - ref.hessian).norm(), 0.0, 1e-9);
  }
}

TEST(Hct, DofsAreDualToBasis) {
  const HctElement el(kSkewed);
  for (int k = 0; k < HctElement::kDofs; ++k) {
    HctElement::Dofs e = HctElement::Dofs::Zero();
    e(k) = 1.0;
    HctElement::Dofs measured;
    for (int i = 0; i < 3; ++i) {
      const Jet2d v = el.evaluate(e, kSkewed.vertices[i]);
      measured(3 * i) = v.value;
      measured(3 * i + 1) = v.gradient.x();
      measured(3 * i + 2) = v.gradient.y();
      measured(9 + i) = el.evaluate(e, kSkewed.edge_midpoint(i)).gradient.dot(kSkewed.outward_normal(i));
    }
    EXPECT_LT((measured - e).cwiseAbs().maxCoeff(), 1e-11) << "basis function " << k;
  }
}

TEST(Hct, C1AcrossInternalSubEdges) {
  std::mt19937_64 rng(5);
  for (const TriangleGeometry& geo : {kReference, kSkewed}) {
    const HctElement el(geo);
    const Point c = el.split_point();
    for (int trial = 0; trial < 10; ++trial) {
      const HctElement::Dofs dofs = random_dofs(rng);
      for (int i = 0; i < 3; ++i) {
        const Point dir = geo.vertices[i] - c;
        const Point n = Point(dir.y(), -dir.x()).normalized();
        for (double t : {0.1, 0.4, 0.75, 0.95}) {
          const Point x = c + t * dir;
          const Jet2d a = el.evaluate((i + 1) % 3, dofs, x);
          const Jet2d b = el.evaluate((i + 2) % 3, dofs, x);
          EXPECT_NEAR(a.value, b.value, 1e-10);
          EXPECT_NEAR(a.gradient.dot(n), b.gradient.dot(n), 1e-10);
          EXPECT_NEAR((a.gradient - b.gradient).norm(), 0.0, 1e-10);
        }
      }
    }
  }
}

TEST(Hct, MatchesLeastSquaresOracle) {
  const HctElement el(kReference);
  const Point centroid = kReference.centroid();
  for (int s = 0; s < 3; ++s) {
    const double value = el.evaluate(s, el.interpolate(x2y), centroid).value;
    EXPECT_NEAR(value, least_squares_hct(kReference, x2y, s, centroid), 1e-13);
    EXPECT_NEAR(value, x2y(centroid).value, 1e-14);
  }
  const HctElement skew(kSkewed);
  const HctElement::Dofs dofs = skew.interpolate(smooth);
  for (const Eigen::Vector3d& l : {Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3), Eigen::Vector3d(0.1, 0.5, 0.4)}) {
    const Point x = kSkewed.point(l);
    const int s = skew.sub_triangle(x);
    EXPECT_NEAR(skew.evaluate(s, dofs, x).value, least_squares_hct(kSkewed, smooth, s, x), 1e-12);
  }
}

TEST(Hct, LocalityOnMacroEdges) {
  const HctElement el(kSkewed);
  for (int edge = 0; edge < 3; ++edge) {
    const Point a = kSkewed.vertices[(edge + 1) % 3], b = kSkewed.vertices[(edge + 2) % 3];
    for (int k = 0; k < HctElement::kDofs; ++k) {
      const bool involved = (k < 9 && k / 3 != edge) || k == 9 + edge;
      if (involved) continue;
      HctElement::Dofs e = HctElement::Dofs::Zero();
      e(k) = 1.0;
      for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const Jet2d j = el.evaluate(edge, e, a + t * (b - a));
        EXPECT_NEAR(j.value, 0.0, 1e-12) << "edge " << edge << " dof " << k;
        EXPECT_NEAR(j.gradient.norm(), 0.0, 1e-11) << "edge " << edge << " dof " << k;
      }
    }
  }
}

TEST(Hct, SubTriangleLookup) {
  const HctElement el(kSkewed);
  for (int s = 0; s < 3; ++s) {
    const TriangleGeometry sub = el.sub_geometry(s);
    EXPECT_EQ(el.sub_triangle(sub.centroid()), s);
    EXPECT_NEAR((sub.vertices[0] - kSkewed.vertices[(s + 1) % 3]).norm(), 0.0, 1e-15);
  }
}

TEST(Hct, DegenerateGeometryRejected) {
  EXPECT_THROW(HctElement(TriangleGeometry(Point(0, 0), Point(1, 0), Point(0.5, 1e-17))), SingularElementError);
}
