#include "biharm/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace biharm;

namespace {

std::vector<std::pair<double, double>> sorted_vertices(const Triangulation& m) {
  std::vector<std::pair<double, double>> out;
  for (const Point& p : m.vertices()) out.emplace_back(p.x(), p.y());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sorted_areas(const Triangulation& m) {
  std::vector<double> out;
  for (Index t = 0; t < m.num_triangles(); ++t) out.push_back(m.area(t));
  std::sort(out.begin(), out.end());
  return out;
}

double signed_area(const Triangulation& m, Index t) {
  const auto& tri = m.triangle(t);
  const Point a = m.vertex(tri[0]), b = m.vertex(tri[1]), c = m.vertex(tri[2]);
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

const char* kSquare =
    "4 2\n"
    "0 0\n"
    "1 0\n"
    "0 1\n"
    "1 1\n"
    "0 1 3\n"
    "0 3 2\n";

int parse_error_line(const std::string& text) {
  try {
    read_mesh(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(UnitSquareMesh, SmallestGrid) {
  const Triangulation m = unit_square_mesh(1);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(m.num_edges(), 5);
  EXPECT_EQ(m.num_interior_edges(), 1);
  EXPECT_EQ(m.num_interior_vertices(), 0);
}

TEST(UnitSquareMesh, CountsAndEulerRelation) {
  const Triangulation m = unit_square_mesh(2);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_EQ(m.num_edges(), 16);
  EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_triangles(), 1);
}

TEST(UnitSquareMesh, MeshSize) {
  const Triangulation m = unit_square_mesh(4);
  EXPECT_EQ(m.num_triangles(), 32);
  EXPECT_DOUBLE_EQ(m.h_max(), std::sqrt(2.0) / 4.0);
}

TEST(UnitSquareMesh, RejectsNonPositiveN) { EXPECT_THROW(unit_square_mesh(0), ConfigError); }

TEST(Triangulation, OrientationAndEdgeInvariants) {
  const Triangulation m = refine_uniform(unit_square_mesh(3));
  for (Index t = 0; t < m.num_triangles(); ++t) EXPECT_GT(signed_area(m, t), 0.0);
  for (Index e = 0; e < m.num_edges(); ++e) {
    const Edge& edge = m.edge(e);
    EXPECT_NEAR(edge.normal.norm(), 1.0, 1e-15);
    EXPECT_NEAR(edge.normal.dot(edge.tangent), 0.0, 1e-15);
    EXPECT_NEAR(edge.length, (m.vertex(edge.vertices[0]) - m.vertex(edge.vertices[1])).norm(), 1e-15);
    const TriangleGeometry plus = m.geometry(edge.plus);
    EXPECT_NEAR((plus.outward_normal(edge.plus_local) - edge.normal).norm(), 0.0, 1e-14);
    if (!edge.is_boundary()) {
      EXPECT_LT(edge.plus, edge.minus);
      const TriangleGeometry minus = m.geometry(edge.minus);
      EXPECT_NEAR((minus.outward_normal(edge.minus_local) + edge.normal).norm(), 0.0, 1e-14);
      EXPECT_EQ(m.edge_sign(edge.plus, edge.plus_local), 1);
      EXPECT_EQ(m.edge_sign(edge.minus, edge.minus_local), -1);
      // The two triangles traverse the shared edge in opposite directions.
      const auto& tp = m.triangle(edge.plus);
      const auto& tm = m.triangle(edge.minus);
      const Index p0 = tp[(edge.plus_local + 1) % 3], p1 = tp[(edge.plus_local + 2) % 3];
      const Index m0 = tm[(edge.minus_local + 1) % 3], m1 = tm[(edge.minus_local + 2) % 3];
      EXPECT_EQ(p0, m1);
      EXPECT_EQ(p1, m0);
    } else {
      const Point outward = edge.midpoint + 1e-3 * edge.normal;
      EXPECT_TRUE(outward.x() < 0 || outward.x() > 1 || outward.y() < 0 || outward.y() > 1);
    }
  }
}

TEST(Triangulation, BoundaryFlags) {
  const Triangulation m = unit_square_mesh(4);
  for (Index v = 0; v < m.num_vertices(); ++v) {
    const Point& p = m.vertex(v);
    const bool on_boundary = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    EXPECT_EQ(m.is_boundary_vertex(v), on_boundary);
  }
  EXPECT_EQ(m.num_interior_vertices(), 9);
}

TEST(Triangulation, VertexPatchesAreSortedAndComplete) {
  const Triangulation m = unit_square_mesh(3);
  std::vector<int> count(m.num_triangles(), 0);
  for (Index v = 0; v < m.num_vertices(); ++v) {
    const auto patch = m.vertex_patch(v);
    EXPECT_TRUE(std::is_sorted(patch.begin(), patch.end()));
    for (Index t : patch) {
      EXPECT_GE(m.local_vertex(t, v), 0);
      ++count[t];
    }
  }
  for (int c : count) EXPECT_EQ(c, 3);
}

TEST(Triangulation, AreaSumsToDomainArea) {
  const Triangulation m = refine_uniform(refine_uniform(unit_square_mesh(3)));
  EXPECT_NEAR(m.total_area(), 1.0, 1e-12);
}

TEST(Triangulation, RejectsEmptyAndDegenerate) {
  EXPECT_THROW(Triangulation({Point(0, 0)}, {}), Error);
  EXPECT_THROW(Triangulation({Point(0, 0), Point(1, 0), Point(2, 0)}, {{0, 1, 2}}), SingularElementError);
}

TEST(RefineUniform, QuadruplesTriangles) {
  const Triangulation m = refine_uniform(unit_square_mesh(1));
  EXPECT_EQ(m.num_triangles(), 8);
  ASSERT_EQ(m.parents().size(), 8u);
  for (Index t = 0; t < 8; ++t) EXPECT_EQ(m.parents()[t], t / 4);
}

TEST(RefineUniform, MatchesFinerGridUpToRenumbering) {
  const Triangulation refined = refine_uniform(unit_square_mesh(1));
  const Triangulation direct = unit_square_mesh(2);
  EXPECT_EQ(sorted_vertices(refined), sorted_vertices(direct));
  const auto a = sorted_areas(refined), b = sorted_areas(direct);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(RefineUniform, CountsMeshSizeAndShapeRegularity) {
  for (int n : {1, 2, 4}) {
    Triangulation m = unit_square_mesh(n);
    const double shape = m.shape_regularity();
    for (int k = 1; k <= 3; ++k) {
      m = refine_uniform(m);
      EXPECT_EQ(m.num_triangles(), 2 * n * n * (1 << (2 * k)));
      EXPECT_EQ(m.h_max(), std::sqrt(2.0) / n / (1 << k));
      EXPECT_NEAR(m.shape_regularity(), shape, 1e-12 * shape);
    }
  }
}

TEST(RefineUniform, ChildrenOfBoundaryEdgesStayOnBoundary) {
  const Triangulation m = refine_uniform(unit_square_mesh(2));
  for (const Edge& e : m.edges()) {
    const Point& p = e.midpoint;
    const bool on_boundary = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    EXPECT_EQ(e.is_boundary(), on_boundary);
  }
}

TEST(MeshIo, RoundTripIsCanonical) {
  const MeshReadResult r = read_mesh(kSquare);
  EXPECT_EQ(r.reoriented, 0);
  const std::string once = write_mesh(r.mesh);
  EXPECT_EQ(write_mesh(read_mesh(once).mesh), once);
  EXPECT_EQ(once, write_mesh(unit_square_mesh(1)));
}

TEST(MeshIo, CommentsAndBlankLines) {
  const std::string text = "# square\n\n4 2 # header\n0 0\n1 0\n1 1\n0 1\n\n0 1 2\n0 2 3\n";
  EXPECT_EQ(read_mesh(text).mesh.num_triangles(), 2);
}

TEST(MeshIo, ClockwiseTriangleIsReoriented) {
  const std::string text = "4 2\n0 0\n1 0\n1 1\n0 1\n0 2 1\n0 2 3\n";
  const MeshReadResult r = read_mesh(text);
  EXPECT_EQ(r.reoriented, 1);
  EXPECT_GT(signed_area(r.mesh, 0), 0.0);
  EXPECT_GT(signed_area(r.mesh, 1), 0.0);
}

TEST(MeshIo, EmptyMesh) {
  try {
    read_mesh("2 0\n0 0\n1 0\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("empty mesh"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(MeshIo, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line(""), 1);
  EXPECT_EQ(parse_error_line("4\n"), 1);
  EXPECT_EQ(parse_error_line("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n"), 6);
  EXPECT_EQ(parse_error_line("4 2\n0 0\n1 x\n1 1\n0 1\n0 1 2\n0 2 3\n"), 3);
  EXPECT_EQ(parse_error_line("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 7\n"), 7);
  EXPECT_EQ(parse_error_line("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2 5\n0 2 3\n"), 6);
  EXPECT_EQ(parse_error_line("3 1\n0 0\n1 0\n2 0\n0 1 2\n"), 5);
}

TEST(MeshIo, DistinctMessages) {
  auto message = [](const std::string& text) {
    try {
      read_mesh(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 7\n").find("dangling"), std::string::npos);
  EXPECT_NE(message("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n").find("header"), std::string::npos);
  EXPECT_NE(message("3 1\n0 0\n1 0\n2 0\n0 1 2\n").find("degenerate"), std::string::npos);
}
