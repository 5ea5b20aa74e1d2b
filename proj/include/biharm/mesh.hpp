#pragma once

#include "biharm/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace biharm {

/// Affine geometry of one triangle. Local edge i is opposite local vertex i
/// and runs from vertex i+1 to vertex i+2 (mod 3).
struct TriangleGeometry {
  std::array<Point, 3> vertices;
  double area = 0.0;
  /// Row i holds the (constant) gradient of barycentric coordinate i.
  Eigen::Matrix<double, 3, 2> grad_lambda;

  TriangleGeometry(const Point& a, const Point& b, const Point& c);

  Eigen::Vector3d barycentric(const Point& x) const;
  Point point(const Eigen::Vector3d& lambda) const;
  Point centroid() const;
  double diameter() const;
  double edge_length(int i) const;
  Point edge_midpoint(int i) const;
  Point outward_normal(int i) const;
};

struct Edge {
  std::array<Index, 2> vertices{-1, -1};
  /// T+ is the adjacent triangle with the smaller index; the normal points out of it.
  Index plus = -1;
  Index minus = -1;
  int plus_local = -1;
  int minus_local = -1;
  Point normal = Point::Zero();
  Point tangent = Point::Zero();
  Point midpoint = Point::Zero();
  double length = 0.0;

  bool is_boundary() const { return minus < 0; }
};

/// Conforming triangulation of a polygonal domain. Immutable once built.
class Triangulation {
 public:
  Triangulation(std::vector<Point> vertices, std::vector<std::array<Index, 3>> triangles,
                std::vector<Index> parents = {});

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_interior_vertices() const;
  Index num_interior_edges() const;

  const Point& vertex(Index v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::array<Index, 3>& triangle(Index t) const { return triangles_[t]; }
  const std::vector<std::array<Index, 3>>& triangles() const { return triangles_; }
  /// Global edge indices of triangle t, entry i opposite local vertex i.
  const std::array<Index, 3>& triangle_edges(Index t) const { return triangle_edges_[t]; }
  const Edge& edge(Index e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_boundary_vertex(Index v) const { return boundary_vertex_[v]; }
  /// Triangles sharing vertex v, in increasing index order.
  std::span<const Index> vertex_patch(Index v) const;
  /// +1 when t is the T+ side of its local edge i, -1 otherwise.
  int edge_sign(Index t, int i) const;
  /// Local vertex number of global vertex v in triangle t, or -1.
  int local_vertex(Index t, Index v) const;

  TriangleGeometry geometry(Index t) const;
  double area(Index t) const { return area_[t]; }
  double diameter(Index t) const { return diameter_[t]; }
  double h_max() const;
  /// max over triangles of h_T^2 / |T|.
  double shape_regularity() const;
  double total_area() const;

  /// Parent triangle per triangle for meshes produced by refine_uniform, else empty.
  const std::vector<Index>& parents() const { return parents_; }

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<std::array<Index, 3>> triangle_edges_;
  std::vector<Edge> edges_;
  std::vector<bool> boundary_vertex_;
  std::vector<Index> patch_offsets_;
  std::vector<Index> patch_triangles_;
  std::vector<double> area_;
  std::vector<double> diameter_;
  std::vector<Index> parents_;
};

/// Uniform grid of [0,1]^2, every cell cut along its SW-NE diagonal.
Triangulation unit_square_mesh(int n);

/// Red refinement: each triangle split into four via its edge midpoints.
Triangulation refine_uniform(const Triangulation& mesh);

struct MeshReadResult {
  Triangulation mesh;
  int reoriented = 0;
};

/// ASCII format: "nv nt", nv lines "x y", nt lines "i j k" (0-based). '#' starts a comment.
MeshReadResult read_mesh(const std::string& text);
std::string write_mesh(const Triangulation& mesh);

}  // namespace biharm
