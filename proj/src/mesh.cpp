#include "biharm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <utility>

namespace biharm {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

TriangleGeometry::TriangleGeometry(const Point& a, const Point& b, const Point& c)
    : vertices{a, b, c} {
  area = signed_area(a, b, c);
  const double h = diameter();
  if (!(area > 1e-14 * h * h)) {
    throw SingularElementError("degenerate or clockwise triangle (signed area " +
                               std::to_string(area) + ")");
  }
  for (int i = 0; i < 3; ++i) {
    const Point e = vertices[(i + 2) % 3] - vertices[(i + 1) % 3];
    grad_lambda(i, 0) = -e.y() / (2.0 * area);
    grad_lambda(i, 1) = e.x() / (2.0 * area);
  }
}

Eigen::Vector3d TriangleGeometry::barycentric(const Point& x) const {
  Eigen::Vector3d lambda;
  for (int i = 0; i < 3; ++i) {
    lambda(i) = grad_lambda.row(i).dot(x - vertices[(i + 1) % 3]);
  }
  return lambda;
}

Point TriangleGeometry::point(const Eigen::Vector3d& lambda) const {
  return lambda(0) * vertices[0] + lambda(1) * vertices[1] + lambda(2) * vertices[2];
}

Point TriangleGeometry::centroid() const { return (vertices[0] + vertices[1] + vertices[2]) / 3.0; }

double TriangleGeometry::diameter() const {
  return std::max({edge_length(0), edge_length(1), edge_length(2)});
}

double TriangleGeometry::edge_length(int i) const {
  return (vertices[(i + 2) % 3] - vertices[(i + 1) % 3]).norm();
}

Point TriangleGeometry::edge_midpoint(int i) const {
  return 0.5 * (vertices[(i + 1) % 3] + vertices[(i + 2) % 3]);
}

Point TriangleGeometry::outward_normal(int i) const {
  const Point e = vertices[(i + 2) % 3] - vertices[(i + 1) % 3];
  return Point(e.y(), -e.x()) / e.norm();
}

Triangulation::Triangulation(std::vector<Point> vertices,
                             std::vector<std::array<Index, 3>> triangles,
                             std::vector<Index> parents)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), parents_(std::move(parents)) {
  const Index nv = num_vertices();
  const Index nt = num_triangles();
  if (nt == 0) throw Error("empty mesh");
  if (!parents_.empty() && static_cast<Index>(parents_.size()) != nt) {
    throw Error("parent map length does not match triangle count");
  }

  area_.resize(nt);
  diameter_.resize(nt);
  triangle_edges_.resize(nt);
  std::map<std::pair<Index, Index>, Index> edge_index;
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (Index v : tri) {
      if (v < 0 || v >= nv) throw Error("triangle " + std::to_string(t) + " references a missing vertex");
    }
    const TriangleGeometry geo(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    area_[t] = geo.area;
    diameter_[t] = geo.diameter();

    for (int i = 0; i < 3; ++i) {
      const Index a = tri[(i + 1) % 3];
      const Index b = tri[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace(key, num_edges());
      if (inserted) {
        Edge e;
        e.vertices = {a, b};
        e.plus = t;
        e.plus_local = i;
        e.length = geo.edge_length(i);
        e.midpoint = geo.edge_midpoint(i);
        e.normal = geo.outward_normal(i);
        e.tangent = Point(-e.normal.y(), e.normal.x());
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.minus >= 0) throw Error("edge shared by more than two triangles");
        if (e.vertices[0] != b || e.vertices[1] != a) {
          throw Error("inconsistent orientation across an edge of triangle " + std::to_string(t));
        }
        e.minus = t;
        e.minus_local = i;
      }
      triangle_edges_[t][i] = it->second;
    }
  }

  boundary_vertex_.assign(nv, false);
  for (const Edge& e : edges_) {
    if (e.is_boundary()) {
      boundary_vertex_[e.vertices[0]] = true;
      boundary_vertex_[e.vertices[1]] = true;
    }
  }

  patch_offsets_.assign(nv + 1, 0);
  for (const auto& tri : triangles_) {
    for (Index v : tri) ++patch_offsets_[v + 1];
  }
  for (Index v = 0; v < nv; ++v) patch_offsets_[v + 1] += patch_offsets_[v];
  patch_triangles_.resize(patch_offsets_[nv]);
  std::vector<Index> fill(patch_offsets_.begin(), patch_offsets_.end() - 1);
  for (Index t = 0; t < nt; ++t) {
    for (Index v : triangles_[t]) patch_triangles_[fill[v]++] = t;
  }
}

Index Triangulation::num_interior_vertices() const {
  return static_cast<Index>(std::count(boundary_vertex_.begin(), boundary_vertex_.end(), false));
}

Index Triangulation::num_interior_edges() const {
  return static_cast<Index>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return !e.is_boundary(); }));
}

std::span<const Index> Triangulation::vertex_patch(Index v) const {
  return {patch_triangles_.data() + patch_offsets_[v],
          static_cast<std::size_t>(patch_offsets_[v + 1] - patch_offsets_[v])};
}

int Triangulation::edge_sign(Index t, int i) const {
  return edges_[triangle_edges_[t][i]].plus == t ? 1 : -1;
}

int Triangulation::local_vertex(Index t, Index v) const {
  for (int i = 0; i < 3; ++i) {
    if (triangles_[t][i] == v) return i;
  }
  return -1;
}

TriangleGeometry Triangulation::geometry(Index t) const {
  const auto& tri = triangles_[t];
  return TriangleGeometry(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Triangulation::h_max() const { return *std::max_element(diameter_.begin(), diameter_.end()); }

double Triangulation::shape_regularity() const {
  double worst = 0.0;
  for (Index t = 0; t < num_triangles(); ++t) {
    worst = std::max(worst, diameter_[t] * diameter_[t] / area_[t]);
  }
  return worst;
}

double Triangulation::total_area() const {
  double sum = 0.0;
  for (double a : area_) sum += a;
  return sum;
}

Triangulation unit_square_mesh(int n) {
  if (n < 1) throw ConfigError("unit_square_mesh: n must be positive");
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);
  }
  std::vector<std::array<Index, 3>> triangles;
  triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index sw = j * (n + 1) + i;
      const Index se = sw + 1;
      const Index nw = sw + (n + 1);
      const Index ne = nw + 1;
      triangles.push_back({sw, se, ne});
      triangles.push_back({sw, ne, nw});
    }
  }
  return Triangulation(std::move(vertices), std::move(triangles));
}

Triangulation refine_uniform(const Triangulation& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  const Index nv = mesh.num_vertices();
  vertices.reserve(nv + mesh.num_edges());
  for (const Edge& e : mesh.edges()) vertices.push_back(e.midpoint);

  std::vector<std::array<Index, 3>> triangles;
  std::vector<Index> parents;
  triangles.reserve(4 * mesh.num_triangles());
  parents.reserve(4 * mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& p = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const Index m0 = nv + te[0];
    const Index m1 = nv + te[1];
    const Index m2 = nv + te[2];
    triangles.push_back({p[0], m2, m1});
    triangles.push_back({m2, p[1], m0});
    triangles.push_back({m1, m0, p[2]});
    triangles.push_back({m0, m1, m2});
    parents.insert(parents.end(), 4, t);
  }
  return Triangulation(std::move(vertices), std::move(triangles), std::move(parents));
}

namespace {

struct Line {
  int number;
  std::string text;
};

std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back({number, raw});
  }
  return lines;
}

template <typename T, std::size_t N>
std::array<T, N> parse_fields(const Line& line, const char* what) {
  std::istringstream in(line.text);
  std::array<T, N> out{};
  for (auto& value : out) {
    if (!(in >> value)) throw ParseError(line.number, std::string("malformed ") + what);
  }
  std::string extra;
  if (in >> extra) throw ParseError(line.number, std::string("trailing tokens after ") + what);
  return out;
}

}  // namespace

MeshReadResult read_mesh(const std::string& text) {
  const auto lines = significant_lines(text);
  if (lines.empty()) throw ParseError(1, "missing header");
  const auto header = parse_fields<long long, 2>(lines[0], "header (expected \"nv nt\")");
  const long long nv = header[0];
  const long long nt = header[1];
  if (nv < 0 || nt < 0) throw ParseError(lines[0].number, "negative counts in header");
  if (nv == 0 || nt == 0) throw ParseError(lines[0].number, "empty mesh");
  if (static_cast<long long>(lines.size()) != 1 + nv + nt) {
    const int at = lines.size() > static_cast<std::size_t>(1 + nv + nt)
                       ? lines[1 + nv + nt].number
                       : lines.back().number;
    throw ParseError(at, "header announces " + std::to_string(nv) + " vertices and " +
                             std::to_string(nt) + " triangles but the body has " +
                             std::to_string(lines.size() - 1) + " records");
  }

  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (long long i = 0; i < nv; ++i) {
    const auto xy = parse_fields<double, 2>(lines[1 + i], "vertex (expected \"x y\")");
    vertices.emplace_back(xy[0], xy[1]);
  }

  int reoriented = 0;
  std::vector<std::array<Index, 3>> triangles;
  triangles.reserve(nt);
  for (long long k = 0; k < nt; ++k) {
    const Line& line = lines[1 + nv + k];
    const auto ijk = parse_fields<long long, 3>(line, "triangle (expected \"i j k\")");
    std::array<Index, 3> tri{};
    for (int c = 0; c < 3; ++c) {
      if (ijk[c] < 0 || ijk[c] >= nv) {
        throw ParseError(line.number, "dangling vertex index " + std::to_string(ijk[c]));
      }
      tri[c] = static_cast<Index>(ijk[c]);
    }
    const Point& a = vertices[tri[0]];
    const Point& b = vertices[tri[1]];
    const Point& c = vertices[tri[2]];
    const double area = signed_area(a, b, c);
    const double h = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    if (std::abs(area) <= 1e-14 * h * h) throw ParseError(line.number, "degenerate triangle");
    if (area < 0) {
      std::swap(tri[1], tri[2]);
      ++reoriented;
    }
    triangles.push_back(tri);
  }
  try {
    return MeshReadResult{Triangulation(std::move(vertices), std::move(triangles)), reoriented};
  } catch (const Error& e) {
    throw ParseError(lines.back().number, e.what());
  }
}

std::string write_mesh(const Triangulation& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

}  // namespace biharm
