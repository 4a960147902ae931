#include "epsreg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace epsreg {

Mesh build_unit_square_mesh(std::size_t n_cells) {
  if (n_cells == 0) {
    throw InvalidArgument("build_unit_square_mesh: n_cells must be at least 1");
  }
  Mesh mesh;
  mesh.n_cells_ = n_cells;
  mesh.h_ = std::sqrt(2.0) / static_cast<double>(n_cells);

  const std::size_t n = n_cells;
  const double dx = 1.0 / static_cast<double>(n);
  mesh.vertices_.reserve((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      // Exact 0 and 1 on the boundary regardless of rounding in i * dx.
      const double x = (i == n) ? 1.0 : static_cast<double>(i) * dx;
      const double y = (j == n) ? 1.0 : static_cast<double>(j) * dx;
      mesh.vertices_.push_back({x, y});
    }
  }

  // Cell (i, j) owns triangles 2c (lower) and 2c + 1 (upper), c = j n + i.
  mesh.triangles_.reserve(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const VertexId v00 = mesh.vertex_id(i, j);
      const VertexId v10 = mesh.vertex_id(i + 1, j);
      const VertexId v11 = mesh.vertex_id(i + 1, j + 1);
      const VertexId v01 = mesh.vertex_id(i, j + 1);
      mesh.triangles_.push_back({v00, v10, v11});
      mesh.triangles_.push_back({v00, v11, v01});
    }
  }

  // Boundary edges, counterclockwise: bottom, right, top, left.
  auto lower = [n](std::size_t i, std::size_t j) { return 2 * (j * n + i); };
  auto upper = [n](std::size_t i, std::size_t j) { return 2 * (j * n + i) + 1; };
  mesh.edges_.reserve(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    mesh.edges_.push_back({{mesh.vertex_id(i, 0), mesh.vertex_id(i + 1, 0)}, {0.0, -1.0}, dx, lower(i, 0)});
  }
  for (std::size_t j = 0; j < n; ++j) {
    mesh.edges_.push_back({{mesh.vertex_id(n, j), mesh.vertex_id(n, j + 1)}, {1.0, 0.0}, dx, lower(n - 1, j)});
  }
  for (std::size_t i = n; i-- > 0;) {
    mesh.edges_.push_back({{mesh.vertex_id(i + 1, n), mesh.vertex_id(i, n)}, {0.0, 1.0}, dx, upper(i, n - 1)});
  }
  for (std::size_t j = n; j-- > 0;) {
    mesh.edges_.push_back({{mesh.vertex_id(0, j + 1), mesh.vertex_id(0, j)}, {-1.0, 0.0}, dx, upper(0, j)});
  }
  return mesh;
}

std::array<Point2, 3> Mesh::triangle_points(std::size_t t) const {
  const Triangle& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double Mesh::triangle_area(std::size_t t) const {
  const auto [a, b, c] = triangle_points(t);
  return 0.5 * cross(b - a, c - a);
}

double Mesh::triangle_diameter(std::size_t t) const {
  const auto [a, b, c] = triangle_points(t);
  return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

std::optional<PointLocation> Mesh::locate(Point2 p, double tol) const {
  if (p.x < -tol || p.x > 1.0 + tol || p.y < -tol || p.y > 1.0 + tol || std::isnan(p.x) ||
      std::isnan(p.y)) {
    return std::nullopt;
  }
  p.x = std::clamp(p.x, 0.0, 1.0);
  p.y = std::clamp(p.y, 0.0, 1.0);

  const double nd = static_cast<double>(n_cells_);
  const std::size_t i = std::min(static_cast<std::size_t>(p.x * nd), n_cells_ - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(p.y * nd), n_cells_ - 1);
  const Point2 origin = vertices_[vertex_id(i, j)];
  const double lx = (p.x - origin.x) * nd;
  const double ly = (p.y - origin.y) * nd;

  PointLocation loc;
  const std::size_t cell = j * n_cells_ + i;
  if (lx >= ly) {
    // (v00, v10, v11): lambda = (1 - lx, lx - ly, ly)
    loc.triangle = 2 * cell;
    loc.barycentric = {1.0 - lx, lx - ly, ly};
  } else {
    // (v00, v11, v01): lambda = (1 - ly, lx, ly - lx)
    loc.triangle = 2 * cell + 1;
    loc.barycentric = {1.0 - ly, lx, ly - lx};
  }
  return loc;
}

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Inflow:
      return "Inflow";
    case BoundaryTag::Outflow:
      return "Outflow";
    case BoundaryTag::Characteristic:
      return "Characteristic";
  }
  return "?";
}

std::vector<BoundaryTag> classify_boundary(const Mesh& mesh, const VectorField& beta, double tol) {
  std::vector<BoundaryTag> tags;
  tags.reserve(mesh.boundary_edges().size());
  const auto& verts = mesh.vertices();
  for (const BoundaryEdge& e : mesh.boundary_edges()) {
    const Point2 mid = 0.5 * (verts[e.vertices[0]] + verts[e.vertices[1]]);
    const double flux = dot(beta(mid), e.normal);
    if (flux > tol) {
      tags.push_back(BoundaryTag::Outflow);
    } else if (flux < -tol) {
      tags.push_back(BoundaryTag::Inflow);
    } else {
      tags.push_back(BoundaryTag::Characteristic);
    }
  }
  return tags;
}

EdgeRule gauss_segment_rule(Point2 a, Point2 b, int order) {
  // Reference nodes on [0, 1].
  std::vector<double> t;
  std::vector<double> w;
  switch (order) {
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      t = {0.5 - d, 0.5 + d};
      w = {0.5, 0.5};
      break;
    }
    case 3: {
      const double d = 0.5 * std::sqrt(0.6);
      t = {0.5 - d, 0.5, 0.5 + d};
      w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    default:
      throw InvalidArgument("edge quadrature: unsupported order " + std::to_string(order) +
                            " (expected 2 or 3)");
  }
  const double length = norm(b - a);
  EdgeRule rule;
  for (std::size_t q = 0; q < t.size(); ++q) {
    rule.nodes.push_back(a + t[q] * (b - a));
    rule.weights.push_back(w[q] * length);
  }
  return rule;
}

std::vector<EdgeRule> edge_midpoints_and_weights(const Mesh& mesh, int order) {
  std::vector<EdgeRule> rules;
  rules.reserve(mesh.boundary_edges().size());
  const auto& verts = mesh.vertices();
  for (const BoundaryEdge& e : mesh.boundary_edges()) {
    rules.push_back(gauss_segment_rule(verts[e.vertices[0]], verts[e.vertices[1]], order));
  }
  return rules;
}

void write_mesh_text(std::ostream& os, const Mesh& mesh, std::span<const BoundaryTag> tags) {
  if (tags.size() != mesh.boundary_edges().size()) {
    throw InvalidArgument("write_mesh_text: one tag per boundary edge required");
  }
  const auto old_precision = os.precision(17);
  for (const Point2& v : mesh.vertices()) {
    os << "v " << v.x << ' ' << v.y << '\n';
  }
  for (const Triangle& t : mesh.triangles()) {
    os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  for (std::size_t e = 0; e < tags.size(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    os << "e " << edge.vertices[0] << ' ' << edge.vertices[1] << ' ' << to_string(tags[e]) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace epsreg
