#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "epsreg/types.hpp"

namespace epsreg {

using VertexId = std::size_t;
using Triangle = std::array<VertexId, 3>;

struct BoundaryEdge {
  std::array<VertexId, 2> vertices;
  Vec2 normal;  // outward, unit length
  double length = 0.0;
  std::size_t triangle = 0;  // the single triangle owning this edge
};

/// Location of a point inside a triangle.
struct PointLocation {
  std::size_t triangle = 0;
  std::array<double, 3> barycentric{};
};

/// Structured right-triangle mesh of the unit square. Every grid cell is
/// split along its lower-left to upper-right diagonal; triangles are stored
/// counterclockwise. Immutable after construction.
class Mesh {
 public:
  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return edges_; }

  std::size_t n_cells() const noexcept { return n_cells_; }
  /// Max triangle diameter, sqrt(2) / n_cells.
  double h() const noexcept { return h_; }

  std::size_t vertex_id(std::size_t i, std::size_t j) const noexcept {
    return j * (n_cells_ + 1) + i;
  }

  std::array<Point2, 3> triangle_points(std::size_t t) const;
  double triangle_area(std::size_t t) const;
  double triangle_diameter(std::size_t t) const;

  /// Finds the triangle containing `p` (points within `tol` outside the
  /// square are clamped onto it). Returns nullopt beyond the tolerance.
  std::optional<PointLocation> locate(Point2 p, double tol = 1e-12) const;

 private:
  friend Mesh build_unit_square_mesh(std::size_t n_cells);

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> edges_;
  std::size_t n_cells_ = 0;
  double h_ = 0.0;
};

/// (n+1)^2 vertices, 2n^2 triangles, 4n boundary edges. Throws
/// InvalidArgument for n_cells == 0.
Mesh build_unit_square_mesh(std::size_t n_cells);

enum class BoundaryTag { Inflow, Outflow, Characteristic };

std::string_view to_string(BoundaryTag tag);

using VectorField = std::function<Vec2(Point2)>;
using ScalarField = std::function<double(Point2)>;

inline constexpr double kDefaultClassifyTol = 1e-12;

/// Tags each boundary edge by the sign of beta . n at its midpoint:
/// Outflow if > tol, Inflow if < -tol, Characteristic otherwise.
std::vector<BoundaryTag> classify_boundary(const Mesh& mesh, const VectorField& beta,
                                           double tol = kDefaultClassifyTol);

/// Gauss-Legendre nodes and weights along one boundary edge.
struct EdgeRule {
  std::vector<Point2> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` points (2 or 3) on the segment [a, b].
EdgeRule gauss_segment_rule(Point2 a, Point2 b, int order);

/// One rule per boundary edge, in boundary-edge order.
std::vector<EdgeRule> edge_midpoints_and_weights(const Mesh& mesh, int order);

/// Plain-text dump: "v x y", "t i j k", "e i j TAG" lines.
void write_mesh_text(std::ostream& os, const Mesh& mesh, std::span<const BoundaryTag> tags);

}  // namespace epsreg
