#include "epsreg/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace epsreg {

std::array<Vec2, 3> p1_gradients(const std::array<Point2, 3>& tri) {
  const auto& [p0, p1, p2] = tri;
  const double two_area = cross(p1 - p0, p2 - p0);
  const double inv = 1.0 / two_area;
  return {Vec2{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv},
          Vec2{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
          Vec2{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
}

ElementBlocks element_blocks(const std::array<Point2, 3>& tri, const VectorField& beta,
                             const ScalarField& mu, const ScalarField& f,
                             const QuadratureRule& rule) {
  const double area = 0.5 * std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
  const double diam =
      std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
  if (!(area >= 1e-14 * diam * diam) || diam == 0.0) {
    throw NumericalError("degenerate triangle (area " + std::to_string(area) + ")");
  }
  const auto grads = p1_gradients(tri);

  ElementBlocks blocks;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) blocks.stiffness[i][j] = area * dot(grads[i], grads[j]);
  }

  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& lambda = rule.barycentric[q];
    const Point2 x = map_point(tri, lambda);
    const double w = area * rule.weights[q];
    const Vec2 b = beta(x);
    const double m = mu(x);
    const double fx = f(x);
    std::array<double, 3> b_dot_grad{};
    for (int j = 0; j < 3; ++j) b_dot_grad[j] = dot(b, grads[j]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        blocks.advection[i][j] += w * b_dot_grad[j] * lambda[i];
        blocks.reaction[i][j] += w * m * lambda[j] * lambda[i];
      }
      blocks.load[i] += w * fx * lambda[i];
    }
  }
  return blocks;
}

ElementSystem element_matrices(const std::array<Point2, 3>& tri, const VectorField& beta,
                               const ScalarField& mu, const ScalarField& f, double epsilon,
                               const QuadratureRule& rule) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("element_matrices: epsilon must be >= 0");
  const ElementBlocks b = element_blocks(tri, beta, mu, f, rule);
  ElementSystem sys;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      sys.matrix[i][j] = epsilon * b.stiffness[i][j] + b.advection[i][j] + b.reaction[i][j];
    }
  }
  sys.load = b.load;
  return sys;
}

std::vector<bool> dirichlet_vertices(const Mesh& mesh, std::span<const BoundaryTag> tags) {
  if (tags.size() != mesh.boundary_edges().size()) {
    throw InvalidArgument("dirichlet_vertices: one tag per boundary edge required");
  }
  std::vector<bool> fixed(mesh.vertices().size(), false);
  for (std::size_t e = 0; e < tags.size(); ++e) {
    if (tags[e] != BoundaryTag::Inflow) continue;
    for (VertexId v : mesh.boundary_edges()[e].vertices) fixed[v] = true;
  }
  return fixed;
}

SparseSystem assemble(const Mesh& mesh, const Problem& problem, double epsilon,
                      std::span<const BoundaryTag> tags, const QuadratureRule& rule) {
  if (!(epsilon > 0.0)) throw InvalidArgument("assemble: epsilon must be positive");
  const std::vector<bool> fixed = dirichlet_vertices(mesh, tags);

  SparseSystem sys;
  sys.tags.assign(tags.begin(), tags.end());
  sys.free_index.assign(mesh.vertices().size(), -1);
  for (VertexId v = 0; v < mesh.vertices().size(); ++v) {
    if (!fixed[v]) {
      sys.free_index[v] = static_cast<std::ptrdiff_t>(sys.free_vertices.size());
      sys.free_vertices.push_back(v);
    }
  }
  const std::size_t n = sys.free_vertices.size();
  if (n == 0) throw NumericalError("assemble: every vertex is constrained");

  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.triangles().size());
  sys.rhs.assign(n, 0.0);
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    const ElementSystem el = element_matrices(mesh.triangle_points(t), problem.beta, problem.mu,
                                              problem.f, epsilon, rule);
    for (int i = 0; i < 3; ++i) {
      const std::ptrdiff_t row = sys.free_index[tri[i]];
      if (row < 0) continue;
      sys.rhs[static_cast<std::size_t>(row)] += el.load[i];
      for (int j = 0; j < 3; ++j) {
        // Homogeneous Dirichlet data: constrained columns drop out.
        const std::ptrdiff_t col = sys.free_index[tri[j]];
        if (col < 0) continue;
        triplets.push_back({static_cast<std::size_t>(row), static_cast<std::size_t>(col),
                            el.matrix[i][j]});
      }
    }
  }
  sys.matrix = CsrMatrix::from_triplets(n, n, std::move(triplets));
  return sys;
}

SparseSystem assemble(const Mesh& mesh, const Problem& problem, double epsilon,
                      const QuadratureRule& rule) {
  const auto tags = classify_boundary(mesh, problem.beta);
  return assemble(mesh, problem, epsilon, tags, rule);
}

DiscreteField::DiscreteField(const Mesh& mesh, std::vector<double> coefficients)
    : mesh_(&mesh), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != mesh.vertices().size()) {
    throw InvalidArgument("DiscreteField: one coefficient per vertex required");
  }
}

Vec2 DiscreteField::gradient(std::size_t t) const {
  const Triangle& tri = mesh_->triangles()[t];
  const auto grads = p1_gradients(mesh_->triangle_points(t));
  Vec2 g;
  for (int i = 0; i < 3; ++i) g = g + coeffs_[tri[i]] * grads[i];
  return g;
}

double DiscreteField::value(std::size_t t, const std::array<double, 3>& lambda) const {
  const Triangle& tri = mesh_->triangles()[t];
  return lambda[0] * coeffs_[tri[0]] + lambda[1] * coeffs_[tri[1]] + lambda[2] * coeffs_[tri[2]];
}

DiscreteField expand_solution(const Mesh& mesh, const SparseSystem& system,
                              std::span<const double> solution) {
  if (solution.size() != system.dimension()) {
    throw InvalidArgument("expand_solution: solution size does not match the system");
  }
  std::vector<double> coeffs(mesh.vertices().size(), 0.0);
  for (std::size_t k = 0; k < system.free_vertices.size(); ++k) {
    coeffs[system.free_vertices[k]] = solution[k];
  }
  return DiscreteField(mesh, std::move(coeffs));
}

DiscreteField interpolate(const Mesh& mesh, const ScalarField& g) {
  std::vector<double> coeffs;
  coeffs.reserve(mesh.vertices().size());
  for (const Point2& v : mesh.vertices()) coeffs.push_back(g(v));
  return DiscreteField(mesh, std::move(coeffs));
}

double evaluate(const DiscreteField& field, Point2 p) {
  const auto loc = field.mesh().locate(p);
  if (!loc) {
    throw InvalidArgument("evaluate: point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the domain");
  }
  return field.value(loc->triangle, loc->barycentric);
}

double mesh_peclet(double beta_norm, double h, double epsilon) {
  return beta_norm * h / (2.0 * epsilon);
}

PecletReport peclet_guard(const Mesh& mesh, const Problem& problem, double epsilon) {
  PecletReport report;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto pts = mesh.triangle_points(t);
    const Point2 centroid = (1.0 / 3.0) * (pts[0] + pts[1] + pts[2]);
    double bmax = norm(problem.beta(centroid));
    for (const Point2& p : pts) bmax = std::max(bmax, norm(problem.beta(p)));
    report.max_peclet =
        std::max(report.max_peclet, mesh_peclet(bmax, mesh.triangle_diameter(t), epsilon));
  }
  report.warning = report.max_peclet > 1.0;
  return report;
}

}  // namespace epsreg
