#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "epsreg/mesh.hpp"
#include "epsreg/problem.hpp"
#include "epsreg/quadrature.hpp"
#include "epsreg/sparse.hpp"

namespace epsreg {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Local contributions of one P1 triangle, split by term. Rows index the
/// test function, columns the trial function.
struct ElementBlocks {
  Matrix3 stiffness{};  // int grad(l_j) . grad(l_i)
  Matrix3 advection{};  // int (beta . grad(l_j)) l_i
  Matrix3 reaction{};   // int mu l_j l_i
  std::array<double, 3> load{};  // int f l_i
};

struct ElementSystem {
  Matrix3 matrix{};  // epsilon K + C + M
  std::array<double, 3> load{};
};

/// Gradients of the three barycentric coordinates (constant on the triangle).
std::array<Vec2, 3> p1_gradients(const std::array<Point2, 3>& tri);

/// Throws NumericalError when |area| < 1e-14 diam^2.
ElementBlocks element_blocks(const std::array<Point2, 3>& tri, const VectorField& beta,
                             const ScalarField& mu, const ScalarField& f,
                             const QuadratureRule& rule);

/// epsilon K + C + M and the load vector for one triangle.
ElementSystem element_matrices(const std::array<Point2, 3>& tri, const VectorField& beta,
                               const ScalarField& mu, const ScalarField& f, double epsilon,
                               const QuadratureRule& rule);

/// Galerkin system restricted to the free (non-Dirichlet) vertices.
struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  /// Vertex id -> row index, or -1 for Dirichlet vertices.
  std::vector<std::ptrdiff_t> free_index;
  std::vector<VertexId> free_vertices;
  std::vector<BoundaryTag> tags;

  std::size_t dimension() const noexcept { return rhs.size(); }
  std::size_t dirichlet_count() const noexcept { return free_index.size() - free_vertices.size(); }
};

/// Vertices incident to at least one Inflow edge.
std::vector<bool> dirichlet_vertices(const Mesh& mesh, std::span<const BoundaryTag> tags);

/// Assembles -eps Lap u + beta . grad u + mu u = f with u = 0 on the inflow
/// closure and natural (zero) Neumann data elsewhere. Throws NumericalError
/// if every vertex is constrained.
SparseSystem assemble(const Mesh& mesh, const Problem& problem, double epsilon,
                      std::span<const BoundaryTag> tags,
                      const QuadratureRule& rule = default_rule());

/// Same, classifying the boundary from problem.beta with the default tolerance.
SparseSystem assemble(const Mesh& mesh, const Problem& problem, double epsilon,
                      const QuadratureRule& rule = default_rule());

/// Continuous P1 function on a mesh. The mesh must outlive the field.
class DiscreteField {
 public:
  DiscreteField(const Mesh& mesh, std::vector<double> coefficients);

  const Mesh& mesh() const noexcept { return *mesh_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  /// Gradient on triangle t (constant there).
  Vec2 gradient(std::size_t t) const;
  /// Value at barycentric coordinates inside triangle t.
  double value(std::size_t t, const std::array<double, 3>& lambda) const;

 private:
  const Mesh* mesh_;
  std::vector<double> coeffs_;
};

/// Scatters a free-vertex solution back to all vertices (Dirichlet -> 0).
DiscreteField expand_solution(const Mesh& mesh, const SparseSystem& system,
                              std::span<const double> solution);

/// Nodal interpolant of g.
DiscreteField interpolate(const Mesh& mesh, const ScalarField& g);

/// Point evaluation. Throws InvalidArgument for points outside [0,1]^2 by
/// more than 1e-12.
double evaluate(const DiscreteField& field, Point2 p);

/// |beta| h / (2 eps)
double mesh_peclet(double beta_norm, double h, double epsilon);

struct PecletReport {
  double max_peclet = 0.0;
  bool warning = false;  // max_peclet > 1
};

/// Max element Peclet number, |beta| sampled at the vertices and centroid.
PecletReport peclet_guard(const Mesh& mesh, const Problem& problem, double epsilon);

}  // namespace epsreg
