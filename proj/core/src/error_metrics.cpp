#include "epsreg/error_metrics.hpp"

#include <cmath>

namespace epsreg {

std::optional<double> ErrorRecord::get(NormKind norm) const {
  switch (norm) {
    case NormKind::L2Domain:
      return l2_domain;
    case NormKind::L2GammaPlus:
      return l2_gamma_plus;
    case NormKind::H1Semi:
      return h1_semi;
    case NormKind::L2Gamma0:
      return l2_gamma0;
  }
  return std::nullopt;
}

double l2_domain_error(const DiscreteField& field, const Problem& problem,
                       const QuadratureRule& rule) {
  const Mesh& mesh = field.mesh();
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const double area = mesh.triangle_area(t);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double d = problem.u_exact(map_point(tri, rule.barycentric[q])) -
                       field.value(t, rule.barycentric[q]);
      local += rule.weights[q] * d * d;
    }
    sum += area * local;
  }
  return std::sqrt(sum);
}

double h1_semi_error(const DiscreteField& field, const Problem& problem,
                     const QuadratureRule& rule) {
  const Mesh& mesh = field.mesh();
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const Vec2 gh = field.gradient(t);
    sum += integrate(tri, rule, [&](Point2 x) {
      const Vec2 d = problem.grad_u_exact(x) - gh;
      return dot(d, d);
    });
  }
  return std::sqrt(sum);
}

namespace {

// sum over edges with the given tag of int (u - u_h)^2 weight ds; nullopt if none.
template <class Weight>
std::optional<double> boundary_error(const DiscreteField& field, const Problem& problem,
                                     std::span<const BoundaryTag> tags, BoundaryTag which,
                                     int edge_order, Weight&& weight) {
  const Mesh& mesh = field.mesh();
  if (tags.size() != mesh.boundary_edges().size()) {
    throw InvalidArgument("boundary error: one tag per boundary edge required");
  }
  const auto& verts = mesh.vertices();
  const auto coeffs = field.coefficients();
  bool any = false;
  double sum = 0.0;
  for (std::size_t e = 0; e < tags.size(); ++e) {
    if (tags[e] != which) continue;
    any = true;
    const BoundaryEdge& edge = mesh.boundary_edges()[e];
    const Point2 a = verts[edge.vertices[0]];
    const Point2 b = verts[edge.vertices[1]];
    const EdgeRule rule = gauss_segment_rule(a, b, edge_order);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Point2 x = rule.nodes[q];
      const double t = norm(x - a) / edge.length;
      const double uh = (1.0 - t) * coeffs[edge.vertices[0]] + t * coeffs[edge.vertices[1]];
      const double d = problem.u_exact(x) - uh;
      sum += rule.weights[q] * d * d * weight(x, edge);
    }
  }
  if (!any) return std::nullopt;
  return std::sqrt(sum);
}

}  // namespace

std::optional<double> weighted_outflow_error(const DiscreteField& field, const Problem& problem,
                                             std::span<const BoundaryTag> tags, int edge_order) {
  return boundary_error(field, problem, tags, BoundaryTag::Outflow, edge_order,
                        [&](Point2 x, const BoundaryEdge& e) { return dot(problem.beta(x), e.normal); });
}

std::optional<double> characteristic_error(const DiscreteField& field, const Problem& problem,
                                           std::span<const BoundaryTag> tags, int edge_order) {
  return boundary_error(field, problem, tags, BoundaryTag::Characteristic, edge_order,
                        [](Point2, const BoundaryEdge&) { return 1.0; });
}

ErrorRecord compute_errors(const DiscreteField& field, const Problem& problem,
                           std::span<const BoundaryTag> tags, double epsilon, double residual) {
  ErrorRecord rec;
  rec.epsilon = epsilon;
  rec.l2_domain = l2_domain_error(field, problem);
  rec.l2_gamma_plus = weighted_outflow_error(field, problem, tags);
  rec.h1_semi = h1_semi_error(field, problem);
  rec.l2_gamma0 = characteristic_error(field, problem, tags);
  rec.residual = residual;
  return rec;
}

}  // namespace epsreg
