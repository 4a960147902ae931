#pragma once

#include <array>
#include <vector>

#include "epsreg/types.hpp"

namespace epsreg {

/// Quadrature on a triangle in barycentric form. Weights are normalised to
/// sum to 1, so an integral is area * sum_q w_q g(x_q).
struct QuadratureRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Symmetric rule exact for polynomials of the given degree. Supported
/// degrees: 1 (centroid), 2 (3 points), 5 (7 points).
QuadratureRule triangle_rule(int degree);

/// 7-point degree-5 rule used for assembly and error norms.
const QuadratureRule& default_rule();

inline Point2 map_point(const std::array<Point2, 3>& tri, const std::array<double, 3>& lambda) {
  return {lambda[0] * tri[0].x + lambda[1] * tri[1].x + lambda[2] * tri[2].x,
          lambda[0] * tri[0].y + lambda[1] * tri[1].y + lambda[2] * tri[2].y};
}

/// Integral of g over the triangle with the given rule.
template <class F>
double integrate(const std::array<Point2, 3>& tri, const QuadratureRule& rule, F&& g) {
  const double area = 0.5 * std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    sum += rule.weights[q] * g(map_point(tri, rule.barycentric[q]));
  }
  return area * sum;
}

}  // namespace epsreg
