#include <array>
#include <cmath>
#include <map>

#include "doctest.h"
#include "epsreg/quadrature.hpp"

using namespace epsreg;

namespace {

// Polynomial in barycentric coordinates: exponent triple -> coefficient.
using BaryPoly = std::map<std::array<int, 3>, double>;

BaryPoly multiply(const BaryPoly& a, const BaryPoly& b) {
  BaryPoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      out[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    }
  }
  return out;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact integral of x^a y^b over the triangle, using
// int l0^i l1^j l2^k = 2 A i! j! k! / (i + j + k + 2)!.
double exact_monomial(const std::array<Point2, 3>& tri, int a, int b) {
  const BaryPoly x = {{{1, 0, 0}, tri[0].x}, {{0, 1, 0}, tri[1].x}, {{0, 0, 1}, tri[2].x}};
  const BaryPoly y = {{{1, 0, 0}, tri[0].y}, {{0, 1, 0}, tri[1].y}, {{0, 0, 1}, tri[2].y}};
  BaryPoly p = {{{0, 0, 0}, 1.0}};
  for (int i = 0; i < a; ++i) p = multiply(p, x);
  for (int i = 0; i < b; ++i) p = multiply(p, y);
  const double area = 0.5 * std::abs(cross(tri[1] - tri[0], tri[2] - tri[0]));
  double sum = 0.0;
  for (const auto& [e, c] : p) {
    sum += c * 2.0 * area * factorial(e[0]) * factorial(e[1]) * factorial(e[2]) /
           factorial(e[0] + e[1] + e[2] + 2);
  }
  return sum;
}

}  // namespace

TEST_CASE("rule weights are normalised") {
  for (int degree : {1, 2, 5}) {
    const QuadratureRule r = triangle_rule(degree);
    CHECK(r.degree == degree);
    double sum = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
      sum += r.weights[q];
      const auto& l = r.barycentric[q];
      CHECK(std::abs(l[0] + l[1] + l[2] - 1.0) < 1e-15);
    }
    CHECK(std::abs(sum - 1.0) < 1e-14);
  }
  CHECK(default_rule().size() == 7);
  CHECK_THROWS_AS(triangle_rule(3), InvalidArgument);
}

TEST_CASE("each rule is exact up to its degree on arbitrary triangles") {
  const std::array<std::array<Point2, 3>, 4> triangles = {{
      {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}},
      {Point2{0.2, 0.1}, Point2{0.9, 0.3}, Point2{0.4, 0.8}},
      {Point2{0.5, 0.5}, Point2{0.50390625, 0.5}, Point2{0.50390625, 0.50390625}},
      {Point2{-1.0, 2.0}, Point2{3.0, -0.5}, Point2{1.5, 4.0}},
  }};
  for (int degree : {1, 2, 5}) {
    const QuadratureRule rule = triangle_rule(degree);
    for (const auto& tri : triangles) {
      for (int a = 0; a <= degree; ++a) {
        for (int b = 0; a + b <= degree; ++b) {
          CAPTURE(degree);
          CAPTURE(a);
          CAPTURE(b);
          const double exact = exact_monomial(tri, a, b);
          const double approx =
              integrate(tri, rule, [&](Point2 p) { return std::pow(p.x, a) * std::pow(p.y, b); });
          CHECK(std::abs(approx - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
        }
      }
    }
  }
}

TEST_CASE("the degree-5 rule is not exact at degree 6") {
  const std::array<Point2, 3> tri{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
  const double exact = exact_monomial(tri, 6, 0);
  const double approx = integrate(tri, default_rule(), [](Point2 p) { return std::pow(p.x, 6); });
  CHECK(std::abs(approx - exact) > 1e-6);
}

TEST_CASE("mapped nodes stay inside the triangle") {
  const std::array<Point2, 3> tri{Point2{0.2, 0.1}, Point2{0.9, 0.3}, Point2{0.4, 0.8}};
  for (const auto& l : default_rule().barycentric) {
    for (double v : l) CHECK(v > 0.0);
    const Point2 p = map_point(tri, l);
    CHECK(cross(tri[1] - tri[0], p - tri[0]) > 0.0);
    CHECK(cross(tri[2] - tri[1], p - tri[1]) > 0.0);
    CHECK(cross(tri[0] - tri[2], p - tri[2]) > 0.0);
  }
}
