#include "epsreg/quadrature.hpp"

#include <cmath>
#include <string>

namespace epsreg {

QuadratureRule triangle_rule(int degree) {
  QuadratureRule rule;
  switch (degree) {
    case 1:
      rule.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      rule.degree = 1;
      break;
    case 2:
      rule.barycentric = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                          {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                          {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
      rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      rule.degree = 2;
      break;
    case 5: {
      // Radon's 7-point rule.
      const double r15 = std::sqrt(15.0);
      const double a = (6.0 - r15) / 21.0;
      const double b = (6.0 + r15) / 21.0;
      const double wa = (155.0 - r15) / 1200.0;
      const double wb = (155.0 + r15) / 1200.0;
      rule.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                          {1.0 - 2.0 * a, a, a},
                          {a, 1.0 - 2.0 * a, a},
                          {a, a, 1.0 - 2.0 * a},
                          {1.0 - 2.0 * b, b, b},
                          {b, 1.0 - 2.0 * b, b},
                          {b, b, 1.0 - 2.0 * b}};
      rule.weights = {9.0 / 40.0, wa, wa, wa, wb, wb, wb};
      rule.degree = 5;
      break;
    }
    default:
      throw InvalidArgument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = triangle_rule(5);
  return rule;
}

}  // namespace epsreg
