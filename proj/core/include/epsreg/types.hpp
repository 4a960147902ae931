#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace epsreg {

/// Point or vector in the plane.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point2 = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Invalid input to a library operation (bad parameter, unknown label, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve failure. `index` is the failing pivot/row when known, else -1.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, long index = -1)
      : NumericalError(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

}  // namespace epsreg
