#include <cmath>
#include <random>

#include "doctest.h"
#include "epsreg/mesh.hpp"
#include "epsreg/problem.hpp"

using namespace epsreg;

namespace {

std::vector<Problem> registry_variants() {
  std::vector<Problem> out;
  for (double s : {0.3, 0.51, 0.9, 1.0, 2.0, 4.0}) {
    out.push_back(registry_get("example1", {{"s", s}}));
    out.push_back(registry_get("example4", {{"s", s}}));
  }
  out.push_back(registry_get("example2"));
  out.push_back(registry_get("example3"));
  return out;
}

// Residual of the first-order equation with the gradient taken by central
// differences of u_exact, independent of grad_u_exact.
double fd_residual(const Problem& p, Point2 x) {
  constexpr double h = 1e-5;
  const double ux = (p.u_exact({x.x + h, x.y}) - p.u_exact({x.x - h, x.y})) / (2 * h);
  const double uy = (p.u_exact({x.x, x.y + h}) - p.u_exact({x.x, x.y - h})) / (2 * h);
  return p.f(x) - (dot(p.beta(x), Vec2{ux, uy}) + p.mu(x) * p.u_exact(x));
}

}  // namespace

TEST_CASE("manufactured solutions satisfy the first-order equation") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(1e-3, 1.0 - 1e-3);
  for (const Problem& p : registry_variants()) {
    CAPTURE(p.label);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Point2 x{unit(rng), unit(rng)};
      const double r = p.f(x) - (dot(p.beta(x), p.grad_u_exact(x)) + p.mu(x) * p.u_exact(x));
      worst = std::max(worst, std::abs(r));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("closed-form gradients agree with finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (const Problem& p : registry_variants()) {
    CAPTURE(p.label);
    for (int i = 0; i < 50; ++i) {
      CHECK(std::abs(fd_residual(p, {unit(rng), unit(rng)})) < 1e-6);
    }
  }
}

TEST_CASE("exact solutions vanish on inflow edges") {
  const Mesh mesh = build_unit_square_mesh(32);
  const auto rules = edge_midpoints_and_weights(mesh, 3);
  for (const Problem& p : registry_variants()) {
    CAPTURE(p.label);
    const auto tags = classify_boundary(mesh, p.beta);
    std::size_t inflow = 0;
    for (std::size_t e = 0; e < tags.size(); ++e) {
      if (tags[e] != BoundaryTag::Inflow) continue;
      ++inflow;
      for (const Point2& x : rules[e].nodes) REQUIRE(std::abs(p.u_exact(x)) < 1e-10);
    }
    CHECK(inflow > 0);
  }
}

TEST_CASE("example 2 residual at (0.3, 0.7)") {
  const Problem p = registry_get("example2");
  const Point2 x{0.3, 0.7};
  CHECK(p.f(x) == doctest::Approx(0.3 * 0.7 + 0.7));
  CHECK(std::abs(p.f(x) - (dot(p.beta(x), p.grad_u_exact(x)) + p.mu(x) * p.u_exact(x))) < 1e-15);
}

TEST_CASE("example 3 vanishes on the left edge") {
  const Problem p = registry_get("example3");
  for (double y : {0.0, 0.25, 0.5, 1.0}) CHECK(p.u_exact({0.0, y}) == 0.0);
}

TEST_CASE("example 4 source at (0.5, 0.5), s = 2, against a finite-difference oracle") {
  const Problem p = registry_get("example4", {{"s", 2.0}});
  // beta_s and u written out independently of the registry.
  auto u = [](double x, double y) { return (std::exp(x) - 1.0) * std::sin(y); };
  const double x = 0.5, y = 0.5, h = 1e-5;
  const double bx = 1.0 - x + (1.0 - y) * (1.0 - y);
  const double by = 1.0 + y;
  const double ux = (u(x + h, y) - u(x - h, y)) / (2 * h);
  const double uy = (u(x, y + h) - u(x, y - h)) / (2 * h);
  const double oracle = bx * ux + by * uy + u(x, y);
  CHECK(p.f({x, y}) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("registry rejects unknown labels and nonpositive s") {
  CHECK_THROWS_AS(registry_get("nosuch"), InvalidArgument);
  CHECK_THROWS_AS(registry_get("example1", {{"s", 0.0}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("example1", {{"s", -1.0}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("example4", {{"s", -2.0}}), InvalidArgument);
  CHECK(registry_get("example1").params.at("s") == 0.51);
}

TEST_CASE("regularized problem requires positive epsilon") {
  CHECK_THROWS_AS(RegularizedProblem(registry_get("example2"), 0.0), InvalidArgument);
  CHECK_THROWS_AS(RegularizedProblem(registry_get("example2"), -1.0), InvalidArgument);
  const RegularizedProblem rp(registry_get("example2"), 0.5);
  CHECK(rp.epsilon() == 0.5);
  CHECK(rp.problem().label == "example2");
}

TEST_CASE("coercivity constants") {
  CHECK(coercivity_constant(registry_get("example1")) == doctest::Approx(0.5));
  CHECK(coercivity_constant(registry_get("example2")) == doctest::Approx(1.0));
  CHECK(coercivity_constant(registry_get("example3")) == doctest::Approx(1.0));
  CHECK(coercivity_constant(registry_get("example4")) == doctest::Approx(1.0));
  for (double s : {0.3, 0.51, 0.9, 1.0, 2.0, 4.0}) {
    CHECK(coercivity_constant(registry_get("example1", {{"s", s}})) > 0.0);
    CHECK(coercivity_constant(registry_get("example4", {{"s", s}})) > 0.0);
  }
}

TEST_CASE("finite-difference divergence matches the closed forms") {
  for (Problem p : registry_variants()) {
    CAPTURE(p.label);
    const double closed = divergence(p, {0.4, 0.6});
    p.div_beta = nullptr;
    CHECK(divergence(p, {0.4, 0.6}) == doctest::Approx(closed).epsilon(1e-6));
  }
}

TEST_CASE("coercivity violation is signalled") {
  Problem p = registry_get("example2");
  p.beta = [](Point2 x) { return Vec2{3.0 * x.x, 0.0}; };
  p.div_beta = nullptr;
  CHECK_THROWS_AS(coercivity_constant(p), NumericalError);
  CHECK_THROWS_AS(coercivity_constant(p, 0), InvalidArgument);
}

TEST_CASE("alpha is the reciprocal of s") {
  CHECK(alpha_of_s(2.0) == 0.5);
  CHECK(alpha_of_s(1.0) == 1.0);
  CHECK(alpha_of_s(4.0) == 0.25);
  CHECK_THROWS_AS(alpha_of_s(0.0), InvalidArgument);
}

TEST_CASE("expected rates") {
  CHECK(expected_rate("example2", NormKind::L2Domain) == 0.75);
  CHECK(expected_rate("example2", NormKind::L2GammaPlus) == 0.75);
  CHECK(expected_rate("example2", NormKind::H1Semi) == 0.25);
  CHECK(expected_rate("example2", NormKind::L2Gamma0) == 0.5);

  CHECK(expected_rate("example1", NormKind::L2Domain, {{"s", 0.51}}) == 0.5);
  CHECK(expected_rate("example1", NormKind::L2GammaPlus, {{"s", 0.51}}) == 0.5);
  CHECK(expected_rate("example1", NormKind::H1Semi, {{"s", 0.51}}) == 0.0);
  CHECK(expected_rate("example1", NormKind::L2Gamma0, {{"s", 0.51}}) == 0.25);
  CHECK(expected_rate("example1", NormKind::L2Domain, {{"s", 2.0}}) == 0.75);
  CHECK_THROWS_AS(expected_rate("example1", NormKind::L2Domain, {{"s", 0.3}}), InvalidArgument);

  CHECK(expected_rate("example3", NormKind::L2Domain) == 1.0);
  CHECK(expected_rate("example3", NormKind::H1Semi) == 0.5);
  CHECK_THROWS_AS(expected_rate("example3", NormKind::L2Gamma0), InvalidArgument);

  CHECK(expected_rate("example4", NormKind::L2Domain, {{"s", 1.0}}) == 1.0);
  CHECK(expected_rate("example4", NormKind::L2Domain, {{"s", 4.0}}) == 0.8125);
  CHECK(expected_rate("example4", NormKind::L2Domain, {{"s", 2.0}}) == 0.875);
  CHECK(expected_rate("example4", NormKind::L2Domain, {{"s", 0.8}}) == 1.0);
  CHECK(expected_rate("example4", NormKind::H1Semi, {{"s", 2.0}}) == 0.375);
  CHECK_THROWS_AS(expected_rate("example4", NormKind::L2Gamma0, {{"s", 2.0}}), InvalidArgument);

  CHECK_THROWS_AS(expected_rate("nosuch", NormKind::L2Domain), InvalidArgument);
}

TEST_CASE("norm names round-trip") {
  for (NormKind n : kAllNorms) CHECK(norm_from_string(to_string(n)) == n);
  CHECK_THROWS_AS(norm_from_string("linf"), InvalidArgument);
}
