#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "epsreg/error_metrics.hpp"
#include "epsreg/fem.hpp"
#include "epsreg/solver.hpp"
#include "epsreg/sweep.hpp"

using namespace epsreg;

namespace {

const std::array<Point2, 3> kUnitTriangle{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};

ScalarField constant(double c) {
  return [c](Point2) { return c; };
}
VectorField constant(Vec2 c) {
  return [c](Point2) { return c; };
}

void check_matrix(const Matrix3& got, const Matrix3& want) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(got[i][j] - want[i][j]) < 1e-12);
    }
  }
}

// beta = (1,1), mu = 1, u = sin(pi x/2) sin(pi y/2): zero on the inflow
// sides and zero normal derivative on the outflow sides, so it solves the
// regularized problem exactly for the matching source.
Problem manufactured_regularized(double eps) {
  constexpr double k = std::numbers::pi / 2.0;
  Problem p;
  p.label = "manufactured";
  p.beta = constant(Vec2{1.0, 1.0});
  p.mu = constant(1.0);
  p.div_beta = constant(0.0);
  p.u_exact = [](Point2 x) { return std::sin(k * x.x) * std::sin(k * x.y); };
  p.grad_u_exact = [](Point2 x) {
    return Vec2{k * std::cos(k * x.x) * std::sin(k * x.y), k * std::sin(k * x.x) * std::cos(k * x.y)};
  };
  p.f = [eps](Point2 x) {
    const double u = std::sin(k * x.x) * std::sin(k * x.y);
    const double adv = k * (std::cos(k * x.x) * std::sin(k * x.y) + std::sin(k * x.x) * std::cos(k * x.y));
    return eps * 2.0 * k * k * u + adv + u;
  };
  return p;
}

double quadratic_form(const CsrMatrix& a, const std::vector<double>& x) {
  const auto ax = a.multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * ax[i];
  return s;
}

}  // namespace

TEST_CASE("P1 stiffness block of the unit right triangle") {
  const auto el = element_matrices(kUnitTriangle, constant(Vec2{0, 0}), constant(0.0),
                                   constant(0.0), 1.0, default_rule());
  check_matrix(el.matrix, {{{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}}});
}

TEST_CASE("P1 mass block of the unit right triangle") {
  const auto el = element_matrices(kUnitTriangle, constant(Vec2{0, 0}), constant(1.0),
                                   constant(0.0), 0.0, default_rule());
  const double d = 2.0 / 24.0, o = 1.0 / 24.0;
  check_matrix(el.matrix, {{{d, o, o}, {o, d, o}, {o, o, d}}});
}

TEST_CASE("P1 advection block of the unit right triangle") {
  const auto el = element_matrices(kUnitTriangle, constant(Vec2{1, 0}), constant(0.0),
                                   constant(0.0), 0.0, default_rule());
  const double s = 1.0 / 6.0;
  check_matrix(el.matrix, {{{-s, s, 0.0}, {-s, s, 0.0}, {-s, s, 0.0}}});
}

TEST_CASE("element load of a constant source is area / 3 per vertex") {
  const auto el = element_matrices(kUnitTriangle, constant(Vec2{0, 0}), constant(0.0),
                                   constant(3.0), 1.0, default_rule());
  for (double v : el.load) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("degenerate triangles are rejected") {
  const std::array<Point2, 3> flat{Point2{0, 0}, Point2{1, 0}, Point2{2, 1e-16}};
  CHECK_THROWS_AS(element_matrices(flat, constant(Vec2{0, 0}), constant(1.0), constant(0.0), 1.0,
                                   default_rule()),
                  NumericalError);
}

TEST_CASE("Dirichlet sets and system dimensions on the 2x2 mesh") {
  const Mesh mesh = build_unit_square_mesh(2);
  SUBCASE("example3: bottom and left, corners included") {
    const SparseSystem sys = assemble(mesh, registry_get("example3"), 1.0);
    CHECK(sys.dirichlet_count() == 5);
    CHECK(sys.dimension() == 4);
    for (std::size_t i = 0; i <= 2; ++i) {
      CHECK(sys.free_index[mesh.vertex_id(i, 0)] == -1);
      CHECK(sys.free_index[mesh.vertex_id(0, i)] == -1);
    }
  }
  SUBCASE("example1: bottom edge only") {
    const SparseSystem sys = assemble(mesh, registry_get("example1"), 1.0);
    CHECK(sys.dirichlet_count() == 3);
    CHECK(sys.dimension() == 6);
  }
}

TEST_CASE("assembled matrices are well-formed CSR without empty rows") {
  const Mesh mesh = build_unit_square_mesh(8);
  for (const auto& label : registry_labels()) {
    const SparseSystem sys = assemble(mesh, registry_get(label), 0.01);
    CHECK(sys.matrix.is_well_formed());
    CHECK(sys.matrix.rows() == sys.dimension());
    CHECK(sys.dimension() == mesh.vertices().size() - sys.dirichlet_count());
    for (std::size_t r = 0; r < sys.matrix.rows(); ++r) {
      REQUIRE(sys.matrix.row_ptr()[r + 1] > sys.matrix.row_ptr()[r]);
    }
  }
}

TEST_CASE("assembly rejects nonpositive epsilon and all-constrained meshes") {
  const Mesh mesh = build_unit_square_mesh(2);
  CHECK_THROWS_AS(assemble(mesh, registry_get("example2"), 0.0), InvalidArgument);
  const std::vector<BoundaryTag> all_inflow(mesh.boundary_edges().size(), BoundaryTag::Inflow);
  const Mesh tiny = build_unit_square_mesh(1);
  const std::vector<BoundaryTag> tiny_inflow(4, BoundaryTag::Inflow);
  CHECK_THROWS_AS(assemble(tiny, registry_get("example2"), 1.0, tiny_inflow), NumericalError);
  CHECK(assemble(mesh, registry_get("example2"), 1.0, all_inflow).dimension() == 1);
}

TEST_CASE("assembly is deterministic") {
  const Mesh mesh = build_unit_square_mesh(16);
  const SparseSystem a = assemble(mesh, registry_get("example4"), 0.05);
  const SparseSystem b = assemble(mesh, registry_get("example4"), 0.05);
  CHECK(std::equal(a.matrix.values().begin(), a.matrix.values().end(), b.matrix.values().begin()));
  CHECK(a.rhs == b.rhs);
}

TEST_CASE("assembled operators are positive: x^T A x > 0") {
  const Mesh mesh = build_unit_square_mesh(8);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::vector<Problem> problems = {registry_get("example1", {{"s", 0.51}}),
                                   registry_get("example1", {{"s", 0.3}}), registry_get("example2"),
                                   registry_get("example3"), registry_get("example4", {{"s", 2.0}})};
  for (const Problem& p : problems) {
    for (double eps : {1.0, 0.01}) {
      CAPTURE(p.label);
      CAPTURE(eps);
      const SparseSystem sys = assemble(mesh, p, eps);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(sys.dimension());
        for (double& v : x) v = gauss(rng);
        REQUIRE(quadratic_form(sys.matrix, x) > 0.0);
      }
    }
  }
}

TEST_CASE("patch test: constants solve the pure Neumann reaction-diffusion problem") {
  const Mesh mesh = build_unit_square_mesh(8);
  Problem p;
  p.label = "patch";
  p.beta = constant(Vec2{0.0, 0.0});
  p.mu = constant(1.0);
  p.f = constant(2.5);
  p.u_exact = constant(2.5);
  p.grad_u_exact = constant(Vec2{0.0, 0.0});
  const SparseSystem sys = assemble(mesh, p, 1.0);
  REQUIRE(sys.dirichlet_count() == 0);
  const std::vector<double> c(sys.dimension(), 2.5);
  const auto ac = sys.matrix.multiply(c);
  for (std::size_t i = 0; i < ac.size(); ++i) CHECK(std::abs(ac[i] - sys.rhs[i]) < 1e-12);
}

TEST_CASE("Galerkin residual after the direct solve") {
  const Mesh mesh = build_unit_square_mesh(32);
  for (const auto& label : registry_labels()) {
    const SparseSystem sys = assemble(mesh, registry_get(label), 0.02);
    const SolveReport rep = solve_direct(sys);
    CHECK(relative_residual_inf(sys.matrix, rep.solution, sys.rhs) < 1e-9);
  }
}

TEST_CASE("second-order h-convergence at epsilon = 1") {
  const Problem p = manufactured_regularized(1.0);
  std::vector<double> hs, errs;
  for (std::size_t n : {16, 32, 64, 128}) {
    const Mesh mesh = build_unit_square_mesh(n);
    const SparseSystem sys = assemble(mesh, p, 1.0);
    const SolveReport rep = solve_direct(sys);
    const DiscreteField uh = expand_solution(mesh, sys, rep.solution);
    hs.push_back(mesh.h());
    errs.push_back(l2_domain_error(uh, p));
  }
  const RateFit fit = fit_log_log(hs, errs);
  MESSAGE("observed L2 order " << fit.rate);
  CHECK(fit.rate >= 1.9);
}

TEST_CASE("P1 evaluation") {
  const Mesh mesh = build_unit_square_mesh(4);
  SUBCASE("affine data is reproduced") {
    const DiscreteField f = interpolate(mesh, [](Point2 x) { return x.x; });
    CHECK(evaluate(f, {0.25, 0.6}) == doctest::Approx(0.25).epsilon(1e-15));
    const DiscreteField g = interpolate(mesh, [](Point2 x) { return 2.0 * x.x - 3.0 * x.y + 1.0; });
    CHECK(evaluate(g, {0.37, 0.81}) == doctest::Approx(2.0 * 0.37 - 3.0 * 0.81 + 1.0));
    for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
      CHECK(g.gradient(t).x == doctest::Approx(2.0));
      CHECK(g.gradient(t).y == doctest::Approx(-3.0));
    }
  }
  SUBCASE("constants") {
    const DiscreteField one(mesh, std::vector<double>(mesh.vertices().size(), 1.0));
    for (Point2 p : {Point2{0, 0}, Point2{0.3, 0.9}, Point2{1, 1}, Point2{0.71, 0.2}}) {
      CHECK(evaluate(one, p) == doctest::Approx(1.0));
    }
  }
  SUBCASE("vertex queries return the coefficient") {
    std::vector<double> c(mesh.vertices().size());
    for (std::size_t v = 0; v < c.size(); ++v) c[v] = std::sin(static_cast<double>(v));
    const DiscreteField f(mesh, c);
    for (std::size_t v = 0; v < c.size(); ++v) {
      CHECK(evaluate(f, mesh.vertices()[v]) == doctest::Approx(c[v]).epsilon(1e-14));
    }
  }
  SUBCASE("outside the domain") {
    const DiscreteField f = interpolate(mesh, [](Point2) { return 0.0; });
    CHECK_THROWS_AS(evaluate(f, {1.01, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(evaluate(f, {0.5, -0.1}), InvalidArgument);
  }
  SUBCASE("coefficient count must match") {
    CHECK_THROWS_AS(DiscreteField(mesh, std::vector<double>(3)), InvalidArgument);
  }
}

TEST_CASE("Peclet numbers") {
  CHECK(mesh_peclet(std::sqrt(2.0), 0.01, 0.1) == doctest::Approx(0.0707).epsilon(1e-3));
  // The published grid's smallest epsilon at h = 0.002.
  const double pe = mesh_peclet(1.0, 0.002, std::pow(1.6, -14));
  CHECK(pe == doctest::Approx(0.7206).epsilon(1e-3));
  CHECK(pe < 1.0);
  CHECK(mesh_peclet(1.0, 0.002, 0.00144) == doctest::Approx(0.694).epsilon(1e-3));
  CHECK(mesh_peclet(1.0, 0.01, 1e12) < 1e-13);

  const Mesh mesh = build_unit_square_mesh(64);
  const PecletReport small = peclet_guard(mesh, registry_get("example3"), 0.1);
  CHECK(small.max_peclet == doctest::Approx(1.0 / (64 * 0.1)));
  CHECK_FALSE(small.warning);
  const PecletReport big = peclet_guard(mesh, registry_get("example3"), 1e-3);
  CHECK(big.warning);
}
