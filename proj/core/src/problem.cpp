#include "epsreg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace epsreg {

namespace {

double param_s(std::string_view label, const ProblemParams& params) {
  const auto it = params.find("s");
  const double s = (it == params.end()) ? default_s(label) : it->second;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("parameter s must be positive (got " + std::to_string(s) + ")");
  }
  return s;
}

double one(Point2) { return 1.0; }

// beta = (x1, 1), u = (1 + x1^s) x2
Problem make_example1(double s) {
  Problem p;
  p.label = "example1";
  p.params = {{"s", s}};
  p.beta = [](Point2 x) { return Vec2{x.x, 1.0}; };
  p.mu = one;
  p.f = [s](Point2 x) {
    const double xs = std::pow(x.x, s);
    return (s + 1.0) * xs * x.y + xs + x.y + 1.0;
  };
  p.u_exact = [s](Point2 x) { return (1.0 + std::pow(x.x, s)) * x.y; };
  p.grad_u_exact = [s](Point2 x) {
    // x1^(s-1) is unbounded at x1 = 0 for s < 1; the trace is never sampled there.
    const double dx = (x.x > 0.0) ? s * std::pow(x.x, s - 1.0) * x.y : 0.0;
    return Vec2{dx, 1.0 + std::pow(x.x, s)};
  };
  p.div_beta = one;
  return p;
}

// beta = (1, 0), u = x1 x2
Problem make_example2() {
  Problem p;
  p.label = "example2";
  p.beta = [](Point2) { return Vec2{1.0, 0.0}; };
  p.mu = one;
  p.f = [](Point2 x) { return x.x * x.y + x.y; };
  p.u_exact = [](Point2 x) { return x.x * x.y; };
  p.grad_u_exact = [](Point2 x) { return Vec2{x.y, x.x}; };
  p.div_beta = [](Point2) { return 0.0; };
  return p;
}

// beta = (1, 1), u = x2 sin(4 x1)
Problem make_example3() {
  Problem p;
  p.label = "example3";
  p.beta = [](Point2) { return Vec2{1.0, 1.0}; };
  p.mu = one;
  p.f = [](Point2 x) {
    return 4.0 * x.y * std::cos(4.0 * x.x) + (1.0 + x.y) * std::sin(4.0 * x.x);
  };
  p.u_exact = [](Point2 x) { return x.y * std::sin(4.0 * x.x); };
  p.grad_u_exact = [](Point2 x) {
    return Vec2{4.0 * x.y * std::cos(4.0 * x.x), std::sin(4.0 * x.x)};
  };
  p.div_beta = [](Point2) { return 0.0; };
  return p;
}

// beta_s = (1 - x1 + (1 - x2)^s, 1 + x2), u = (e^x1 - 1) sin(x2), f = beta_s . grad u + u
Problem make_example4(double s) {
  Problem p;
  p.label = "example4";
  p.params = {{"s", s}};
  p.beta = [s](Point2 x) {
    return Vec2{1.0 - x.x + std::pow(std::max(0.0, 1.0 - x.y), s), 1.0 + x.y};
  };
  p.mu = one;
  p.u_exact = [](Point2 x) { return std::expm1(x.x) * std::sin(x.y); };
  p.grad_u_exact = [](Point2 x) {
    return Vec2{std::exp(x.x) * std::sin(x.y), std::expm1(x.x) * std::cos(x.y)};
  };
  p.f = [beta = p.beta, grad = p.grad_u_exact, u = p.u_exact](Point2 x) {
    return dot(beta(x), grad(x)) + u(x);
  };
  p.div_beta = [](Point2) { return 0.0; };
  return p;
}

}  // namespace

RegularizedProblem::RegularizedProblem(Problem problem, double epsilon)
    : problem_(std::move(problem)), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
}

const std::vector<std::string>& registry_labels() {
  static const std::vector<std::string> labels = {"example1", "example2", "example3", "example4"};
  return labels;
}

double default_s(std::string_view label) {
  if (label == "example1") return 0.51;
  if (label == "example4") return 2.0;
  return 0.0;
}

Problem registry_get(std::string_view label, const ProblemParams& params) {
  if (label == "example1") return make_example1(param_s(label, params));
  if (label == "example2") return make_example2();
  if (label == "example3") return make_example3();
  if (label == "example4") return make_example4(param_s(label, params));
  throw InvalidArgument("unknown example '" + std::string(label) + "'");
}

double divergence(const Problem& problem, Point2 p) {
  if (problem.div_beta) return problem.div_beta(p);
  constexpr double step = 1e-6;
  const Vec2 bxp = problem.beta({p.x + step, p.y});
  const Vec2 bxm = problem.beta({p.x - step, p.y});
  const Vec2 byp = problem.beta({p.x, p.y + step});
  const Vec2 bym = problem.beta({p.x, p.y - step});
  return (bxp.x - bxm.x + byp.y - bym.y) / (2.0 * step);
}

double coercivity_constant(const Problem& problem, std::size_t n_samples) {
  if (n_samples == 0) throw InvalidArgument("coercivity_constant: n_samples must be positive");
  double mu0 = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      const Point2 x{(static_cast<double>(i) + 0.5) / n, (static_cast<double>(j) + 0.5) / n};
      mu0 = std::min(mu0, problem.mu(x) - 0.5 * divergence(problem, x));
    }
  }
  if (!(mu0 > 0.0)) {
    throw NumericalError("coercivity violated for '" + problem.label +
                         "': min(mu - div(beta)/2) = " + std::to_string(mu0));
  }
  return mu0;
}

double alpha_of_s(double s) {
  if (!(s > 0.0)) throw InvalidArgument("alpha_of_s: s must be positive");
  return 1.0 / s;
}

std::string_view to_string(NormKind norm) {
  switch (norm) {
    case NormKind::L2Domain:
      return "l2_domain";
    case NormKind::L2GammaPlus:
      return "l2_gamma_plus";
    case NormKind::H1Semi:
      return "h1_semi";
    case NormKind::L2Gamma0:
      return "l2_gamma0";
  }
  return "?";
}

NormKind norm_from_string(std::string_view name) {
  for (NormKind n : kAllNorms) {
    if (to_string(n) == name) return n;
  }
  throw InvalidArgument("unknown norm '" + std::string(name) + "'");
}

double expected_rate(std::string_view label, NormKind norm, const ProblemParams& params) {
  // Exponents in the order l2_domain, l2_gamma_plus, h1_semi, l2_gamma0.
  auto pick = [norm](double l2, double gamma_plus, double h1, double gamma0) {
    switch (norm) {
      case NormKind::L2Domain:
        return l2;
      case NormKind::L2GammaPlus:
        return gamma_plus;
      case NormKind::H1Semi:
        return h1;
      case NormKind::L2Gamma0:
        return gamma0;
    }
    return l2;
  };
  auto no_gamma0 = [&]() {
    if (norm == NormKind::L2Gamma0) {
      throw InvalidArgument("no characteristic boundary for " + std::string(label) +
                            "; the l2_gamma0 estimate is undefined");
    }
  };

  if (label == "example1") {
    const double s = param_s(label, params);
    if (s <= 0.5) {
      throw InvalidArgument("example1 with s <= 1/2: u is not in H1, no rate is guaranteed");
    }
    // u = (1 + x1^s) x2 is in H2 for s == 1 or s > 3/2.
    const bool h2 = (s == 1.0) || (s > 1.5);
    return h2 ? pick(0.75, 0.75, 0.25, 0.5) : pick(0.5, 0.5, 0.0, 0.25);
  }
  if (label == "example2") return pick(0.75, 0.75, 0.25, 0.5);
  if (label == "example3") {
    no_gamma0();
    return pick(1.0, 1.0, 0.5, 0.0);
  }
  if (label == "example4") {
    no_gamma0();
    const double alpha = alpha_of_s(param_s(label, params));
    const double l2 = std::min(1.0, 0.75 + 0.25 * alpha);
    const double h1 = std::min(0.5, 0.25 + 0.25 * alpha);
    return pick(l2, l2, h1, 0.0);
  }
  throw InvalidArgument("unknown example '" + std::string(label) + "'");
}

}  // namespace epsreg
