#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "epsreg/mesh.hpp"

namespace epsreg {

using ProblemParams = std::map<std::string, double, std::less<>>;

/// Continuous data of the first-order problem beta . grad u + mu u = f
/// together with its exact solution. Immutable value type; every field is
/// reentrant.
struct Problem {
  std::string label;
  ProblemParams params;
  VectorField beta;
  ScalarField mu;
  ScalarField f;
  ScalarField u_exact;
  VectorField grad_u_exact;
  /// Closed-form div beta; when empty, central differences are used.
  ScalarField div_beta;
};

/// A problem paired with a regularization parameter epsilon > 0.
class RegularizedProblem {
 public:
  RegularizedProblem(Problem problem, double epsilon);

  const Problem& problem() const noexcept { return problem_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  Problem problem_;
  double epsilon_;
};

/// Labels understood by registry_get.
const std::vector<std::string>& registry_labels();

/// Default value of the `s` parameter for a label (0 when unused).
double default_s(std::string_view label);

/// Builds one of the four example families. Recognised parameter: "s"
/// (example1 and example4; defaults from default_s). Throws InvalidArgument
/// for an unknown label or nonpositive s.
Problem registry_get(std::string_view label, const ProblemParams& params = {});

/// div beta at `p`, closed form when the problem carries one.
double divergence(const Problem& problem, Point2 p);

/// min over an n_samples x n_samples cell-centred grid of mu - div(beta)/2.
/// Throws NumericalError when the sampled minimum is not positive.
double coercivity_constant(const Problem& problem, std::size_t n_samples = 64);

/// alpha = 1/s, the supremal exponent with (beta_s . n)^(-alpha) in L1(outflow).
double alpha_of_s(double s);

enum class NormKind { L2Domain, L2GammaPlus, H1Semi, L2Gamma0 };

inline constexpr NormKind kAllNorms[] = {NormKind::L2Domain, NormKind::L2GammaPlus,
                                         NormKind::H1Semi, NormKind::L2Gamma0};

std::string_view to_string(NormKind norm);
NormKind norm_from_string(std::string_view name);

/// Theoretical epsilon-exponent of the given error norm. Throws
/// InvalidArgument when no estimate exists (characteristic norm without a
/// characteristic boundary, or example1 with s <= 1/2).
double expected_rate(std::string_view label, NormKind norm, const ProblemParams& params = {});

}  // namespace epsreg
