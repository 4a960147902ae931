#pragma once

#include <optional>
#include <span>

#include "epsreg/fem.hpp"

namespace epsreg {

/// Errors of the discrete regularized solution against the exact solution
/// of the first-order problem, at one epsilon.
struct ErrorRecord {
  double epsilon = 0.0;
  double l2_domain = 0.0;
  std::optional<double> l2_gamma_plus;  // absent without outflow edges
  double h1_semi = 0.0;
  std::optional<double> l2_gamma0;  // absent without characteristic edges
  double residual = 0.0;

  std::optional<double> get(NormKind norm) const;
};

/// || u - u_h ||_{L2(Omega)}
double l2_domain_error(const DiscreteField& field, const Problem& problem,
                       const QuadratureRule& rule = default_rule());

/// || grad(u - u_h) ||_{L2(Omega)}
double h1_semi_error(const DiscreteField& field, const Problem& problem,
                     const QuadratureRule& rule = default_rule());

/// sqrt( int_{outflow} (u - u_h)^2 beta.n ds ), nullopt without outflow edges.
std::optional<double> weighted_outflow_error(const DiscreteField& field, const Problem& problem,
                                             std::span<const BoundaryTag> tags, int edge_order = 3);

/// || u - u_h ||_{L2(characteristic edges)}, nullopt when there are none.
std::optional<double> characteristic_error(const DiscreteField& field, const Problem& problem,
                                           std::span<const BoundaryTag> tags, int edge_order = 3);

/// All four norms at once.
ErrorRecord compute_errors(const DiscreteField& field, const Problem& problem,
                           std::span<const BoundaryTag> tags, double epsilon, double residual);

}  // namespace epsreg
