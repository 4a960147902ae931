#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsreg/error_metrics.hpp"
#include "epsreg/solver.hpp"

namespace epsreg {

/// epsilon = base^(-k) for k in [k_min, k_max]; rates are fitted on
/// [fit_lo, fit_hi].
struct SweepConfig {
  std::string label = "example3";
  ProblemParams params;
  std::size_t n_cells = 256;
  double base = 1.6;
  int k_min = 4;
  int k_max = 11;
  int fit_lo = 6;
  int fit_hi = 11;
  SolverMethod solver = SolverMethod::Direct;
  double tol = 1e-10;  // GMRES only
  std::size_t max_iter = 5000;
  unsigned jobs = 1;

  double epsilon(int k) const;

  /// Throws InvalidArgument on an inconsistent grid; with `require_fit`
  /// the fit window must also hold at least two points.
  void validate(bool require_fit = true) const;
};

/// `desk`: n=256, k in [4,11], fit [6,11]. `paper`: n=512, k in [0,14], fit [8,14].
SweepConfig preset(std::string_view name);

struct SweepRecord {
  int k = 0;
  ErrorRecord errors;
  PecletReport peclet;
  std::size_t iterations = 0;
};

/// Solver failure (or any other error) at one point of a sweep.
class SweepError : public std::runtime_error {
 public:
  SweepError(int k, const std::string& what)
      : std::runtime_error("k=" + std::to_string(k) + ": " + what), k_(k) {}
  int k() const noexcept { return k_; }

 private:
  int k_;
};

/// One record per k in ascending k (descending epsilon). Up to `jobs`
/// solves run concurrently; the result does not depend on scheduling.
/// Throws SweepError naming the smallest failing k.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Discrete solution of one regularized problem with its diagnostics.
struct PointSolution {
  DiscreteField field;
  ErrorRecord errors;
  PecletReport peclet;
  SolveReport report;
};

/// Assemble, solve, and measure at one epsilon. Throws SolverError when
/// the solver fails or does not converge.
PointSolution solve_point(const Mesh& mesh, const Problem& problem, double epsilon,
                          SolverMethod method, double tol = 1e-10, std::size_t max_iter = 5000);

struct FitWindow {
  int k_lo = 0;
  int k_hi = 0;
};

struct RateFit {
  NormKind norm = NormKind::L2Domain;
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln(error) against ln(epsilon) over the given points.
/// Throws InvalidArgument with fewer than two points or a nonpositive error.
RateFit fit_log_log(std::span<const double> epsilon, std::span<const double> error);

/// Fit restricted to records with k in the window.
RateFit fit_rate(std::span<const SweepRecord> records, NormKind norm, FitWindow window);

/// Expected exponent, or nullopt where no estimate is available.
std::optional<double> try_expected_rate(std::string_view label, NormKind norm,
                                        const ProblemParams& params);

/// Fits every norm present in the records.
std::vector<RateFit> fit_all(std::span<const SweepRecord> records, FitWindow window);

/// `k,eps,l2_domain,l2_gamma_plus,h1_semi,l2_gamma0,residual,peclet`
void write_records_csv(std::ostream& os, std::span<const SweepRecord> records);

/// `norm,rate,intercept,r_squared,expected_rate`
void write_fit_csv(std::ostream& os, std::span<const RateFit> fits, std::string_view label,
                   const ProblemParams& params);

struct AlphaRow {
  double s = 0.0;
  double alpha = 0.0;
  std::optional<double> fitted_rate;
  double expected_rate = 0.0;
  std::string failure;  // empty on success
  std::vector<SweepRecord> records;
};

/// Default grid s in {4, 2, 4/3, 1, 0.8}.
std::vector<double> default_alpha_grid();

/// For each s: example4 sweep with the template grid, l2_domain rate fit,
/// and the reference min{1, (3 + alpha)/4}. Rows that fail keep their
/// message in `failure`.
std::vector<AlphaRow> alpha_study(std::span<const double> s_list, const SweepConfig& base);

/// `s,alpha,fitted_rate,expected_rate,status`
void write_alpha_csv(std::ostream& os, std::span<const AlphaRow> rows);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace epsreg
