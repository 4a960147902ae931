#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "epsreg/fem.hpp"
#include "epsreg/sparse.hpp"

namespace epsreg {

enum class SolverMethod { Direct, Gmres };

std::string_view to_string(SolverMethod method);
SolverMethod solver_from_string(std::string_view name);

struct SolveReport {
  std::vector<double> solution;
  /// |A x - b|_inf / |b|_inf of the returned solution.
  double relative_residual = 0.0;
  std::size_t iterations = 0;  // 0 for the direct solver
  SolverMethod method = SolverMethod::Direct;
  bool converged = false;
};

inline constexpr double kDirectResidualTol = 1e-10;

/// Sparse LU (COLAMD ordering, partial pivoting) with up to three steps of
/// iterative refinement. Throws SolverError on structural or numerical
/// singularity, carrying the offending index when known, and when the
/// residual stays above kDirectResidualTol.
SolveReport solve_direct(const CsrMatrix& a, std::span<const double> b);
SolveReport solve_direct(const SparseSystem& system);

/// Incomplete LU factorisation with the sparsity pattern of A.
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& a);
  /// Solves (L U) x = r in place.
  void apply(std::span<double> x) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;  // strict L (unit diagonal implied) and U
  std::vector<std::size_t> diag_;
};

struct GmresOptions {
  double tol = 1e-10;
  std::size_t max_iter = 5000;
  std::size_t restart = 50;
};

/// Right-preconditioned restarted GMRES with ILU(0). On success the
/// returned relative residual (inf-norm) is <= tol; otherwise `converged`
/// is false and the best iterate is returned. Throws InvalidArgument for
/// tol outside (0, 1e-6] or max_iter == 0.
SolveReport solve_iterative(const CsrMatrix& a, std::span<const double> b,
                            const GmresOptions& options);
SolveReport solve_iterative(const SparseSystem& system, double tol, std::size_t max_iter);

}  // namespace epsreg
