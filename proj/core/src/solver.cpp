#include "epsreg/solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <regex>
#include <string>

namespace epsreg {

std::string_view to_string(SolverMethod method) {
  return method == SolverMethod::Direct ? "direct" : "gmres";
}

SolverMethod solver_from_string(std::string_view name) {
  if (name == "direct") return SolverMethod::Direct;
  if (name == "gmres") return SolverMethod::Gmres;
  throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

namespace {

using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenMatrix to_eigen(const CsrMatrix& a) {
  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(a.nnz());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      entries.emplace_back(static_cast<int>(r), static_cast<int>(ci[k]), va[k]);
    }
  }
  EigenMatrix m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

void check_structure(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw SolverError("matrix is not square");
  std::vector<bool> col_seen(a.cols(), false);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    bool any = false;
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      if (va[k] != 0.0) {
        any = true;
        col_seen[ci[k]] = true;
      }
    }
    if (!any) {
      throw SolverError("structurally singular: row " + std::to_string(r) + " is empty",
                        static_cast<long>(r));
    }
  }
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!col_seen[c]) {
      throw SolverError("structurally singular: column " + std::to_string(c) + " is empty",
                        static_cast<long>(c));
    }
  }
}

long trailing_index(const std::string& message) {
  std::smatch m;
  static const std::regex number(R"((\d+)\s*$)");
  if (std::regex_search(message, m, number)) return std::stol(m[1]);
  return -1;
}

}  // namespace

SolveReport solve_direct(const CsrMatrix& a, std::span<const double> b) {
  if (b.size() != a.rows()) throw InvalidArgument("solve_direct: rhs size mismatch");
  check_structure(a);

  const EigenMatrix m = to_eigen(a);
  Eigen::SparseLU<EigenMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) {
    const std::string msg = lu.lastErrorMessage();
    throw SolverError("sparse LU failed: " + msg, trailing_index(msg));
  }

  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = lu.solve(rhs);

  SolveReport report;
  report.method = SolverMethod::Direct;
  report.solution.assign(x.data(), x.data() + x.size());
  report.relative_residual = relative_residual_inf(a, report.solution, b);
  for (int step = 0; step < 3 && report.relative_residual > kDirectResidualTol; ++step) {
    const Eigen::VectorXd r = rhs - m * x;
    x += lu.solve(r);
    report.solution.assign(x.data(), x.data() + x.size());
    report.relative_residual = relative_residual_inf(a, report.solution, b);
  }
  if (!std::isfinite(report.relative_residual) || report.relative_residual > kDirectResidualTol) {
    throw SolverError("sparse LU residual " + std::to_string(report.relative_residual) +
                      " exceeds tolerance");
  }
  report.converged = true;
  return report;
}

SolveReport solve_direct(const SparseSystem& system) {
  return solve_direct(system.matrix, system.rhs);
}

Ilu0::Ilu0(const CsrMatrix& a)
    : row_ptr_(a.row_ptr().begin(), a.row_ptr().end()),
      col_idx_(a.col_idx().begin(), a.col_idx().end()),
      values_(a.values().begin(), a.values().end()),
      diag_(a.rows()) {
  if (a.rows() != a.cols()) throw SolverError("ILU(0): matrix is not square");
  const std::size_t n = a.rows();
  const auto& rp = row_ptr_;
  const auto& ci = col_idx_;
  auto& va = values_;

  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] == i) {
        diag_[i] = k;
        found = true;
        break;
      }
    }
    if (!found) throw SolverError("ILU(0): missing diagonal in row " + std::to_string(i), static_cast<long>(i));
  }

  std::vector<std::ptrdiff_t> pos(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) pos[ci[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t k = rp[i]; k < rp[i + 1] && ci[k] < i; ++k) {
      const std::size_t p = ci[k];
      const double pivot = va[diag_[p]];
      if (pivot == 0.0) throw SolverError("ILU(0): zero pivot at row " + std::to_string(p), static_cast<long>(p));
      va[k] /= pivot;
      for (std::size_t kk = diag_[p] + 1; kk < rp[p + 1]; ++kk) {
        const std::ptrdiff_t target = pos[ci[kk]];
        if (target >= 0) va[target] -= va[k] * va[kk];
      }
    }
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) pos[ci[k]] = -1;
    if (va[diag_[i]] == 0.0) throw SolverError("ILU(0): zero pivot at row " + std::to_string(i), static_cast<long>(i));
  }
}

void Ilu0::apply(std::span<double> x) const {
  const std::size_t n = diag_.size();
  const auto& rp = row_ptr_;
  const auto& ci = col_idx_;
  const auto& va = values_;
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = rp[i]; k < diag_[i]; ++k) s -= va[k] * x[ci[k]];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = diag_[i] + 1; k < rp[i + 1]; ++k) s -= va[k] * x[ci[k]];
    x[i] = s / va[diag_[i]];
  }
}

SolveReport solve_iterative(const CsrMatrix& a, std::span<const double> b,
                            const GmresOptions& options) {
  if (!(options.tol > 0.0 && options.tol <= 1e-6)) {
    throw InvalidArgument("solve_iterative: tol must lie in (0, 1e-6]");
  }
  if (options.max_iter == 0) throw InvalidArgument("solve_iterative: max_iter must be >= 1");
  if (options.restart == 0) throw InvalidArgument("solve_iterative: restart must be >= 1");
  if (b.size() != a.rows()) throw InvalidArgument("solve_iterative: rhs size mismatch");

  const std::size_t n = a.rows();
  const Ilu0 ilu(a);
  const double bnorm_inf = max_abs(b);

  SolveReport report;
  report.method = SolverMethod::Gmres;
  report.solution.assign(n, 0.0);
  if (bnorm_inf == 0.0) {
    report.converged = true;
    return report;
  }
  // |r|_inf <= |r|_2, so this target guarantees the inf-norm criterion.
  const double target = options.tol * bnorm_inf;

  std::vector<double>& x = report.solution;
  std::vector<double> r(n), w(n), z(n);
  const std::size_t m = options.restart;
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);

  auto residual = [&]() {
    a.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  };

  std::size_t total = 0;
  residual();
  double rnorm = norm2(r);
  double best = relative_residual_inf(a, x, b);
  std::vector<double> best_x = x;

  while (total < options.max_iter && rnorm > target) {
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;

    std::size_t j = 0;
    for (; j < m && total < options.max_iter; ++j, ++total) {
      z = v[j];
      ilu.apply(z);
      a.multiply(z, w);
      for (std::size_t i = 0; i <= j; ++i) {
        double hij = 0.0;
        for (std::size_t k = 0; k < n; ++k) hij += w[k] * v[i][k];
        h[i][j] = hij;
        for (std::size_t k = 0; k < n; ++k) w[k] -= hij * v[i][k];
      }
      const double wnorm = norm2(w);
      h[j + 1][j] = wnorm;
      if (wnorm > 0.0) {
        for (std::size_t k = 0; k < n; ++k) v[j + 1][k] = w[k] / wnorm;
      }
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = denom > 0.0 ? h[j][j] / denom : 1.0;
      sn[j] = denom > 0.0 ? h[j + 1][j] / denom : 0.0;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= target || wnorm == 0.0) {
        ++j;
        ++total;
        break;
      }
    }

    // Back substitution on the j x j upper-triangular system.
    for (std::size_t i = j; i-- > 0;) {
      double s = g[i];
      for (std::size_t k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t i = 0; i < j; ++i) {
      for (std::size_t k = 0; k < n; ++k) z[k] += y[i] * v[i][k];
    }
    ilu.apply(z);
    for (std::size_t k = 0; k < n; ++k) x[k] += z[k];

    residual();
    const double new_norm = norm2(r);
    const double rel = relative_residual_inf(a, x, b);
    if (rel < best) {
      best = rel;
      best_x = x;
    }
    if (!(new_norm < rnorm) && new_norm > target) {
      rnorm = new_norm;
      break;  // stagnation
    }
    rnorm = new_norm;
  }

  report.iterations = total;
  report.solution = best_x;
  report.relative_residual = best;
  report.converged = best <= options.tol;
  return report;
}

SolveReport solve_iterative(const SparseSystem& system, double tol, std::size_t max_iter) {
  GmresOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return solve_iterative(system.matrix, system.rhs, options);
}

}  // namespace epsreg
