#include "epsreg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace epsreg {

double SweepConfig::epsilon(int k) const { return std::pow(base, -static_cast<double>(k)); }

void SweepConfig::validate(bool require_fit) const {
  if (n_cells == 0) throw InvalidArgument("n_cells must be at least 1");
  if (!(base > 1.0) || !std::isfinite(base)) throw InvalidArgument("epsilon base must be > 1");
  if (k_min > k_max) throw InvalidArgument("k_min must not exceed k_max");
  if (jobs == 0) throw InvalidArgument("jobs must be at least 1");
  if (solver == SolverMethod::Gmres && !(tol > 0.0 && tol <= 1e-6)) {
    throw InvalidArgument("tol must lie in (0, 1e-6]");
  }
  if (max_iter == 0) throw InvalidArgument("max_iter must be at least 1");
  if (require_fit) {
    if (fit_lo < k_min || fit_hi > k_max || fit_lo > fit_hi) {
      throw InvalidArgument("fit window must satisfy k_min <= fit_lo <= fit_hi <= k_max");
    }
    if (fit_hi - fit_lo < 1) {
      throw InvalidArgument("fit window too small: at least 2 points are required");
    }
  }
}

SweepConfig preset(std::string_view name) {
  SweepConfig c;
  if (name == "desk") {
    c.n_cells = 256;
    c.k_min = 4;
    c.k_max = 11;
    c.fit_lo = 6;
    c.fit_hi = 11;
  } else if (name == "paper") {
    c.n_cells = 512;
    c.k_min = 0;
    c.k_max = 14;
    c.fit_lo = 8;
    c.fit_hi = 14;
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

PointSolution solve_point(const Mesh& mesh, const Problem& problem, double epsilon,
                          SolverMethod method, double tol, std::size_t max_iter) {
  const RegularizedProblem regularized(problem, epsilon);
  const auto tags = classify_boundary(mesh, problem.beta);
  const SparseSystem system = assemble(mesh, regularized.problem(), regularized.epsilon(), tags);
  SolveReport report = method == SolverMethod::Direct ? solve_direct(system)
                                                      : solve_iterative(system, tol, max_iter);
  if (!report.converged) {
    throw SolverError("GMRES did not converge in " + std::to_string(report.iterations) +
                      " iterations (best residual " + format_double(report.relative_residual) +
                      ")");
  }
  DiscreteField field = expand_solution(mesh, system, report.solution);
  ErrorRecord errors = compute_errors(field, problem, tags, epsilon, report.relative_residual);
  return PointSolution{std::move(field), errors, peclet_guard(mesh, problem, epsilon),
                       std::move(report)};
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate(false);
  const Problem problem = registry_get(config.label, config.params);
  const Mesh mesh = build_unit_square_mesh(config.n_cells);

  const std::size_t count = static_cast<std::size_t>(config.k_max - config.k_min + 1);
  std::vector<SweepRecord> records(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      const int k = config.k_min + static_cast<int>(i);
      try {
        PointSolution sol = solve_point(mesh, problem, config.epsilon(k), config.solver,
                                        config.tol, config.max_iter);
        records[i] = SweepRecord{k, sol.errors, sol.peclet, sol.report.iterations};
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::min<unsigned>(config.jobs, static_cast<unsigned>(count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (!failures[i]) continue;
    const int k = config.k_min + static_cast<int>(i);
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw SweepError(k, e.what());
    }
  }
  return records;
}

RateFit fit_log_log(std::span<const double> epsilon, std::span<const double> error) {
  if (epsilon.size() != error.size()) throw InvalidArgument("fit: size mismatch");
  if (epsilon.size() < 2) throw InvalidArgument("fit: at least 2 points are required");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    if (!(error[i] > 0.0) || !std::isfinite(error[i]) || !(epsilon[i] > 0.0)) {
      throw InvalidArgument("fit: errors and epsilons must be positive and finite");
    }
    x.push_back(std::log(epsilon[i]));
    y.push_back(std::log(error[i]));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit: epsilon values must not all coincide");

  RateFit fit;
  fit.rate = sxy / sxx;
  fit.intercept = my - fit.rate * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.rate * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points = x.size();
  return fit;
}

RateFit fit_rate(std::span<const SweepRecord> records, NormKind norm, FitWindow window) {
  std::vector<double> eps, err;
  for (const SweepRecord& r : records) {
    if (r.k < window.k_lo || r.k > window.k_hi) continue;
    const auto value = r.errors.get(norm);
    if (!value) {
      throw InvalidArgument("fit: norm " + std::string(to_string(norm)) + " is absent");
    }
    eps.push_back(r.errors.epsilon);
    err.push_back(*value);
  }
  RateFit fit = fit_log_log(eps, err);
  fit.norm = norm;
  return fit;
}

std::optional<double> try_expected_rate(std::string_view label, NormKind norm,
                                        const ProblemParams& params) {
  try {
    return expected_rate(label, norm, params);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

std::vector<RateFit> fit_all(std::span<const SweepRecord> records, FitWindow window) {
  std::vector<RateFit> fits;
  if (records.empty()) return fits;
  for (NormKind norm : kAllNorms) {
    if (!records.front().errors.get(norm)) continue;
    fits.push_back(fit_rate(records, norm, window));
  }
  return fits;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {
std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
}  // namespace

void write_records_csv(std::ostream& os, std::span<const SweepRecord> records) {
  os << "k,eps,l2_domain,l2_gamma_plus,h1_semi,l2_gamma0,residual,peclet\n";
  for (const SweepRecord& r : records) {
    os << r.k << ',' << format_double(r.errors.epsilon) << ',' << format_double(r.errors.l2_domain)
       << ',' << cell(r.errors.l2_gamma_plus) << ',' << format_double(r.errors.h1_semi) << ','
       << cell(r.errors.l2_gamma0) << ',' << format_double(r.errors.residual) << ','
       << format_double(r.peclet.max_peclet) << '\n';
  }
}

void write_fit_csv(std::ostream& os, std::span<const RateFit> fits, std::string_view label,
                   const ProblemParams& params) {
  os << "norm,rate,intercept,r_squared,expected_rate\n";
  for (const RateFit& f : fits) {
    os << to_string(f.norm) << ',' << format_double(f.rate) << ',' << format_double(f.intercept)
       << ',' << format_double(f.r_squared) << ','
       << cell(try_expected_rate(label, f.norm, params)) << '\n';
  }
}

std::vector<double> default_alpha_grid() { return {4.0, 2.0, 4.0 / 3.0, 1.0, 0.8}; }

std::vector<AlphaRow> alpha_study(std::span<const double> s_list, const SweepConfig& base) {
  for (double s : s_list) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("every s must be positive");
  }
  base.validate(true);
  std::vector<AlphaRow> rows;
  for (double s : s_list) {
    AlphaRow row;
    row.s = s;
    row.alpha = alpha_of_s(s);
    row.expected_rate = expected_rate("example4", NormKind::L2Domain, {{"s", s}});
    SweepConfig config = base;
    config.label = "example4";
    config.params = {{"s", s}};
    try {
      row.records = run_sweep(config);
      row.fitted_rate =
          fit_rate(row.records, NormKind::L2Domain, {config.fit_lo, config.fit_hi}).rate;
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_alpha_csv(std::ostream& os, std::span<const AlphaRow> rows) {
  os << "s,alpha,fitted_rate,expected_rate,status\n";
  for (const AlphaRow& r : rows) {
    os << format_double(r.s) << ',' << format_double(r.alpha) << ',' << cell(r.fitted_rate) << ','
       << format_double(r.expected_rate) << ',' << (r.failure.empty() ? "ok" : "failed") << '\n';
  }
}

}  // namespace epsreg
