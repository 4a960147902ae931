#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "epsreg/epsreg.hpp"
#include "json.hpp"

#ifndef EPSREG_VERSION
#define EPSREG_VERSION "dev"
#endif

namespace epsreg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Flags that map onto SweepConfig, shared by sweep and alpha-study.
struct GridOptions {
  SweepConfig config = preset("desk");
  std::string preset_name = "desk";
  std::string solver = "direct";
  CLI::Option* preset_opt = nullptr;
  std::vector<CLI::Option*> grid_opts;  // n-cells, k-min, k-max, fit-lo, fit-hi
};

void add_grid_options(CLI::App& app, GridOptions& g) {
  g.preset_opt = app.add_option("--preset", g.preset_name, "Grid preset: desk or paper")
                     ->check(CLI::IsMember({"desk", "paper"}));
  g.grid_opts = {
      app.add_option("--n-cells", g.config.n_cells, "Cells per side of the mesh"),
      app.add_option("--k-min", g.config.k_min, "Smallest k (eps = base^-k)"),
      app.add_option("--k-max", g.config.k_max, "Largest k"),
      app.add_option("--fit-lo", g.config.fit_lo, "First k of the fit window"),
      app.add_option("--fit-hi", g.config.fit_hi, "Last k of the fit window"),
  };
  app.add_option("--base", g.config.base, "Base b of the eps grid");
  app.add_option("--solver", g.solver, "Linear solver: direct or gmres")
      ->check(CLI::IsMember({"direct", "gmres"}));
  app.add_option("--tol", g.config.tol, "GMRES relative residual tolerance");
  app.add_option("--max-iter", g.config.max_iter, "GMRES iteration limit");
  app.add_option("--jobs", g.config.jobs, "Maximum number of concurrent solves");
}

/// Applies --preset to every grid option that was not given explicitly.
void resolve_grid(GridOptions& g) {
  if (g.preset_opt->count() > 0) {
    const SweepConfig p = preset(g.preset_name);
    if (g.grid_opts[0]->count() == 0) g.config.n_cells = p.n_cells;
    if (g.grid_opts[1]->count() == 0) g.config.k_min = p.k_min;
    if (g.grid_opts[2]->count() == 0) g.config.k_max = p.k_max;
    if (g.grid_opts[3]->count() == 0) g.config.fit_lo = p.fit_lo;
    if (g.grid_opts[4]->count() == 0) g.config.fit_hi = p.fit_hi;
  }
  g.config.solver = solver_from_string(g.solver);
}

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return (env != nullptr && *env != '\0') ? env : "epsreg_out";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json config_to_json(const SweepConfig& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  return {{"example", c.label}, {"params", params},     {"n_cells", c.n_cells},
          {"base", c.base},     {"k_min", c.k_min},     {"k_max", c.k_max},
          {"fit_lo", c.fit_lo}, {"fit_hi", c.fit_hi},   {"solver", to_string(c.solver)},
          {"tol", c.tol},       {"max_iter", c.max_iter}, {"jobs", c.jobs}};
}

SweepConfig config_from_json(const json& j) {
  SweepConfig c;
  c.label = j.at("example").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) c.params[k] = v.get<double>();
  c.n_cells = j.at("n_cells").get<std::size_t>();
  c.base = j.at("base").get<double>();
  c.k_min = j.at("k_min").get<int>();
  c.k_max = j.at("k_max").get<int>();
  c.fit_lo = j.at("fit_lo").get<int>();
  c.fit_hi = j.at("fit_hi").get<int>();
  c.solver = solver_from_string(j.at("solver").get<std::string>());
  c.tol = j.at("tol").get<double>();
  c.max_iter = j.at("max_iter").get<std::size_t>();
  c.jobs = j.at("jobs").get<unsigned>();
  return c;
}

/// Output files written only after the computation succeeded; if any write
/// fails, everything written so far is removed.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const auto& f : files_) n.push_back(f.first);
    return n;
  }

  void commit() {
    const bool created = !fs::exists(dir_);
    fs::create_directories(dir_);
    std::vector<fs::path> written;
    try {
      for (const auto& [name, content] : files_) {
        const fs::path path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        written.push_back(path);
        os << content;
        if (!os) throw std::runtime_error("write failed for " + path.string());
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) fs::remove(p, ec);
      if (created) fs::remove(dir_, ec);
      throw;
    }
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string norm_plot(const std::vector<SweepRecord>& records, const RateFit& fit,
                      const std::string& label) {
  PlotSpec spec;
  spec.title = label + ": " + std::string(to_string(fit.norm)) + " (rate " +
               format_double(std::round(fit.rate * 1000.0) / 1000.0) + ")";
  spec.x_label = "epsilon";
  spec.y_label = std::string(to_string(fit.norm));
  spec.log_x = spec.log_y = true;
  PlotSeries data{"error", {}, true, "#1f77b4"};
  for (const auto& r : records) {
    if (const auto v = r.errors.get(fit.norm)) data.points.emplace_back(r.errors.epsilon, *v);
  }
  PlotSeries line{"least-squares fit", {}, false, "#d62728"};
  for (const auto& r : records) {
    const double e = r.errors.epsilon;
    line.points.emplace_back(e, std::exp(fit.intercept) * std::pow(e, fit.rate));
  }
  spec.series = {data, line};
  return render_svg(spec);
}

std::string alpha_plot(const std::vector<AlphaRow>& rows) {
  PlotSpec spec;
  spec.title = "example4: l2_domain rate vs alpha";
  spec.x_label = "alpha = 1/s";
  spec.y_label = "fitted rate";
  PlotSeries data{"fitted", {}, true, "#1f77b4"};
  double amax = 1.25;
  for (const auto& r : rows) {
    if (r.fitted_rate) data.points.emplace_back(r.alpha, *r.fitted_rate);
    amax = std::max(amax, r.alpha);
  }
  PlotSeries line{"min(1, (3 + alpha)/4)", {}, false, "#d62728"};
  for (int i = 0; i <= 100; ++i) {
    const double a = amax * i / 100.0;
    line.points.emplace_back(a, std::min(1.0, (3.0 + a) / 4.0));
  }
  spec.series = {data, line};
  return render_svg(spec);
}

json base_manifest(const std::string& command) {
  return {{"tool", "epsreg"}, {"version", EPSREG_VERSION}, {"timestamp", utc_timestamp()},
          {"command", command}};
}

void print_fits(std::ostream& out, const std::vector<RateFit>& fits, const SweepConfig& c) {
  out << std::left << std::setw(15) << "norm" << std::setw(12) << "rate" << std::setw(12)
      << "expected" << "r_squared\n";
  for (const auto& f : fits) {
    const auto expected = try_expected_rate(c.label, f.norm, c.params);
    std::ostringstream rate, exp;
    rate << std::fixed << std::setprecision(4) << f.rate;
    if (expected) exp << std::fixed << std::setprecision(4) << *expected;
    else exp << "-";
    out << std::setw(15) << to_string(f.norm) << std::setw(12) << rate.str() << std::setw(12)
        << exp.str() << std::fixed << std::setprecision(6) << f.r_squared << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

int do_sweep(const SweepConfig& config, const fs::path& out_dir, bool svg, std::ostream& out,
             std::ostream& err) {
  config.validate(true);
  const auto records = run_sweep(config);
  for (const auto& r : records) {
    if (r.peclet.warning) {
      err << "warning: k=" << r.k << " mesh Peclet number " << r.peclet.max_peclet
          << " > 1; plain Galerkin may oscillate\n";
    }
  }
  const auto fits = fit_all(records, {config.fit_lo, config.fit_hi});

  OutputSet outputs(out_dir);
  std::ostringstream rec_csv, fit_csv;
  write_records_csv(rec_csv, records);
  write_fit_csv(fit_csv, fits, config.label, config.params);
  outputs.add("records.csv", rec_csv.str());
  outputs.add("fit.csv", fit_csv.str());
  if (svg) {
    for (const auto& f : fits) {
      outputs.add("plot_" + std::string(to_string(f.norm)) + ".svg",
                  norm_plot(records, f, config.label));
    }
  }
  json manifest = base_manifest("sweep");
  manifest["config"] = config_to_json(config);
  manifest["svg"] = svg;
  auto names = outputs.names();
  names.push_back("manifest.json");
  manifest["outputs"] = names;
  outputs.add("manifest.json", manifest.dump(2) + "\n");
  outputs.commit();

  out << "example " << config.label << ", n_cells " << config.n_cells << ", k in [" << config.k_min
      << ", " << config.k_max << "], fit on [" << config.fit_lo << ", " << config.fit_hi << "]\n";
  print_fits(out, fits, config);
  out << "wrote " << outputs.dir().string() << '\n';
  return kExitOk;
}

int do_alpha(const std::vector<double>& s_list, const SweepConfig& config, const fs::path& out_dir,
             bool svg, std::ostream& out, std::ostream& err) {
  const auto rows = alpha_study(s_list, config);
  std::size_t ok = 0;
  for (const auto& r : rows) {
    if (r.failure.empty()) {
      ++ok;
    } else {
      err << "s=" << r.s << " failed: " << r.failure << '\n';
    }
  }
  if (ok == 0) {
    err << "error: every alpha-study row failed\n";
    return kExitFailure;
  }

  OutputSet outputs(out_dir);
  std::ostringstream csv;
  write_alpha_csv(csv, rows);
  outputs.add("alpha.csv", csv.str());
  if (svg) outputs.add("alpha.svg", alpha_plot(rows));
  json manifest = base_manifest("alpha-study");
  manifest["config"] = config_to_json(config);
  manifest["s_list"] = s_list;
  manifest["svg"] = svg;
  auto names = outputs.names();
  names.push_back("manifest.json");
  manifest["outputs"] = names;
  outputs.add("manifest.json", manifest.dump(2) + "\n");
  outputs.commit();

  out << std::left << std::setw(10) << "alpha" << std::setw(12) << "rate" << "expected\n";
  for (const auto& r : rows) {
    std::ostringstream a, f, e;
    a << std::fixed << std::setprecision(4) << r.alpha;
    if (r.fitted_rate) f << std::fixed << std::setprecision(4) << *r.fitted_rate;
    else f << "failed";
    e << std::fixed << std::setprecision(4) << r.expected_rate;
    out << std::setw(10) << a.str() << std::setw(12) << f.str() << e.str() << '\n';
  }
  out << "wrote " << outputs.dir().string() << '\n';
  return kExitOk;
}

void check_s(const CLI::Option* opt, double s, ProblemParams& params) {
  if (opt->count() == 0) return;
  if (!(s > 0.0)) throw InvalidArgument("s must be positive");
  params["s"] = s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic regularization of stationary advection: P1 solver and eps-rate study",
               "epsreg"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", EPSREG_VERSION);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve at one epsilon and print the error norms");
  std::string solve_example = "example3";
  double solve_s = 0.0;
  double solve_eps = 0.01;
  std::size_t solve_n = 64;
  std::string solve_solver = "direct";
  double solve_tol = 1e-10;
  std::size_t solve_max_iter = 5000;
  std::string dump_field, dump_mesh;
  solve->add_option("--example", solve_example, "example1 | example2 | example3 | example4");
  auto* solve_s_opt = solve->add_option("--s", solve_s, "Shape parameter s (example1, example4)");
  solve->add_option("--eps", solve_eps, "Regularization parameter epsilon");
  solve->add_option("--n-cells", solve_n, "Cells per side of the mesh");
  solve->add_option("--solver", solve_solver, "Linear solver: direct or gmres")
      ->check(CLI::IsMember({"direct", "gmres"}));
  solve->add_option("--tol", solve_tol, "GMRES relative residual tolerance");
  solve->add_option("--max-iter", solve_max_iter, "GMRES iteration limit");
  solve->add_option("--dump-field", dump_field, "Write 'x y value' per vertex to this file");
  solve->add_option("--dump-mesh", dump_mesh, "Write the tagged mesh to this file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep eps = base^-k and fit convergence rates");
  GridOptions sweep_grid;
  std::string sweep_example = "example3";
  double sweep_s = 0.0;
  std::string sweep_out = default_output_dir();
  bool sweep_svg = false;
  sweep->add_option("--example", sweep_example, "example1 | example2 | example3 | example4");
  auto* sweep_s_opt = sweep->add_option("--s", sweep_s, "Shape parameter s (example1, example4)");
  add_grid_options(*sweep, sweep_grid);
  sweep->add_option("--out", sweep_out, "Output directory (default from $EPSREG_OUTPUT_DIR)");
  sweep->add_flag("--svg", sweep_svg, "Also write one log-log SVG plot per norm");

  // alpha-study
  auto* alpha = app.add_subcommand("alpha-study", "Fitted l2_domain rate of example4 against alpha = 1/s");
  GridOptions alpha_grid;
  std::vector<double> s_list = default_alpha_grid();
  std::string alpha_out = default_output_dir();
  bool alpha_svg = false;
  alpha->add_option("--s-list", s_list, "Comma-separated values of s")->delimiter(',');
  add_grid_options(*alpha, alpha_grid);
  alpha->add_option("--out", alpha_out, "Output directory (default from $EPSREG_OUTPUT_DIR)");
  alpha->add_flag("--svg", alpha_svg, "Also write the rate-vs-alpha SVG plot");

  // rerun
  auto* rerun = app.add_subcommand("rerun", "Repeat a sweep or alpha-study from its manifest.json");
  std::string manifest_path;
  std::string rerun_out;
  rerun->add_option("--manifest", manifest_path, "Path to manifest.json")->required();
  rerun->add_option("--out", rerun_out, "Output directory (default: <manifest dir>/rerun)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) {
      ProblemParams params;
      check_s(solve_s_opt, solve_s, params);
      const Problem problem = registry_get(solve_example, params);
      if (!(solve_eps > 0.0)) throw InvalidArgument("eps must be positive");
      const Mesh mesh = build_unit_square_mesh(solve_n);
      const auto method = solver_from_string(solve_solver);
      if (method == SolverMethod::Gmres && !(solve_tol > 0.0 && solve_tol <= 1e-6)) {
        throw InvalidArgument("tol must lie in (0, 1e-6]");
      }
      const PointSolution sol =
          solve_point(mesh, problem, solve_eps, method, solve_tol, solve_max_iter);
      auto line = [&out](std::string_view name, const std::optional<double>& v) {
        out << std::left << std::setw(15) << name;
        if (v) out << std::setprecision(10) << *v << '\n';
        else out << "absent\n";
      };
      out << "example " << problem.label << ", eps " << solve_eps << ", n_cells " << solve_n
          << ", h " << mesh.h() << '\n';
      for (NormKind n : kAllNorms) line(to_string(n), sol.errors.get(n));
      line("residual", sol.report.relative_residual);
      line("peclet", sol.peclet.max_peclet);
      if (sol.report.method == SolverMethod::Gmres) {
        out << std::setw(15) << "iterations" << sol.report.iterations << '\n';
      }
      if (sol.peclet.warning) {
        err << "warning: mesh Peclet number " << sol.peclet.max_peclet
            << " > 1; plain Galerkin may oscillate\n";
      }
      if (!dump_field.empty()) {
        std::ofstream os(dump_field);
        os.precision(17);
        const auto coeffs = sol.field.coefficients();
        for (std::size_t v = 0; v < mesh.vertices().size(); ++v) {
          os << mesh.vertices()[v].x << ' ' << mesh.vertices()[v].y << ' ' << coeffs[v] << '\n';
        }
      }
      if (!dump_mesh.empty()) {
        std::ofstream os(dump_mesh);
        write_mesh_text(os, mesh, classify_boundary(mesh, problem.beta));
      }
      return kExitOk;
    }

    if (*sweep) {
      resolve_grid(sweep_grid);
      SweepConfig config = sweep_grid.config;
      config.label = sweep_example;
      check_s(sweep_s_opt, sweep_s, config.params);
      registry_get(config.label, config.params);
      return do_sweep(config, sweep_out, sweep_svg, out, err);
    }

    if (*alpha) {
      resolve_grid(alpha_grid);
      for (double s : s_list) {
        if (!(s > 0.0)) throw InvalidArgument("every s in --s-list must be positive");
      }
      return do_alpha(s_list, alpha_grid.config, alpha_out, alpha_svg, out, err);
    }

    if (*rerun) {
      std::ifstream is(manifest_path);
      if (!is) throw InvalidArgument("cannot read manifest " + manifest_path);
      json manifest;
      try {
        manifest = json::parse(is);
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
      }
      const fs::path dir =
          rerun_out.empty() ? fs::path(manifest_path).parent_path() / "rerun" : fs::path(rerun_out);
      SweepConfig config;
      try {
        config = config_from_json(manifest.at("config"));
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
      }
      const std::string command = manifest.value("command", "");
      const bool svg = manifest.value("svg", false);
      if (command == "sweep") return do_sweep(config, dir, svg, out, err);
      if (command == "alpha-study") {
        return do_alpha(manifest.at("s_list").get<std::vector<double>>(), config, dir, svg, out,
                        err);
      }
      throw InvalidArgument("manifest has unknown command '" + command + "'");
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"epsreg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace epsreg::cli
