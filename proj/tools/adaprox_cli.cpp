// adaprox command line: solve | gen | grid | suite

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "adaprox/adaprox.hpp"

namespace fs = std::filesystem;
using namespace adaprox;

namespace {

// Spec flags shared by solve, gen and grid. Values are applied after the
// config file, so flags win.
struct SpecFlags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value experiment file")->check(CLI::ExistingFile);
    for (const auto& k : spec_keys()) {
      std::string name = k.name;
      std::string dashed = name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      std::string flags = "--" + name;
      if (dashed != name) flags += ",--" + dashed;
      options.emplace_back(name, app->add_option(flags, values[name], k.help));
    }
  }

  ExperimentSpec build() const {
    ExperimentSpec s = config.empty() ? ExperimentSpec{} : load_config(config);
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) set_spec_value(s, name, values.at(name));
    }
    return s;
  }
};

void print_run(std::ostream& out, const RunResult& r) {
  const auto& c = r.counters;
  out << "status " << to_string(r.status) << "\niterations " << r.iterations << "\ngrad_evals "
      << c.grad_evals << "\nlinops " << c.linop_applies << "\nprox_evals " << c.prox_calls
      << "\nf_evals " << c.f_evals << '\n';
  if (!r.rows.empty() && r.rows.back().cost) out << "cost " << format_double(*r.rows.back().cost) << '\n';
  if (const auto v = r.final_residual()) out << "residual " << format_double(*v) << '\n';
}

std::string run_file_name(std::size_t i, const ExperimentSpec& s) {
  std::string idx = std::to_string(i);
  if (idx.size() < 2) idx = "0" + idx;
  return idx + "_" + s.problem + "_" + s.algorithm + ".csv";
}

void write_batch(const fs::path& dir, const std::vector<BatchEntry>& batch,
                 const std::function<std::string(std::size_t, const ExperimentSpec&)>& name) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].result) emit_csv(*batch[i].result, (dir / name(i, batch[i].spec)).string());
  }
  std::ofstream sum(dir / "summary.csv");
  if (!sum) throw std::runtime_error((dir / "summary.csv").string() + ": cannot write");
  write_summary(sum, batch);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive proximal gradient and primal-dual solvers with a benchmark harness"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run one experiment and write its trace as CSV");
  SpecFlags solve_flags;
  solve_flags.attach(solve);
  std::string solve_out;
  std::string solve_save;
  solve->add_option("--out,-o", solve_out, "CSV path (default: stdout)");
  solve->add_option("--save-config", solve_save, "write the effective spec here");

  auto* gen = app.add_subcommand("gen", "write the synthetic problem of a spec to disk");
  SpecFlags gen_flags;
  gen_flags.attach(gen);
  std::string gen_out;
  gen->add_option("--out,-o", gen_out, "output path (lasso dump or LIBSVM file)")->required();

  auto* grid = app.add_subcommand("grid", "search the primal-dual ratio t on a log grid");
  SpecFlags grid_flags;
  grid_flags.attach(grid);
  double t_min = 0.01, t_max = 100.0;
  std::size_t t_count = 9;
  unsigned grid_threads = 0;
  std::string grid_dir;
  grid->add_option("--t-min", t_min, "smallest t")->capture_default_str();
  grid->add_option("--t-max", t_max, "largest t")->capture_default_str();
  grid->add_option("--t-count", t_count, "grid points")->capture_default_str();
  grid->add_option("--threads", grid_threads, "workers (0: all cores)");
  grid->add_option("--out-dir", grid_dir, "write one CSV per t and summary.csv here");

  auto* suite = app.add_subcommand("suite", "run the desk-scale battery");
  std::uint64_t suite_seed = 0;
  std::size_t suite_iters = 20000;
  unsigned suite_threads = 0;
  std::string suite_dir = "suite_out";
  suite->add_option("--seed", suite_seed, "data seed")->capture_default_str();
  suite->add_option("--max-iters,--max_iters", suite_iters, "iteration cap per run")->capture_default_str();
  suite->add_option("--threads", suite_threads, "workers (0: all cores)");
  suite->add_option("--out-dir", suite_dir, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const ExperimentSpec s = solve_flags.build();
      if (!solve_save.empty()) save_config(solve_save, s);
      const RunResult r = run(s);
      if (solve_out.empty()) {
        emit_csv(std::cout, r);
        print_run(std::cerr, r);
      } else {
        emit_csv(r, solve_out);
        print_run(std::cout, r);
      }
      return 0;
    }
    if (*gen) {
      const ExperimentSpec s = gen_flags.build();
      if (s.problem == "lasso") {
        const auto inst = gen_lasso(s.lasso_m, s.lasso_n, s.lasso_nstar, s.lasso_rho, s.seed);
        save_lasso(gen_out, inst);
        std::cout << "lasso " << s.lasso_m << "x" << s.lasso_n << " phi_star "
                  << format_double(inst.phi_star) << " -> " << gen_out << '\n';
      } else {
        ExperimentSpec d = s;
        d.data.clear();
        const auto ds = detail::spec_dataset(d);
        save_libsvm(gen_out, ds);
        std::cout << ds.samples() << "x" << ds.dims() << " -> " << gen_out << '\n';
      }
      return 0;
    }
    if (*grid) {
      const ExperimentSpec s = grid_flags.build();
      validate_spec(s);
      const auto g = grid_search_t(s, log_grid(t_min, t_max, t_count), grid_threads);
      std::cout << "t,status,iterations,grad_evals,linops\n";
      for (std::size_t i = 0; i < g.runs.size(); ++i) {
        std::cout << format_double(g.t[i]) << ',';
        if (const auto& r = g.runs[i].result) {
          std::cout << to_string(r->status) << ',' << r->iterations << ',' << r->counters.grad_evals
                    << ',' << r->counters.linop_applies << '\n';
        } else {
          std::cout << "error,,," << '\n';
        }
      }
      if (g.best) std::cout << "best t " << format_double(g.best_t()) << '\n';
      else std::cout << "no run reached the tolerance\n";
      if (!grid_dir.empty()) {
        write_batch(grid_dir, g.runs, [&](std::size_t i, const ExperimentSpec&) {
          return "t_" + format_double(g.t[i]) + ".csv";
        });
      }
      return g.best ? 0 : 2;
    }
    if (*suite) {
      const auto batch = run_batch(default_suite(suite_seed, suite_iters), suite_threads);
      write_batch(suite_dir, batch, run_file_name);
      write_summary(std::cout, batch);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
