#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "adaprox/bench/generators.hpp"
#include "adaprox/bench/problems.hpp"
#include "adaprox/bench/spec.hpp"
#include "adaprox/numkit/io.hpp"
#include "adaprox/numkit/norm.hpp"
#include "adaprox/pd/solvers.hpp"
#include "adaprox/pg/solvers.hpp"

namespace adaprox {

// ---------------------------------------------------------------------------
// Lasso dump: a small header, then D in coordinate form and the vectors b,
// x*, certificate.

inline void write_lasso(std::ostream& out, const LassoInstance& inst) {
  out << "adaprox-lasso 1\n"
      << "lambda " << format_double(inst.lambda) << '\n'
      << "phi_star " << format_double(inst.phi_star) << '\n'
      << "seed " << inst.seed_used << '\n';
  const SparseMatrix d = inst.d.sparseView(0.0, 0.0);
  write_coordinate(out, d);
  write_vector(out, inst.b);
  write_vector(out, inst.x_star);
  write_vector(out, inst.certificate);
}

inline LassoInstance read_lasso(std::istream& in) {
  std::string line;
  auto field = [&](const char* key) {
    if (!std::getline(in, line)) throw ParseError(0, std::string("missing '") + key + "'");
    const auto toks = detail::split_ws(line);
    if (toks.size() != 2 || toks[0] != key) {
      throw ParseError(0, std::string("expected '") + key + " <value>'");
    }
    return std::string(toks[1]);
  };
  if (!std::getline(in, line) || detail::split_ws(line).empty() ||
      detail::split_ws(line)[0] != "adaprox-lasso") {
    throw ParseError(1, "not a lasso dump");
  }
  LassoInstance inst;
  const auto lambda = parse_double(field("lambda"));
  const auto phi = parse_double(field("phi_star"));
  const auto seed = parse_int<std::uint64_t>(field("seed"));
  if (!lambda || !phi || !seed) throw ParseError(0, "malformed lasso header");
  inst.lambda = *lambda;
  inst.phi_star = *phi;
  inst.seed_used = *seed;
  inst.d = DenseMatrix(read_coordinate(in));
  inst.b = read_vector(in);
  inst.x_star = read_vector(in);
  inst.certificate = read_vector(in);
  if (inst.b.size() != inst.d.rows() || inst.x_star.size() != inst.d.cols() ||
      inst.certificate.size() != inst.d.cols()) {
    throw ParseError(0, "lasso dump: inconsistent sizes");
  }
  for (Index j = 0; j < inst.x_star.size(); ++j)
    if (inst.x_star[j] != 0.0) inst.support.push_back(j);
  return inst;
}

inline void save_lasso(const std::string& path, const LassoInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  write_lasso(out, inst);
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline LassoInstance load_lasso(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  try {
    return read_lasso(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline LabeledDataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  try {
    return parse_libsvm(in);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void save_libsvm(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  write_libsvm(out, ds);
  if (!out) throw std::runtime_error(path + ": write failed");
}

// ---------------------------------------------------------------------------

struct RunResult {
  ExperimentSpec spec;
  std::vector<TraceRow> rows;
  Vector x;
  Vector y;  // empty for composite problems
  Termination status = Termination::kMaxIters;
  std::size_t iterations = 0;
  EvalCounters counters;
  std::optional<double> phi_star;

  bool converged() const { return status == Termination::kConverged; }
  std::optional<double> final_residual() const {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
      if (it->residual) return it->residual;
    return std::nullopt;
  }
};

inline bool is_pd_problem(const std::string& problem) {
  return problem == "dual_svm" || problem == "medreg";
}

inline bool is_pd_algorithm(const std::string& algorithm) {
  const auto& v = pd_algorithms();
  return std::find(v.begin(), v.end(), algorithm) != v.end();
}

/// Rejects specs whose fields are out of range or do not fit together.
inline void validate_spec(const ExperimentSpec& s) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (is_pd_problem(s.problem) != is_pd_algorithm(s.algorithm)) {
    fail("algorithm '" + s.algorithm + "' does not apply to problem '" + s.problem + "'");
  }
  if (s.samples <= 0 || s.features <= 0) fail("samples and features must be positive");
  if (!(s.tol >= 0.0)) fail("tol must be >= 0");
  if (!(s.gamma >= 0.0)) fail("gamma must be >= 0 (0 = automatic)");
  if (s.problem == "medreg" && s.p != 1 && s.p != 2) fail("p must be 1 or 2");
  if (s.problem == "cubic" && !(s.cubic_m > 0.0)) fail("cubic_m must be > 0");
  if (s.problem == "logistic" && !(s.lambda >= 0.0)) fail("lambda must be >= 0");
  if (s.problem == "medreg" && !(s.lambda > 0.0)) fail("lambda must be > 0");
  if (s.problem == "dual_svm" && !(s.svm_c > 0.0)) fail("svm_c must be > 0");
  if (s.problem == "cubic" && s.gamma == 0.0 &&
      (s.algorithm == "pgm" || s.algorithm == "fista")) {
    fail("cubic has no global Lipschitz constant; set gamma for " + s.algorithm);
  }
}

namespace detail {

inline LabeledDataset spec_dataset(const ExperimentSpec& s) {
  if (!s.data.empty()) return load_libsvm(s.data);
  if (s.problem == "medreg") return gen_regression(s.samples, s.features, s.seed);
  return gen_classification(s.samples, s.features, s.density, s.label_noise, s.seed);
}

inline double squared_norm(const LinearMap& a) {
  const double n = map_norm(a).value;
  return n * n;
}

inline StopCriteria spec_stop(const ExperimentSpec& s) { return {s.tol, s.max_iters, s.relative}; }

inline RunResult run_pg_spec(const ExperimentSpec& s, const PgProblem& prob, double lip,
                        std::optional<double> phi_star) {
  const Vector x0 = Vector::Zero(prob.dim());
  const StopCriteria stop = spec_stop(s);
  const auto& a = s.algorithm;
  PgResult r;
  if (a == "pgm" || a == "fista") {
    const double gamma = s.gamma > 0.0 ? s.gamma : 1.0 / lip;
    r = a == "pgm" ? solve_pgm_constant(prob, x0, gamma, stop) : solve_fista(prob, x0, gamma, stop);
  } else {
    const double gamma = s.gamma > 0.0 ? s.gamma : init_stepsize(prob, x0);
    if (a == "pgm_ls") {
      r = solve_pgm_backtracking(prob, x0, gamma, s.backtrack_r, stop);
    } else {
      AdaptiveRule rule;
      if (a == "adapgm_mm") rule = AdaptiveRule::malitsky_mishchenko();
      else if (a == "pi") rule = AdaptiveRule::pi_rule(s.pi);
      else if (a == "mm23") rule = AdaptiveRule::mm23();
      rule.gamma_max = s.gamma_max;
      r = solve_adapgm(prob, x0, gamma, gamma, stop, rule);
    }
  }
  RunResult out;
  out.spec = s;
  out.rows = std::move(r.trace);
  out.x = std::move(r.x);
  out.status = r.status;
  out.iterations = r.iterations;
  out.counters = r.counters;
  out.phi_star = phi_star;
  return out;
}

inline RunResult run_pd_spec(const ExperimentSpec& s, const PdProblem& prob, double lip,
                        std::optional<double> phi_star) {
  PdConfig cfg;
  cfg.t = s.t;
  cfg.epsilon = s.epsilon;
  cfg.nu = s.nu;
  cfg.r = s.pd_r;
  cfg.shrink = s.shrink;
  cfg.eta_guess = s.eta_guess == "observed_ratio" ? EtaGuess::kObservedRatio : EtaGuess::kShrink;
  cfg.eta0 = s.eta0;
  if (s.gamma > 0.0) cfg.gamma0 = s.gamma;
  const Vector x0 = Vector::Zero(prob.dim());
  const Vector y0 = Vector::Zero(prob.dual_dim());
  const StopCriteria stop = spec_stop(s);
  PdResult r;
  if (s.algorithm == "adapdm") r = solve_adapdm(prob, cfg, x0, y0, stop);
  else if (s.algorithm == "adapdm_plus") r = solve_adapdm_plus(prob, cfg, x0, y0, stop);
  else r = solve_pdhg_cv(prob, cfg, lip, x0, y0, stop);
  RunResult out;
  out.spec = s;
  out.rows = std::move(r.trace);
  out.x = std::move(r.x);
  out.y = std::move(r.y);
  out.status = r.status;
  out.iterations = r.iterations;
  out.counters = r.counters;
  out.phi_star = phi_star;
  return out;
}

}  // namespace detail

/// Builds the problem a spec describes and runs its solver from zero.
/// Stepsizes left at 0 are picked automatically: 1/L_f for the constant-step
/// methods, the two-probe initial guess for the adaptive and backtracking
/// ones, 1/(2 nu t eta) for the primal-dual ones. Solver errors propagate.
inline RunResult run(const ExperimentSpec& s) {
  validate_spec(s);
  if (s.problem == "lasso") {
    const LassoInstance inst = s.data.empty()
                                   ? gen_lasso(s.lasso_m, s.lasso_n, s.lasso_nstar, s.lasso_rho, s.seed)
                                   : load_lasso(s.data);
    const double lip = detail::squared_norm(LinearMap::dense(inst.d));
    return detail::run_pg_spec(s, build_lasso(inst), lip, s.phi_star ? s.phi_star : inst.phi_star);
  }
  const LabeledDataset ds = detail::spec_dataset(s);
  if (s.problem == "logistic") {
    const PgProblem prob = build_logistic(ds, s.lambda, s.bias);
    const auto m = static_cast<double>(ds.samples());
    const LabeledDataset& use = s.bias ? with_bias_column(ds) : ds;
    const double lip = detail::squared_norm(LinearMap::sparse(use.features)) / (4.0 * m);
    return detail::run_pg_spec(s, prob, lip, s.phi_star);
  }
  if (s.problem == "cubic") {
    return detail::run_pg_spec(s, build_cubic_problem(ds, s.cubic_m), 0.0, s.phi_star);
  }
  if (s.problem == "dual_svm") {
    const double lip = detail::squared_norm(LinearMap::sparse(ds.features));
    return detail::run_pd_spec(s, build_dual_svm(ds, s.svm_c), lip, s.phi_star);
  }
  return detail::run_pd_spec(s, build_medreg(ds, s.p, s.lambda), 0.0, s.phi_star);
}

// ---------------------------------------------------------------------------
// CSV

inline const char* csv_header() {
  return "iter,grad_evals,linops,prox_evals,f_evals,cost,cost_gap,residual,gamma,sigma,eta,time_s";
}

inline void emit_csv(std::ostream& out, const RunResult& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << csv_header() << '\n';
  for (const auto& row : r.rows) {
    std::optional<double> gap;
    if (row.cost && r.phi_star) gap = *row.cost - *r.phi_star;
    const auto& c = row.counters;
    out << row.iter << ',' << c.grad_evals << ',' << c.linop_applies << ','
        << c.prox_calls << ',' << c.f_evals << ',' << opt(row.cost) << ',' << opt(gap) << ','
        << opt(row.residual) << ',' << format_double(row.gamma) << ',' << opt(row.sigma) << ','
        << opt(row.eta) << ',' << format_double(row.time_s) << '\n';
  }
}

inline void emit_csv(const RunResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  emit_csv(out, r);
  if (!out) throw std::runtime_error(path + ": write failed");
}

// ---------------------------------------------------------------------------
// Batches

/// Outcome of one spec in a batch: a result, or the error that stopped it.
struct BatchEntry {
  ExperimentSpec spec;
  std::optional<RunResult> result;
  std::string error;
};

/// Runs every spec on up to `threads` workers (0: hardware concurrency).
/// Results come back in input order whatever the scheduling.
inline std::vector<BatchEntry> run_batch(const std::vector<ExperimentSpec>& specs,
                                         unsigned threads = 0) {
  std::vector<BatchEntry> out(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      out[i].spec = specs[i];
      try {
        out[i].result = run(specs[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, specs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

/// `count` log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo = 0.01, double hi = 100.0, std::size_t count = 9) {
  if (!(lo > 0.0 && hi >= lo) || count == 0) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> v(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

struct GridResult {
  std::vector<double> t;
  std::vector<BatchEntry> runs;  // one per t, same order
  std::optional<std::size_t> best;  // none when no run converged

  double best_t() const { return best ? t[*best] : std::nan(""); }
};

/// Runs the experiment once per t and keeps the converged run with the fewest
/// gradient evaluations; ties go to the earlier grid point.
inline GridResult grid_search_t(const ExperimentSpec& spec, const std::vector<double>& t_grid = log_grid(),
                                unsigned threads = 0) {
  std::vector<ExperimentSpec> specs;
  for (double t : t_grid) {
    ExperimentSpec s = spec;
    s.t = t;
    specs.push_back(s);
  }
  GridResult g;
  g.t = t_grid;
  g.runs = run_batch(specs, threads);
  for (std::size_t i = 0; i < g.runs.size(); ++i) {
    const auto& r = g.runs[i].result;
    if (!r || !r->converged()) continue;
    if (!g.best || r->counters.grad_evals < g.runs[*g.best].result->counters.grad_evals) g.best = i;
  }
  return g;
}

/// Desk-scale battery covering every problem family and solver.
inline std::vector<ExperimentSpec> default_suite(std::uint64_t seed = 0, std::size_t max_iters = 20000) {
  std::vector<ExperimentSpec> out;
  auto add = [&](const std::string& problem, const std::string& algorithm,
                 const std::function<void(ExperimentSpec&)>& tweak = {}) {
    ExperimentSpec s;
    s.problem = problem;
    s.algorithm = algorithm;
    s.seed = seed;
    s.max_iters = max_iters;
    if (tweak) tweak(s);
    out.push_back(s);
  };
  for (const auto& a : pg_algorithms()) add("lasso", a);
  add("lasso", "pi", [](ExperimentSpec& s) { s.pi = 2.0; });
  for (const auto& a : {"adapgm", "adapgm_mm", "pgm", "pgm_ls", "fista"}) add("logistic", a);
  for (const auto& a : {"adapgm", "adapgm_mm", "mm23", "pgm_ls"}) add("cubic", a);
  for (const auto& a : pd_algorithms()) {
    add("dual_svm", a, [](ExperimentSpec& s) {
      s.samples = 60;
      s.features = 40;
    });
  }
  for (int p : {1, 2}) {
    for (const auto& a : pd_algorithms()) {
      add("medreg", a, [p](ExperimentSpec& s) {
        s.samples = 40;
        s.features = 60;
        s.p = p;
        s.lambda = 10.0;
      });
    }
  }
  return out;
}

inline const char* summary_header() {
  return "index,problem,algorithm,status,iterations,grad_evals,linops,prox_evals,f_evals,final_cost,"
         "final_residual,error";
}

/// One summary line per batch entry, in batch order.
inline void write_summary(std::ostream& out, const std::vector<BatchEntry>& batch) {
  out << summary_header() << '\n';
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& e = batch[i];
    out << i << ',' << e.spec.problem << ',' << e.spec.algorithm << ',';
    if (e.result) {
      const auto& r = *e.result;
      const auto& c = r.counters;
      std::string cost, res;
      if (!r.rows.empty() && r.rows.back().cost) cost = format_double(*r.rows.back().cost);
      if (const auto v = r.final_residual()) res = format_double(*v);
      out << to_string(r.status) << ',' << r.iterations << ',' << c.grad_evals << ','
          << c.linop_applies << ',' << c.prox_calls << ',' << c.f_evals << ','
          << cost << ',' << res << ',';
    } else {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << "error,,,,,,,," << msg;
    }
    out << '\n';
  }
}

}  // namespace adaprox
