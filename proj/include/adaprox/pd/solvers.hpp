#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "adaprox/curvature.hpp"
#include "adaprox/numkit/norm.hpp"
#include "adaprox/pd/problem.hpp"
#include "adaprox/pd/steps.hpp"
#include "adaprox/pg/solvers.hpp"
#include "adaprox/trace.hpp"

namespace adaprox {

/// One accepted adaPDM+ linesearch: the exit test eta * ||dy|| >= ||A^T dy||
/// and what the inner trials cost.
struct LinesearchExit {
  std::size_t iter = 0;  // outer iteration k producing (x^{k+1}, y^{k+1})
  std::size_t trials = 0;
  double eta = 0.0;
  double dy_norm = 0.0;
  double aty_norm = 0.0;
  EvalCounters cost;  // counters spent inside the inner loop
};

struct PdResult {
  Vector x;
  Vector y;
  Termination status = Termination::kMaxIters;
  /// Primal-dual steps taken, the initial primal step included.
  std::size_t iterations = 0;
  std::vector<TraceRow> trace;
  EvalCounters counters;
  IterateHistory history;  // x, gamma, y, eta when RunOptions::record_iterates
  std::vector<LinesearchExit> linesearch;  // adaPDM+ only
  double eta = 0.0;  // final norm estimate (constant for adaPDM)
};

/// Explicit starting triplet (x^{-1}, x^0, y^0) with stepsizes
/// gamma_{-1} <= gamma_0.
struct PdWarmStart {
  Vector x_prev;
  Vector x;
  Vector y;
  double gamma_prev = 0.0;
  double gamma = 0.0;
};

namespace detail {

enum class PdMode { kFixedNorm, kLinesearch, kConstant };

// Curvature pair with the zero-displacement case mapped to zeros: in the
// primal-dual loop x^k = x^{k-1} does not mean y has settled.
inline CurvaturePair pd_pair(const Vector& x_prev, const Vector& x, const Vector& g_prev,
                             const Vector& g) {
  if (x == x_prev) return {};
  return local_estimates(x_prev, x, g_prev, g);
}

inline double next_eta_guess(const PdConfig& cfg, double eta, double last_ratio) {
  const double shrunk = cfg.shrink * eta;
  if (cfg.eta_guess == EtaGuess::kShrink) return shrunk;
  return std::max(shrunk, std::min(eta, (1.0 + 1e-12) * last_ratio));
}

class PdRecorder {
 public:
  PdRecorder(const PdProblem& prob, const PdConfig& cfg, const RunOptions& opts,
             PdResult& out)
      : prob_(prob), cfg_(cfg), opts_(opts), out_(out) {}

  void row(std::size_t k, const Vector& x, std::optional<double> residual, double gamma,
           double eta, bool has_eta) {
    TraceRow r;
    r.iter = k;
    r.counters = out_.counters;
    if (opts_.record_cost) r.cost = trace_cost(prob_.cost(x));
    r.residual = residual;
    r.gamma = gamma;
    r.sigma = cfg_.t * cfg_.t * gamma;
    if (has_eta) r.eta = eta;
    r.time_s = clock_.seconds();
    out_.trace.push_back(r);
  }

  void iterate(const Vector& x, double gamma) {
    if (!opts_.record_iterates) return;
    out_.history.x.push_back(x);
    out_.history.gamma.push_back(gamma);
  }
  void dual(const Vector& y, double eta) {
    if (!opts_.record_iterates) return;
    out_.history.y.push_back(y);
    out_.history.eta.push_back(eta);
  }

  bool cost_ok() const {
    return out_.trace.empty() || !out_.trace.back().cost ||
           !std::isnan(*out_.trace.back().cost);
  }

 private:
  const PdProblem& prob_;
  const PdConfig& cfg_;
  const RunOptions& opts_;
  PdResult& out_;
  Stopwatch clock_;
};

// Shared loop of adaPDM (fixed eta), adaPDM+ (eta by linesearch) and the
// constant-stepsize PDHG/Condat-Vu iteration.
//
// Iteration k starts at (x^k, y^k) with caches for A x^{k-2..k}, A^T y^k and
// grad f(x^{k-1}). It evaluates grad f(x^k), reports the residual v^k for
// k >= 1, then produces (x^{k+1}, y^{k+1}). Per step: one gradient, one A,
// one A^T (per linesearch trial for adaPDM+), and two proxes (one dual prox
// per trial).
inline PdResult run_pd(const PdProblem& prob, const PdConfig& cfg, PdMode mode,
                       const PdWarmStart& start, bool start_is_init, double eta0,
                       const StopCriteria& stop, const RunOptions& opts) {
  PdResult out;
  PdRecorder rec(prob, cfg, opts, out);
  EvalCounters& cnt = out.counters;
  const LinearMap& a = prob.a;
  const bool has_eta = mode != PdMode::kConstant;
  const double t2 = cfg.t * cfg.t;

  double eta = eta0;
  double gamma_prev = start.gamma_prev;
  double gamma = start.gamma;
  Vector x_prev = start.x_prev;
  Vector y = start.y;
  Vector g_prev = prob.f->gradient(x_prev, &cnt);
  Vector ax_prev = a.apply(x_prev, &cnt);
  Vector aty = a.adjoint(y, &cnt);
  Vector x;
  if (start_is_init) {
    x = primal_step_cached(prob, x_prev, g_prev, aty, gamma, &cnt);
  } else {
    x = start.x;
  }
  Vector ax = a.apply(x, &cnt);
  out.iterations = 1;
  rec.iterate(x_prev, gamma_prev);
  rec.iterate(x, gamma);
  rec.dual(y, eta);

  // quantities of the previous step, for the residual
  Vector y_old, ax_old;
  double last_ratio = 0.0;
  double v_ref = 0.0;

  for (std::size_t k = 0;; ++k) {
    if (!all_finite(x) || !all_finite(y)) {
      rec.row(k, x, std::numeric_limits<double>::quiet_NaN(), gamma, eta, has_eta);
      out.status = Termination::kNonFinite;
      break;
    }
    Vector g = prob.f->gradient(x, &cnt);
    std::optional<double> res;
    if (k >= 1) {
      // x_prev, y_old, ax_old are x^{k-1}, y^{k-1}, A x^{k-2}
      res = pd_residual(y_old, y, x_prev, x, ax_old, ax_prev, ax, g_prev, g, t2 * gamma, gamma,
                        gamma / gamma_prev)
                .norm;
      if (k == 1) v_ref = *res;
    }
    rec.row(k, x, res, gamma, eta, has_eta);
    if ((res && !std::isfinite(*res)) || !rec.cost_ok()) {
      out.status = Termination::kNonFinite;
      break;
    }
    if (res && *res <= stop.threshold(v_ref)) {
      out.status = Termination::kConverged;
      break;
    }
    if (k >= stop.max_iters) {
      out.status = Termination::kMaxIters;
      break;
    }

    double gamma_next = gamma;
    Vector y_next, aty_next;
    if (mode == PdMode::kConstant) {
      y_next = dual_step(*prob.h, t2 * gamma, y, ax, ax_prev, 1.0, &cnt);
      aty_next = a.adjoint(y_next, &cnt);
    } else if (mode == PdMode::kFixedNorm) {
      const CurvaturePair pair = pd_pair(x_prev, x, g_prev, g);
      gamma_next = adapdm_stepsize(gamma_prev, gamma, pair, eta, eta, cfg);
      y_next = dual_step(*prob.h, t2 * gamma_next, y, ax, ax_prev, gamma_next / gamma, &cnt);
      aty_next = a.adjoint(y_next, &cnt);
    } else {
      const CurvaturePair pair = pd_pair(x_prev, x, g_prev, g);
      const EvalCounters before = cnt;
      double eta_next = next_eta_guess(cfg, eta, last_ratio);
      LinesearchExit exit;
      exit.iter = k;
      bool accepted = false;
      Vector aty_dy;
      for (std::size_t trial = 1; trial <= cfg.max_inner; ++trial) {
        gamma_next = adapdm_stepsize(gamma_prev, gamma, pair, eta_next, eta, cfg);
        y_next = dual_step(*prob.h, t2 * gamma_next, y, ax, ax_prev, gamma_next / gamma, &cnt);
        const Vector dy = y_next - y;
        aty_dy = a.adjoint(dy, &cnt);
        exit.trials = trial;
        exit.dy_norm = dy.norm();
        exit.aty_norm = aty_dy.norm();
        if (eta_next * exit.dy_norm >= exit.aty_norm) {
          accepted = true;
          break;
        }
        eta_next *= cfg.r;
      }
      exit.eta = eta_next;
      exit.cost = cnt;
      exit.cost.grad_evals -= before.grad_evals;
      exit.cost.linop_applies -= before.linop_applies;
      exit.cost.adjoint_applies -= before.adjoint_applies;
      exit.cost.prox_calls -= before.prox_calls;
      exit.cost.f_evals -= before.f_evals;
      out.linesearch.push_back(exit);
      if (!accepted) {
        out.status = Termination::kLinesearchFailed;
        break;
      }
      if (exit.dy_norm > 0.0) last_ratio = exit.aty_norm / exit.dy_norm;
      eta = eta_next;
      aty_next = aty + aty_dy;
    }

    Vector x_next = primal_step_cached(prob, x, g, aty_next, gamma_next, &cnt);
    Vector ax_next = a.apply(x_next, &cnt);
    ++out.iterations;

    y_old = std::move(y);
    y = std::move(y_next);
    aty = std::move(aty_next);
    ax_old = std::move(ax_prev);
    ax_prev = std::move(ax);
    ax = std::move(ax_next);
    x_prev = std::move(x);
    x = std::move(x_next);
    g_prev = std::move(g);
    gamma_prev = gamma;
    gamma = gamma_next;
    rec.iterate(x, gamma);
    rec.dual(y, eta);
  }
  out.x = std::move(x);
  out.y = std::move(y);
  out.eta = eta;
  return out;
}

// A warm start may sit anywhere on a run, so it skips the ordering check.
inline void check_gamma_bound(double gamma0, double gamma_minus1, double eta,
                              const PdConfig& cfg, bool ordered = true) {
  if (!(gamma0 > 0.0) || !(gamma_minus1 > 0.0)) {
    throw std::invalid_argument("stepsizes must be > 0");
  }
  if (ordered && gamma_minus1 > gamma0) {
    throw std::invalid_argument("need 0 < gamma_{-1} <= gamma_0");
  }
  if (eta > 0.0 && gamma0 > (1.0 + 1e-12) / (2.0 * cfg.nu * cfg.t * eta)) {
    throw std::invalid_argument("gamma_0 exceeds 1/(2 nu t eta)");
  }
}

inline double default_gamma0(const PdProblem& prob, const PdConfig& cfg, double eta,
                             const Vector& x_init) {
  if (cfg.gamma0) return *cfg.gamma0;
  if (eta > 0.0) return 1.0 / (2.0 * cfg.nu * cfg.t * eta);
  // A = 0: the primal part alone decides
  return init_stepsize(PgProblem(prob.f, prob.g), x_init);
}

inline void check_start(const PdProblem& prob, const Vector& x, const Vector& y) {
  require_dim(x.size(), prob.dim(), "primal start");
  require_dim(y.size(), prob.dual_dim(), "dual start");
}

inline double operator_norm(const PdProblem& prob, const PdConfig& cfg) {
  return cfg.norm_estimate ? *cfg.norm_estimate : map_norm(prob.a).value;
}

}  // namespace detail

/// Adaptive primal-dual method with a known operator norm (power method
/// unless PdConfig::norm_estimate is set).
inline PdResult solve_adapdm(const PdProblem& prob, const PdConfig& cfg, const Vector& x_init,
                             const Vector& y_init, const StopCriteria& stop = {},
                             const RunOptions& opts = {}) {
  cfg.validate();
  detail::check_start(prob, x_init, y_init);
  const double eta = detail::operator_norm(prob, cfg);
  const double gamma0 = detail::default_gamma0(prob, cfg, eta, x_init);
  const double gamma_minus1 = cfg.gamma_minus1.value_or(gamma0);
  detail::check_gamma_bound(gamma0, gamma_minus1, eta, cfg);
  return detail::run_pd(prob, cfg, detail::PdMode::kFixedNorm,
                        {x_init, Vector(), y_init, gamma_minus1, gamma0}, true, eta, stop, opts);
}

/// adaPDM continued from an explicit triplet instead of the usual
/// initialization. Stepsizes come from the warm start; cfg.gamma0 is unused.
inline PdResult solve_adapdm(const PdProblem& prob, const PdConfig& cfg,
                             const PdWarmStart& start, const StopCriteria& stop = {},
                             const RunOptions& opts = {}) {
  cfg.validate();
  detail::check_start(prob, start.x, start.y);
  require_dim(start.x_prev.size(), prob.dim(), "warm start x_prev");
  const double eta = detail::operator_norm(prob, cfg);
  detail::check_gamma_bound(start.gamma, start.gamma_prev, eta, cfg, false);
  return detail::run_pd(prob, cfg, detail::PdMode::kFixedNorm, start, false, eta, stop, opts);
}

/// Adaptive primal-dual method with the operator-norm linesearch. Inner
/// trials re-run the stepsize and the dual step only: no gradient and no
/// forward application of A.
inline PdResult solve_adapdm_plus(const PdProblem& prob, const PdConfig& cfg,
                                  const Vector& x_init, const Vector& y_init,
                                  const StopCriteria& stop = {}, const RunOptions& opts = {}) {
  cfg.validate();
  detail::check_start(prob, x_init, y_init);
  const double eta0 = cfg.eta0 ? *cfg.eta0 : prob.a.frobenius_norm();
  if (!(eta0 > 0.0)) throw std::invalid_argument("adaPDM+: eta0 must be > 0");
  const double gamma0 = detail::default_gamma0(prob, cfg, eta0, x_init);
  const double gamma_minus1 = cfg.gamma_minus1.value_or(gamma0);
  detail::check_gamma_bound(gamma0, gamma_minus1, eta0, cfg);
  return detail::run_pd(prob, cfg, detail::PdMode::kLinesearch,
                        {x_init, Vector(), y_init, gamma_minus1, gamma0}, true, eta0, stop,
                        opts);
}

/// PDHG (f = 0) / Condat-Vu with constant stepsizes: gamma is the positive
/// root of t^2 ||A||^2 gamma^2 + (L_f/2) gamma = 1 and sigma = t^2 gamma.
/// Started like adaPDM. Uses cfg.t and cfg.norm_estimate only.
inline PdResult solve_pdhg_cv(const PdProblem& prob, const PdConfig& cfg, double lipschitz_f,
                              const Vector& x_init, const Vector& y_init,
                              const StopCriteria& stop = {}, const RunOptions& opts = {}) {
  if (!(cfg.t > 0.0)) throw std::invalid_argument("PDHG/CV: t must be > 0");
  if (!(lipschitz_f >= 0.0)) throw std::invalid_argument("PDHG/CV: L_f must be >= 0");
  detail::check_start(prob, x_init, y_init);
  const double norm_a = detail::operator_norm(prob, cfg);
  const double gamma = pdhg_cv_stepsize(cfg.t, norm_a, lipschitz_f);
  return detail::run_pd(prob, cfg, detail::PdMode::kConstant,
                        {x_init, Vector(), y_init, gamma, gamma}, true, norm_a, stop, opts);
}

}  // namespace adaprox
