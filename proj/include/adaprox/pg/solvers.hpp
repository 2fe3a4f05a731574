#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adaprox/curvature.hpp"
#include "adaprox/oracles/prox.hpp"
#include "adaprox/oracles/smooth.hpp"
#include "adaprox/pg/stepsize.hpp"
#include "adaprox/trace.hpp"

namespace adaprox {

/// minimize f(x) + g(x).
struct PgProblem {
  SmoothPtr f;
  ProxPtr g;

  PgProblem(SmoothPtr f_, ProxPtr g_) : f(std::move(f_)), g(std::move(g_)) {
    if (!f || !g) throw std::invalid_argument("PgProblem: null oracle");
    if (g->dim() != 0) require_dim(g->dim(), f->dim(), "PgProblem: g");
  }

  Index dim() const { return f->dim(); }

  /// phi(x), uncounted.
  double cost(const Vector& x) const { return f->value(x) + g->value(x); }
};

/// prox_{gamma g}(x - gamma grad).
inline Vector pg_step(const PgProblem& prob, const Vector& x, const Vector& grad, double gamma,
                      EvalCounters* counters = nullptr) {
  if (counters) ++counters->prox_calls;
  return prob.g->prox(gamma, x - gamma * grad);
}

struct PgResult {
  Vector x;
  Termination status = Termination::kMaxIters;
  /// Proximal-gradient steps taken, the initial step included.
  std::size_t iterations = 0;
  std::vector<TraceRow> trace;
  EvalCounters counters;
  IterateHistory history;  // filled when RunOptions::record_iterates
};

namespace detail {

class PgRecorder {
 public:
  PgRecorder(const PgProblem& prob, const RunOptions& opts, PgResult& out)
      : prob_(prob), opts_(opts), out_(out) {}

  void row(std::size_t k, const Vector& x, double residual, double gamma) {
    TraceRow r;
    r.iter = k;
    r.counters = out_.counters;
    if (opts_.record_cost) r.cost = trace_cost(prob_.cost(x));
    r.residual = residual;
    r.gamma = gamma;
    r.time_s = clock_.seconds();
    out_.trace.push_back(r);
  }

  void iterate(const Vector& x, double gamma) {
    if (!opts_.record_iterates) return;
    out_.history.x.push_back(x);
    out_.history.gamma.push_back(gamma);
  }

  bool cost_ok() const {
    return out_.trace.empty() || !out_.trace.back().cost ||
           !std::isnan(*out_.trace.back().cost);
  }

 private:
  const PgProblem& prob_;
  const RunOptions& opts_;
  PgResult& out_;
  Stopwatch clock_;
};

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be > 0");
}

// Shared loop of the methods whose residual is
//   v^k = (x^{k-1} - x^k)/gamma_k - (grad f(x^{k-1}) - grad f(x^k)).
// `next_gamma(gamma_prev, gamma, x_prev, x, g_prev, g)` returns gamma_{k+1}.
template <class NextGamma>
PgResult run_forward_backward(const PgProblem& prob, const Vector& x_init, double gamma0,
                              double gamma_minus1, const StopCriteria& stop,
                              const RunOptions& opts, NextGamma&& next_gamma) {
  require_dim(x_init.size(), prob.dim(), "x_init");
  PgResult out;
  PgRecorder rec(prob, opts, out);
  EvalCounters& cnt = out.counters;

  Vector x_prev = x_init;
  Vector g_prev = prob.f->gradient(x_prev, &cnt);
  double gamma_prev = gamma_minus1;
  double gamma = gamma0;
  Vector x = pg_step(prob, x_prev, g_prev, gamma, &cnt);
  out.iterations = 1;
  rec.iterate(x_prev, gamma_prev);
  rec.iterate(x, gamma);

  double v_ref = 0.0;
  for (std::size_t k = 0;; ++k) {
    if (!all_finite(x)) {
      rec.row(k, x, std::numeric_limits<double>::quiet_NaN(), gamma);
      out.status = Termination::kNonFinite;
      break;
    }
    if (x == x_prev) {
      rec.row(k, x, 0.0, gamma);
      out.status = Termination::kFixedPoint;
      break;
    }
    Vector g = prob.f->gradient(x, &cnt);
    const double res = ((x_prev - x) / gamma - (g_prev - g)).norm();
    if (k == 0) v_ref = res;
    rec.row(k, x, res, gamma);
    if (!std::isfinite(res) || !rec.cost_ok()) {
      out.status = Termination::kNonFinite;
      break;
    }
    if (res <= stop.threshold(v_ref)) {
      out.status = Termination::kConverged;
      break;
    }
    if (k >= stop.max_iters) {
      out.status = Termination::kMaxIters;
      break;
    }
    const double gamma_next = next_gamma(gamma_prev, gamma, x_prev, x, g_prev, g);
    Vector x_next = pg_step(prob, x, g, gamma_next, &cnt);
    ++out.iterations;
    x_prev = std::move(x);
    x = std::move(x_next);
    g_prev = std::move(g);
    gamma_prev = gamma;
    gamma = gamma_next;
    rec.iterate(x, gamma);
  }
  out.x = std::move(x);
  return out;
}

}  // namespace detail

/// Adaptive proximal gradient method.
///
/// One gradient per iteration: the gradient at the previous point is cached
/// for the curvature estimates. Stops on the residual test, at max_iters, or
/// when two consecutive iterates coincide exactly (a fixed point; no gradient
/// is evaluated there). Otherwise grad_evals == iterations + 1.
inline PgResult solve_adapgm(const PgProblem& prob, const Vector& x_init, double gamma0,
                             double gamma_minus1, const StopCriteria& stop = {},
                             const AdaptiveRule& rule = {}, const RunOptions& opts = {}) {
  detail::require_positive(gamma0, "gamma0");
  detail::require_positive(gamma_minus1, "gamma_minus1");
  if (gamma0 < gamma_minus1) throw std::invalid_argument("adaPGM requires gamma0 >= gamma_minus1");
  rule.validate();
  return detail::run_forward_backward(
      prob, x_init, gamma0, gamma_minus1, stop, opts,
      [&rule](double gp, double g, const Vector& xp, const Vector& x, const Vector& gxp,
              const Vector& gx) { return rule.next(gp, g, local_estimates(xp, x, gxp, gx)); });
}

/// Proximal gradient with a constant stepsize (typically 1/L_f).
inline PgResult solve_pgm_constant(const PgProblem& prob, const Vector& x_init, double gamma,
                                   const StopCriteria& stop = {}, const RunOptions& opts = {}) {
  detail::require_positive(gamma, "gamma");
  return detail::run_forward_backward(
      prob, x_init, gamma, gamma, stop, opts,
      [gamma](double, double, const Vector&, const Vector&, const Vector&, const Vector&) {
        return gamma;
      });
}

/// Proximal gradient with backtracking on the upper quadratic model, without
/// monotone decrease. Each iteration starts from r * gamma_prev (the very
/// first from gamma_init) and halves until
///   f(x+) <= f(x) + <grad f(x), x+ - x> + ||x+ - x||^2 / (2 gamma).
/// Every test costs one counted f evaluation.
inline PgResult solve_pgm_backtracking(const PgProblem& prob, const Vector& x_init,
                                       double gamma_init, double r = 1.0,
                                       const StopCriteria& stop = {},
                                       const RunOptions& opts = {}) {
  detail::require_positive(gamma_init, "gamma_init");
  if (!(r >= 1.0)) throw std::invalid_argument("backtracking: r must be >= 1");
  require_dim(x_init.size(), prob.dim(), "x_init");
  PgResult out;
  detail::PgRecorder rec(prob, opts, out);
  EvalCounters& cnt = out.counters;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  Vector x = x_init;
  Vector g = prob.f->gradient(x, &cnt);
  double fx = prob.f->value(x, &cnt);
  double gamma = gamma_init;
  rec.iterate(x, gamma);
  double v_ref = 0.0;

  for (std::size_t k = 0;; ++k) {
    double trial = k == 0 ? gamma_init : r * gamma;
    Vector x_next;
    double f_next = 0.0;
    for (;;) {
      x_next = pg_step(prob, x, g, trial, &cnt);
      f_next = prob.f->value(x_next, &cnt);
      const Vector d = x_next - x;
      const double model = fx + g.dot(d) + d.squaredNorm() / (2.0 * trial);
      // a few ulps of slack so the tight case is not rejected by rounding
      if (f_next <= model + 4.0 * kEps * (std::abs(fx) + std::abs(f_next))) break;
      trial *= 0.5;
      if (trial < 1e-300) {
        out.status = Termination::kStepsizeUnderflow;
        out.x = x;
        return out;
      }
    }
    ++out.iterations;
    gamma = trial;
    rec.iterate(x_next, gamma);
    if (!all_finite(x_next)) {
      rec.row(k, x_next, std::numeric_limits<double>::quiet_NaN(), gamma);
      out.status = Termination::kNonFinite;
      x = std::move(x_next);
      break;
    }
    if (x_next == x) {
      rec.row(k, x_next, 0.0, gamma);
      out.status = Termination::kFixedPoint;
      x = std::move(x_next);
      break;
    }
    Vector g_next = prob.f->gradient(x_next, &cnt);
    const double res = ((x - x_next) / gamma - (g - g_next)).norm();
    if (k == 0) v_ref = res;
    x = std::move(x_next);
    g = std::move(g_next);
    fx = f_next;
    rec.row(k, x, res, gamma);
    if (!std::isfinite(res) || !rec.cost_ok()) {
      out.status = Termination::kNonFinite;
      break;
    }
    if (res <= stop.threshold(v_ref)) {
      out.status = Termination::kConverged;
      break;
    }
    if (k >= stop.max_iters) {
      out.status = Termination::kMaxIters;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

/// t+ = (1 + sqrt(1 + 4 t^2)) / 2.
inline double fista_momentum(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

/// Accelerated proximal gradient with constant stepsize and t_1 = 1.
/// The residual reported is the gradient-mapping norm ||y - x^k|| / gamma
/// at the extrapolated point y, which needs no extra gradient.
inline PgResult solve_fista(const PgProblem& prob, const Vector& x_init, double gamma,
                            const StopCriteria& stop = {}, const RunOptions& opts = {}) {
  detail::require_positive(gamma, "gamma");
  require_dim(x_init.size(), prob.dim(), "x_init");
  PgResult out;
  detail::PgRecorder rec(prob, opts, out);
  EvalCounters& cnt = out.counters;

  Vector x_old = x_init;
  Vector y = x_init;
  double t = 1.0;
  rec.iterate(x_old, gamma);
  double v_ref = 0.0;
  for (std::size_t k = 0;; ++k) {
    const Vector gy = prob.f->gradient(y, &cnt);
    Vector x = pg_step(prob, y, gy, gamma, &cnt);
    ++out.iterations;
    rec.iterate(x, gamma);
    const double res = (y - x).norm() / gamma;
    if (k == 0) v_ref = res;
    rec.row(k, x, res, gamma);
    if (!all_finite(x) || !std::isfinite(res) || !rec.cost_ok()) {
      out.status = Termination::kNonFinite;
      x_old = std::move(x);
      break;
    }
    const bool done = res <= stop.threshold(v_ref);
    if (done || k >= stop.max_iters) {
      out.status = done ? Termination::kConverged : Termination::kMaxIters;
      x_old = std::move(x);
      break;
    }
    const double t_next = fista_momentum(t);
    y = x + ((t - 1.0) / t_next) * (x - x_old);
    x_old = std::move(x);
    t = t_next;
  }
  out.x = std::move(x_old);
  return out;
}

namespace detail {

// 1/c, then 1/L, then 1.0 when both estimates are degenerate.
inline double inverse_curvature(const CurvaturePair& p) {
  if (p.cee > 0.0 && std::isfinite(1.0 / p.cee)) return 1.0 / p.cee;
  if (p.big_l > 0.0 && std::isfinite(1.0 / p.big_l)) return 1.0 / p.big_l;
  return 1.0;
}

}  // namespace detail

/// Initial stepsize guess from two local curvature probes: first between
/// x_init and a nearby point along a fixed-seed unit direction, then between
/// x_init and one prox-gradient step taken with the first guess.
inline double init_stepsize(const PgProblem& prob, const Vector& x_init,
                            double perturb_scale = 1e-6, EvalCounters* counters = nullptr) {
  detail::require_positive(perturb_scale, "perturb_scale");
  require_dim(x_init.size(), prob.dim(), "x_init");
  std::mt19937_64 rng(0);
  std::normal_distribution<double> normal;
  Vector u(x_init.size());
  for (Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  if (u.norm() == 0.0) u.setOnes();
  u.normalize();

  const Vector x_tilde = x_init + perturb_scale * (1.0 + x_init.norm()) * u;
  const Vector g0 = prob.f->gradient(x_init, counters);
  double guess = 1.0;
  if (x_tilde != x_init) {
    const Vector g_tilde = prob.f->gradient(x_tilde, counters);
    guess = detail::inverse_curvature(local_estimates(x_init, x_tilde, g0, g_tilde));
  }
  const Vector x1 = pg_step(prob, x_init, g0, guess, counters);
  if (x1 == x_init || !all_finite(x1)) return guess;
  const Vector g1 = prob.f->gradient(x1, counters);
  return detail::inverse_curvature(local_estimates(x_init, x1, g0, g1));
}

}  // namespace adaprox
