#pragma once

#include <algorithm>
#include <cmath>

#include "adaprox/curvature.hpp"
#include "adaprox/oracles/prox.hpp"
#include "adaprox/pd/problem.hpp"

namespace adaprox {

/// Primal stepsize of the adaptive primal-dual methods: the minimum of
///   (a) gamma sqrt(1 + gamma/gamma_prev)
///   (b) 1 / (2 nu t eta_next)
///   (c) gamma sqrt((1 - 4 xi) / (2 (1 + eps) (sqrt(delta^2 + (t eta_next gamma)^2 (1 - 4 xi)) + delta)))
/// with xi = (t gamma eta_ref (1 + eps))^2. eta_ref is ||A|| for adaPDM and
/// the previous accepted estimate for adaPDM+. Written with the radical in
/// the denominator, (c) stays finite-or-inf for eta_next = 0, where the whole
/// rule collapses to the adaPGM one.
inline double adapdm_stepsize(double gamma_prev, double gamma, const CurvaturePair& pair,
                              double eta_next, double eta_ref, const PdConfig& cfg) {
  const double grow = std::sqrt(1.0 + gamma / gamma_prev);
  const double term_b = eta_next > 0.0 ? 1.0 / (2.0 * cfg.nu * cfg.t * eta_next) : kInf;

  const double tg = cfg.t * gamma * eta_ref * (1.0 + cfg.epsilon);
  const double one_minus = 1.0 - 4.0 * tg * tg;
  if (!(one_minus > 0.0)) {
    throw InvariantBreach("adaPDM stepsize: 1 - 4 xi <= 0; gamma0 exceeds 1/(2 nu t eta)");
  }
  const double d = delta(gamma, pair);
  const double te = cfg.t * eta_next * gamma;
  const double a = te * te * one_minus;
  double factor = kInf;  // (c) = gamma * factor
  if (a == 0.0) {
    // sqrt(d^2) + d = 2 [d]_+
    if (d > 0.0) factor = std::sqrt(one_minus) / (2.0 * std::sqrt((1.0 + cfg.epsilon) * d));
  } else {
    const double root = std::hypot(d, std::sqrt(a));
    // root + d cancels for d < 0; use a / (root - d) instead
    const double s = d >= 0.0 ? root + d : a / (root - d);
    if (s > 0.0) factor = std::sqrt(one_minus / (2.0 * (1.0 + cfg.epsilon) * s));
  }
  return std::min(gamma * std::min(grow, factor), term_b);
}

/// Positive root of t^2 ||A||^2 gamma^2 + (L_f / 2) gamma - 1 = 0, i.e. the
/// largest gamma with gamma sigma ||A||^2 <= 1 - gamma L_f / 2, sigma = t^2 gamma.
inline double pdhg_cv_stepsize(double t, double norm_a, double lipschitz_f) {
  const double half = 0.5 * lipschitz_f;
  const double tn = t * norm_a;
  const double den = half + std::sqrt(half * half + 4.0 * tn * tn);
  if (!(den > 0.0)) {
    throw std::invalid_argument("pdhg_cv_stepsize: needs ||A|| > 0 or L_f > 0");
  }
  return 2.0 / den;
}

/// prox_{sigma h*}(y + sigma((1 + rho) A x - rho A x_prev)) from cached images.
inline Vector dual_step(const ProxOracle& h, double sigma, const Vector& y, const Vector& ax,
                        const Vector& ax_prev, double rho, EvalCounters* counters = nullptr) {
  if (counters) ++counters->prox_calls;
  return h.prox_conjugate(sigma, y + sigma * ((1.0 + rho) * ax - rho * ax_prev));
}

/// prox_{gamma g}(x - gamma (grad + A^T y_next)) given the image A^T y_next.
inline Vector primal_step_cached(const PdProblem& prob, const Vector& x, const Vector& grad,
                                 const Vector& aty_next, double gamma,
                                 EvalCounters* counters = nullptr) {
  if (counters) ++counters->prox_calls;
  return prob.g->prox(gamma, x - gamma * (grad + aty_next));
}

/// One adjoint application plus one prox.
inline Vector primal_step(const PdProblem& prob, const Vector& x, const Vector& grad,
                          const Vector& y_next, double gamma, EvalCounters* counters = nullptr) {
  return primal_step_cached(prob, x, grad, prob.a.adjoint(y_next, counters), gamma, counters);
}

struct PdResidual {
  Vector v1;  // dual block
  Vector v2;  // primal block
  double norm = 0.0;
};

/// Residual at k+1 assembled from cached quantities only:
///   v1 = (y^k - y^{k+1})/sigma + rho (A x^k - A x^{k-1}) + (A x^k - A x^{k+1})
///   v2 = (x^k - x^{k+1})/gamma + grad f(x^{k+1}) - grad f(x^k)
/// with sigma = sigma_{k+1}, gamma = gamma_{k+1}, rho = gamma_{k+1}/gamma_k.
inline PdResidual pd_residual(const Vector& y, const Vector& y_next, const Vector& x,
                              const Vector& x_next, const Vector& ax_prev, const Vector& ax,
                              const Vector& ax_next, const Vector& grad, const Vector& grad_next,
                              double sigma, double gamma, double rho) {
  PdResidual r;
  r.v1 = (y - y_next) / sigma + rho * (ax - ax_prev) + (ax - ax_next);
  r.v2 = (x - x_next) / gamma + grad_next - grad;
  r.norm = std::sqrt(r.v1.squaredNorm() + r.v2.squaredNorm());
  return r;
}

}  // namespace adaprox
