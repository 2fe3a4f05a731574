#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "adaprox/pd/problem.hpp"
#include "adaprox/trace.hpp"

// Diagnostics over recorded primal-dual runs; all uncounted.

namespace adaprox {

struct SaddleGaps {
  double p = 0.0;
  std::optional<double> q;  // needs a closed-form value of h*
};

/// P = (f+g)(x) - (f+g)(x*) + <x - x*, A^T y*>
/// Q = h*(y) - h*(y*) + <A x*, y* - y>
/// Both are nonnegative at any saddle point (x*, y*).
inline SaddleGaps saddle_gaps(const PdProblem& prob, const Vector& x, const Vector& y,
                              const Vector& x_star, const Vector& y_star) {
  SaddleGaps out;
  const auto fg = [&](const Vector& z) { return prob.f->value(z) + prob.g->value(z); };
  out.p = fg(x) - fg(x_star) + (x - x_star).dot(prob.a.adjoint(y_star));
  const auto hy = prob.h->conjugate_value(y);
  const auto hs = prob.h->conjugate_value(y_star);
  if (hy && hs) out.q = *hy - *hs + prob.a.apply(x_star).dot(y_star - y);
  return out;
}

/// U_k = 1/2 ||x^k - x*||^2 + (1 - 4 xi_k (1 + eps))/4 ||x^k - x^{k-1}||^2
///       + 1/(2 t^2) ||y^k - y*||^2 + gamma_k (1 + rho_k) P_{k-1}
/// with xi_k = t^2 eta_k^2 gamma_k^2, for k = 0..last of the history.
inline std::vector<double> lyapunov_pd(const PdProblem& prob, const IterateHistory& h,
                                       const Vector& x_star, const Vector& y_star,
                                       const PdConfig& cfg) {
  std::vector<double> out;
  const double t2 = cfg.t * cfg.t;
  for (std::ptrdiff_t k = 0; k <= h.last(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double gk = h.gamma_at(k);
    const double rho = gk / h.gamma_at(k - 1);
    const double xi = t2 * h.eta.at(kk) * h.eta.at(kk) * gk * gk;
    const double p_prev = saddle_gaps(prob, h.x_at(k - 1), h.y.at(kk), x_star, y_star).p;
    out.push_back(0.5 * (h.x_at(k) - x_star).squaredNorm() +
                  0.25 * (1.0 - 4.0 * xi * (1.0 + cfg.epsilon)) *
                      (h.x_at(k) - h.x_at(k - 1)).squaredNorm() +
                  0.5 / t2 * (h.y.at(kk) - y_star).squaredNorm() + gk * (1.0 + rho) * p_prev);
  }
  return out;
}

/// Lower bound on every adaptive primal-dual stepsize given a Lipschitz
/// modulus of grad f on the iterate hull and an upper bound on the norm
/// estimates:
///   min{ gamma0, nb^(1/4) / sqrt(2 (1+eps) t eta_max L), sqrt(nb) / (2 sqrt(1+eps) L),
///        1 / (2 nu t eta_max), sqrt(nb) / (2 (1+eps) t eta_max) }
/// with nb = (nu^2 - (1+eps)^2) / nu^2. Terms with a zero denominator drop out.
inline double pd_stepsize_floor(const PdConfig& cfg, double gamma0, double eta_max,
                                double lipschitz) {
  const double ope = 1.0 + cfg.epsilon;
  const double nb = (cfg.nu * cfg.nu - ope * ope) / (cfg.nu * cfg.nu);
  double out = gamma0;
  const auto take = [&out](double den, double num) {
    if (den > 0.0) out = std::min(out, num / den);
  };
  take(std::sqrt(2.0 * ope * cfg.t * eta_max * lipschitz), std::pow(nb, 0.25));
  take(2.0 * std::sqrt(ope) * lipschitz, std::sqrt(nb));
  take(2.0 * cfg.nu * cfg.t * eta_max, 1.0);
  take(2.0 * ope * cfg.t * eta_max, std::sqrt(nb));
  return out;
}

}  // namespace adaprox
