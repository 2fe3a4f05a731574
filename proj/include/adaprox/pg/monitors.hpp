#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "adaprox/curvature.hpp"
#include "adaprox/pg/solvers.hpp"

// Diagnostics over a recorded adaPGM run (RunOptions::record_iterates).
// Everything here is uncounted and recomputes what it needs.

namespace adaprox {

/// v^k = (x^{k-1} - x^k)/gamma_k - (grad f(x^{k-1}) - grad f(x^k)), k >= 0.
inline Vector pg_residual(const PgProblem& prob, const IterateHistory& h, std::ptrdiff_t k) {
  const Vector& xp = h.x_at(k - 1);
  const Vector& x = h.x_at(k);
  return (xp - x) / h.gamma_at(k) - (prob.f->gradient(xp) - prob.f->gradient(x));
}

/// U_k = 1/2 ||x^k - x*||^2 + 1/4 ||x^k - x^{k-1}||^2 + gamma_k (1 + rho_k) P_{k-1}
/// for k = 0..last, with P_j = phi(x^j) - phi*.
inline std::vector<double> lyapunov_pg(const PgProblem& prob, const IterateHistory& h,
                                       const Vector& x_star, double phi_star) {
  std::vector<double> out;
  for (std::ptrdiff_t k = 0; k <= h.last(); ++k) {
    const double rho = h.gamma_at(k) / h.gamma_at(k - 1);
    const double p_prev = prob.cost(h.x_at(k - 1)) - phi_star;
    out.push_back(0.5 * (h.x_at(k) - x_star).squaredNorm() +
                  0.25 * (h.x_at(k) - h.x_at(k - 1)).squaredNorm() +
                  h.gamma_at(k) * (1.0 + rho) * p_prev);
  }
  return out;
}

struct RateCheck {
  std::ptrdiff_t k_max = 0;
  double best_gap = 0.0;  // min_{k <= k_max} P_k
  double bound = 0.0;     // U_1 / sum_{k=1}^{k_max + 1} gamma_k
};

/// Best-so-far cost bound for every K such that gamma_{K+1} is recorded.
inline std::vector<RateCheck> best_so_far_rate(const PgProblem& prob, const IterateHistory& h,
                                               const Vector& x_star, double phi_star) {
  std::vector<RateCheck> out;
  if (h.last() < 2) return out;
  const double u1 = lyapunov_pg(prob, h, x_star, phi_star).at(1);
  double best = std::numeric_limits<double>::infinity();
  double gamma_sum = 0.0;
  for (std::ptrdiff_t k = 0; k + 1 <= h.last(); ++k) {
    best = std::min(best, prob.cost(h.x_at(k)) - phi_star);
    gamma_sum += h.gamma_at(k + 1);
    out.push_back({k, best, u1 / gamma_sum});
  }
  return out;
}

/// RHS - LHS of the one-step descent inequality for k = 1..last-1:
///   1/2||x^{k+1}-x*||^2 + g_{k+1}(1+r_{k+1})P_k + 1/4||x^k-x^{k+1}||^2
///     <= 1/2||x^k-x*||^2 + r_{k+1} g_{k+1} P_{k-1} + r_{k+1}^2 delta_k ||x^{k-1}-x^k||^2
/// with r = rho. Entry i of the result belongs to k = i + 1. A negative
/// slack beyond roundoff indicates a violation.
inline std::vector<double> descent_lemma_slack(const PgProblem& prob, const IterateHistory& h,
                                               const Vector& x_star, double phi_star) {
  std::vector<double> out;
  for (std::ptrdiff_t k = 1; k + 1 <= h.last(); ++k) {
    const Vector& xm = h.x_at(k - 1);
    const Vector& x = h.x_at(k);
    const Vector& xn = h.x_at(k + 1);
    const double gk = h.gamma_at(k);
    const double gn = h.gamma_at(k + 1);
    const double rho = gn / gk;
    const CurvaturePair pair =
        local_estimates(xm, x, prob.f->gradient(xm), prob.f->gradient(x));
    const double p_k = prob.cost(x) - phi_star;
    const double p_km = prob.cost(xm) - phi_star;
    const double lhs = 0.5 * (xn - x_star).squaredNorm() + gn * (1.0 + rho) * p_k +
                       0.25 * (x - xn).squaredNorm();
    const double rhs = 0.5 * (x - x_star).squaredNorm() + rho * gn * p_km +
                       rho * rho * delta(gk, pair) * (xm - x).squaredNorm();
    out.push_back(rhs - lhs);
  }
  return out;
}

}  // namespace adaprox
