#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "adaprox/numkit/linear_map.hpp"

namespace adaprox {

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct PowerMethodOptions {
  double tol = 1e-10;
  int max_iters = 5000;
  std::uint64_t seed = 0;
};

/// Largest singular value of `a` by power iteration on A^T A.
///
/// Stops once the relative change of the Rayleigh quotient ||A v||^2
/// (unit v) drops to `tol`. On non-convergence the best estimate is
/// returned with `converged == false`. Uncounted: this is setup work.
inline NormEstimate map_norm(const LinearMap& a,
                             const PowerMethodOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("map_norm: tol must be > 0");
  if (a.is_zero()) return {0.0, true, 0};
  if (a.is_identity()) return {std::abs(a.scale()), true, 0};
  if (a.is_row()) return {a.frobenius_norm(), true, 0};

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();

  double rayleigh = 0.0;
  NormEstimate est;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const Vector av = a.apply(v);
    const double next = av.squaredNorm();
    Vector w = a.adjoint(av);
    const double wn = w.norm();
    est.iterations = it;
    est.value = std::sqrt(next);
    if (wn == 0.0) {
      // v landed in the null space; the start vector was unlucky
      est.converged = next == 0.0 && rayleigh == 0.0 && it > 1;
      if (it == 1) {
        v.setConstant(1.0 / std::sqrt(static_cast<double>(v.size())));
        continue;
      }
      return est;
    }
    if (it > 1 && std::abs(next - rayleigh) <= opts.tol * next) {
      est.converged = true;
      // one more Rayleigh quotient on the refined direction
      v = w / wn;
      est.value = std::sqrt(std::max(next, a.apply(v).squaredNorm()));
      return est;
    }
    rayleigh = next;
    v = w / wn;
  }
  return est;
}

}  // namespace adaprox
