#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "adaprox/numkit/linear_map.hpp"
#include "adaprox/oracles/prox.hpp"
#include "adaprox/oracles/smooth.hpp"

namespace adaprox {

/// minimize f(x) + g(x) + h(A x).
struct PdProblem {
  SmoothPtr f;
  ProxPtr g;
  ProxPtr h;
  LinearMap a;

  PdProblem(SmoothPtr f_, ProxPtr g_, ProxPtr h_, LinearMap a_)
      : f(std::move(f_)), g(std::move(g_)), h(std::move(h_)), a(std::move(a_)) {
    if (!f || !g || !h) throw std::invalid_argument("PdProblem: null oracle");
    require_dim(a.cols(), f->dim(), "PdProblem: A columns");
    if (g->dim() != 0) require_dim(g->dim(), f->dim(), "PdProblem: g");
    if (h->dim() != 0) require_dim(h->dim(), a.rows(), "PdProblem: h");
  }

  Index dim() const { return f->dim(); }
  Index dual_dim() const { return a.rows(); }

  /// f(x) + g(x) + h(A x), uncounted; may be +inf for indicator terms.
  double cost(const Vector& x) const {
    return f->value(x) + g->value(x) + h->value(a.apply(x));
  }
};

/// How adaPDM+ picks the first trial eta_{k+1} of each linesearch.
enum class EtaGuess {
  /// eta_{k+1} = shrink * eta_k.
  kShrink,
  /// max{shrink * eta_k, min{eta_k, (1 + 1e-12) * last accepted ratio}}:
  /// never above eta_k, and it stops shrinking once the observed ratio
  /// ||A^T dy|| / ||dy|| is matched, which settles eta on single-row maps.
  kObservedRatio,
};

struct PdConfig {
  double t = 1.0;          // primal/dual ratio, sigma = t^2 gamma
  double epsilon = 1e-6;
  double nu = 1.2;         // must exceed 1 + epsilon
  double r = 2.0;          // linesearch growth factor, > 1
  double shrink = 0.95;    // first linesearch trial, in [0.9, 1)
  EtaGuess eta_guess = EtaGuess::kShrink;
  std::size_t max_inner = 200;

  /// adaPDM: ||A|| to use instead of running the power method.
  std::optional<double> norm_estimate;
  /// adaPDM+: initial estimate of ||A||; defaults to the Frobenius norm.
  std::optional<double> eta0;
  /// Default: 1/(2 nu t eta) with eta the operator norm (estimate).
  std::optional<double> gamma0;
  /// Default: gamma0.
  std::optional<double> gamma_minus1;

  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("PdConfig: " + m); };
    if (!(t > 0.0) || !std::isfinite(t)) fail("t must be > 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be >= 0");
    if (!(nu > 1.0 + epsilon) || !std::isfinite(nu)) fail("nu must exceed 1 + epsilon");
    if (!(r > 1.0) || !std::isfinite(r)) fail("r must be > 1");
    if (!(shrink >= 0.9 && shrink < 1.0)) fail("shrink must lie in [0.9, 1)");
    if (max_inner == 0) fail("max_inner must be positive");
    if (norm_estimate && !(*norm_estimate >= 0.0)) fail("norm_estimate must be >= 0");
    if (eta0 && !(*eta0 > 0.0)) fail("eta0 must be > 0");
    if (gamma0 && !(*gamma0 > 0.0)) fail("gamma0 must be > 0");
    if (gamma_minus1 && !(*gamma_minus1 > 0.0)) fail("gamma_minus1 must be > 0");
    if (gamma0 && gamma_minus1 && *gamma_minus1 > *gamma0) {
      fail("gamma_minus1 must not exceed gamma0");
    }
  }
};

}  // namespace adaprox
