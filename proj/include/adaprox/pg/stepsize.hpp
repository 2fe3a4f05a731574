#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "adaprox/curvature.hpp"
#include "adaprox/oracles/prox.hpp"

namespace adaprox {

/// gamma * min{ sqrt(1 + gamma/gamma_prev), 1 / (2 sqrt([delta]_+)) }.
/// The second term is +inf when delta <= 0.
inline double adapgm_stepsize(double gamma_prev, double gamma, const CurvaturePair& pair) {
  const double grow = std::sqrt(1.0 + gamma / gamma_prev);
  const double d = delta(gamma, pair);
  if (d <= 0.0) return gamma * grow;
  return gamma * std::min(grow, 1.0 / (2.0 * std::sqrt(d)));
}

/// min{ gamma sqrt(1 + gamma/gamma_prev), 1 / (2 L) } with 1/0 = inf.
inline double mm_stepsize(double gamma_prev, double gamma, const CurvaturePair& pair) {
  const double grow = gamma * std::sqrt(1.0 + gamma / gamma_prev);
  if (pair.big_l <= 0.0) return grow;
  return std::min(grow, 1.0 / (2.0 * pair.big_l));
}

/// pi-weighted variant; pi = 1 recovers adapgm_stepsize.
inline double pi_stepsize(double gamma_prev, double gamma, const CurvaturePair& pair,
                          double pi) {
  const double grow = std::sqrt(1.0 / pi + gamma / gamma_prev);
  // grouped so that pi = 1 reproduces delta() bit for bit
  const double bracket = gamma * pair.ell * (gamma * pair.cee - (2.0 - pi)) + (1.0 - pi);
  if (bracket <= 0.0) return gamma * grow;
  return gamma * std::min(grow, 1.0 / (2.0 * std::sqrt(bracket)));
}

/// gamma * min{ sqrt(2/3 + gamma/gamma_prev), 1 / sqrt([2 gamma^2 L^2 - 1]_+) }.
inline double mm23_stepsize(double gamma_prev, double gamma, const CurvaturePair& pair) {
  const double grow = std::sqrt(2.0 / 3.0 + gamma / gamma_prev);
  const double gl = gamma * pair.big_l;
  const double bracket = 2.0 * gl * gl - 1.0;
  if (bracket <= 0.0) return gamma * grow;
  return gamma * std::min(grow, 1.0 / std::sqrt(bracket));
}

/// Which adaptive update the proximal-gradient loop uses.
struct AdaptiveRule {
  enum class Kind { kAdaPgm, kMalitskyMishchenko, kPi, kMM23 };

  Kind kind = Kind::kAdaPgm;
  double pi = 1.0;
  /// Optional upper cap on every stepsize.
  std::optional<double> gamma_max;

  static AdaptiveRule adapgm() { return {}; }
  static AdaptiveRule malitsky_mishchenko() { AdaptiveRule r; r.kind = Kind::kMalitskyMishchenko; return r; }
  static AdaptiveRule pi_rule(double pi) { AdaptiveRule r; r.kind = Kind::kPi; r.pi = pi; return r; }
  static AdaptiveRule mm23() { AdaptiveRule r; r.kind = Kind::kMM23; return r; }

  void validate() const {
    if (kind == Kind::kPi && !(pi > 0.0)) throw std::invalid_argument("pi rule: pi must be > 0");
    if (gamma_max && !(*gamma_max > 0.0)) {
      throw std::invalid_argument("gamma_max must be > 0");
    }
  }

  double next(double gamma_prev, double gamma, const CurvaturePair& pair) const {
    double out = 0.0;
    switch (kind) {
      case Kind::kAdaPgm: out = adapgm_stepsize(gamma_prev, gamma, pair); break;
      case Kind::kMalitskyMishchenko: out = mm_stepsize(gamma_prev, gamma, pair); break;
      case Kind::kPi: out = pi_stepsize(gamma_prev, gamma, pair, pi); break;
      case Kind::kMM23: out = mm23_stepsize(gamma_prev, gamma, pair); break;
    }
    return gamma_max ? std::min(out, *gamma_max) : out;
  }
};

}  // namespace adaprox
