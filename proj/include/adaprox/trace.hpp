#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "adaprox/numkit/types.hpp"

namespace adaprox {

enum class Termination {
  kConverged,          // residual below tolerance
  kFixedPoint,         // two consecutive iterates coincide exactly
  kMaxIters,
  kNonFinite,          // NaN/Inf in an iterate, cost, or residual
  kStepsizeUnderflow,  // backtracking shrank the stepsize below 1e-300
  kLinesearchFailed,   // too many operator-norm backtracks
};

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kFixedPoint: return "fixed_point";
    case Termination::kMaxIters: return "max_iters";
    case Termination::kNonFinite: return "non_finite";
    case Termination::kStepsizeUnderflow: return "stepsize_underflow";
    case Termination::kLinesearchFailed: return "linesearch_failed";
  }
  return "unknown";
}

/// Residual test: ||v^k|| <= tol, or <= tol * (1 + ||v_ref||) when relative,
/// where v_ref is the first residual of the run.
struct StopCriteria {
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  bool relative = true;

  double threshold(double reference) const {
    return relative ? tol * (1.0 + reference) : tol;
  }
};

struct RunOptions {
  /// Evaluate the objective at every iterate (uncounted) for the trace.
  bool record_cost = true;
  /// Keep every iterate and stepsize; needed by the Lyapunov monitors.
  bool record_iterates = false;
};

/// One row per iterate x^k.
struct TraceRow {
  std::size_t iter = 0;
  EvalCounters counters;
  std::optional<double> cost;      // blank when infinite (indicator terms)
  std::optional<double> residual;  // primal-dual runs have none at k = 0
  double gamma = 0.0;
  std::optional<double> sigma;
  std::optional<double> eta;
  double time_s = 0.0;
};

/// Iterate history with a leading entry for the initial point:
/// x[0] = x^{-1}, x[k + 1] = x^k, and likewise gamma[0] = gamma_{-1}.
/// Primal-dual runs also fill y (y[k] = y^k) and eta (eta[k] = eta_k).
struct IterateHistory {
  std::vector<Vector> x;
  std::vector<double> gamma;
  std::vector<Vector> y;
  std::vector<double> eta;

  const Vector& x_at(std::ptrdiff_t k) const { return x.at(static_cast<std::size_t>(k + 1)); }
  double gamma_at(std::ptrdiff_t k) const { return gamma.at(static_cast<std::size_t>(k + 1)); }
  /// Index of the last stored iterate.
  std::ptrdiff_t last() const { return static_cast<std::ptrdiff_t>(x.size()) - 2; }
};

/// Cost value as stored in a trace row: +-inf becomes blank, NaN is kept so
/// the row shows the breakdown.
inline std::optional<double> trace_cost(double c) {
  if (std::isinf(c)) return std::nullopt;
  return c;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace adaprox
