#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adaprox {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Raised when operand shapes disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a solver detects a broken mathematical invariant
/// (e.g. a negative radicand in a stepsize rule).
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evaluation counters for one solver run. Oracles and linear maps take an
/// optional pointer to one of these and bump it per call; nullptr means the
/// call is not accounted (monitoring, tests).
struct EvalCounters {
  std::uint64_t grad_evals = 0;
  std::uint64_t linop_applies = 0;  // forward and adjoint applications
  std::uint64_t adjoint_applies = 0;  // the adjoint share of linop_applies
  std::uint64_t prox_calls = 0;
  std::uint64_t f_evals = 0;

  bool operator==(const EvalCounters&) const = default;
};

inline void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace adaprox
