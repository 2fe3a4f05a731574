#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "adaprox/bench/generators.hpp"
#include "adaprox/numkit/io.hpp"
#include "adaprox/numkit/linear_map.hpp"
#include "adaprox/oracles/prox.hpp"
#include "adaprox/oracles/smooth.hpp"
#include "adaprox/pd/problem.hpp"
#include "adaprox/pg/solvers.hpp"

namespace adaprox {

/// Labels mapped to {0, 1}; accepts {0, 1} or {-1, +1} input.
inline Vector labels01(const Vector& labels) {
  Vector out(labels.size());
  for (Index i = 0; i < labels.size(); ++i) {
    const double v = labels[i];
    if (v == 1.0) out[i] = 1.0;
    else if (v == 0.0 || v == -1.0) out[i] = 0.0;
    else throw std::invalid_argument("label " + std::to_string(v) + " is not in {-1, 0, 1}");
  }
  return out;
}

/// Labels mapped to {-1, +1}; accepts {0, 1} or {-1, +1} input.
inline Vector labels_pm1(const Vector& labels) {
  return 2.0 * labels01(labels) - Vector::Ones(labels.size());
}

/// 1/2 ||D x - b||^2 + ||x||_1.
inline PgProblem build_lasso(const LassoInstance& inst) {
  return PgProblem(std::make_shared<LeastSquares>(LinearMap::dense(inst.d), inst.b),
                   std::make_shared<L1Norm>(inst.lambda));
}

/// Mean logistic loss plus lambda ||x||_1. Labels may be {0,1} or {-1,+1};
/// `bias` appends a constant feature.
inline PgProblem build_logistic(const LabeledDataset& ds, double lambda, bool bias = false) {
  const LabeledDataset& use = bias ? with_bias_column(ds) : ds;
  auto f = std::make_shared<LogisticLoss>(LinearMap::sparse(use.features), labels01(use.labels));
  ProxPtr g;
  if (lambda > 0.0) g = std::make_shared<L1Norm>(lambda);
  else if (lambda == 0.0) g = std::make_shared<ZeroProx>();
  else throw std::invalid_argument("build_logistic: lambda must be >= 0");
  return PgProblem(std::move(f), std::move(g));
}

/// Second-order model of the mean logistic loss at zero: Q = D^T D / (4m)
/// as an implicit operator and q = D^T (1/2 - y) / m.
struct CubicModel {
  LinearMap q_map;
  Vector q;
};

inline CubicModel build_cubic(const LabeledDataset& ds) {
  const Vector y = labels01(ds.labels);
  const auto m = static_cast<double>(ds.samples());
  if (ds.samples() == 0) throw std::invalid_argument("build_cubic: empty dataset");
  const LinearMap d = LinearMap::sparse(ds.features);
  return {LinearMap::gram(d, 1.0 / (4.0 * m)),
          d.adjoint(Vector::Constant(y.size(), 0.5) - y) / m};
}

/// 1/2 <x, Q x> + <q, x> + (M/6) ||x||^3 with g = 0.
inline PgProblem build_cubic_problem(const LabeledDataset& ds, double cubic_weight) {
  CubicModel cm = build_cubic(ds);
  return PgProblem(
      std::make_shared<QuadraticPlusCubic>(std::move(cm.q_map), std::move(cm.q), cubic_weight),
      std::make_shared<ZeroProx>());
}

/// Dual SVM: f(alpha) = 1/2 ||sum alpha_i a_i d_i||^2 - sum alpha_i,
/// g = indicator of [0, C]^N, h = indicator of {0}, A = a^T (one row).
inline PdProblem build_dual_svm(const LabeledDataset& ds, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("build_dual_svm: C must be > 0");
  const Vector a = labels_pm1(ds.labels);
  const Index n = ds.samples();
  return PdProblem(std::make_shared<DualSvmQuadratic>(LinearMap::sparse(ds.features), a),
                   std::make_shared<BoxIndicator>(n, 0.0, c),
                   std::make_shared<SingletonIndicator>(Vector::Zero(1)), LinearMap::row(a));
}

/// ||D x - b||_p + lambda ||x||_1 split as f = 0, g = lambda ||.||_1,
/// h = ||. - b||_p, A = D.
inline PdProblem build_medreg(const LabeledDataset& ds, int p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("build_medreg: lambda must be > 0");
  return PdProblem(std::make_shared<ZeroFunction>(ds.dims()), std::make_shared<L1Norm>(lambda),
                   std::make_shared<PNormDistance>(ds.labels, p),
                   LinearMap::sparse(ds.features));
}

}  // namespace adaprox
