#pragma once

#include <cmath>
#include <memory>
#include <type_traits>
#include <utility>
#include <variant>

#include "adaprox/numkit/types.hpp"

namespace adaprox {

/// A linear operator R^n -> R^m with forward and adjoint application.
///
/// Concrete storage is one of: dense matrix, compressed-row sparse matrix,
/// a single row a^T (R^n -> R), the zero map, the identity, or the scaled
/// Gram operator s * B^T B built on top of another map. Every variant
/// carries an extra scalar factor so that alpha * A is cheap to form.
///
/// Instances are immutable and share their storage, so copies are cheap and
/// safe to use from concurrent runs.
class LinearMap {
 public:
  static LinearMap dense(DenseMatrix m) {
    const Index rows = m.rows(), cols = m.cols();
    return LinearMap(Dense{std::make_shared<const DenseMatrix>(std::move(m))},
                     rows, cols);
  }

  static LinearMap sparse(SparseMatrix m) {
    m.makeCompressed();
    const Index rows = m.rows(), cols = m.cols();
    return LinearMap(Sparse{std::make_shared<const SparseMatrix>(std::move(m))},
                     rows, cols);
  }

  /// The map x -> <a, x>, i.e. the 1 x n matrix a^T.
  static LinearMap row(Vector a) {
    const Index n = a.size();
    return LinearMap(Row{std::make_shared<const Vector>(std::move(a))}, 1, n);
  }

  static LinearMap zero(Index rows, Index cols) {
    return LinearMap(Zero{}, rows, cols);
  }

  static LinearMap identity(Index n) { return LinearMap(Identity{}, n, n); }

  /// s * B^T B; each application costs two applications of B.
  static LinearMap gram(const LinearMap& b, double s = 1.0) {
    return LinearMap(Gram{std::make_shared<const LinearMap>(b)}, b.cols(),
                     b.cols(), s);
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double scale() const { return scale_; }

  LinearMap scaled(double alpha) const {
    LinearMap out = *this;
    out.scale_ *= alpha;
    return out;
  }

  bool is_zero() const {
    return std::holds_alternative<Zero>(kind_) || scale_ == 0.0;
  }
  bool is_row() const { return std::holds_alternative<Row>(kind_); }
  bool is_identity() const { return std::holds_alternative<Identity>(kind_); }

  /// Counted as cost_per_apply() linear-operator applications.
  Vector apply(const Vector& x, EvalCounters* counters = nullptr) const {
    require_dim(x.size(), cols_, "LinearMap::apply");
    if (counters) counters->linop_applies += cost_per_apply();
    return forward(x);
  }

  Vector adjoint(const Vector& y, EvalCounters* counters = nullptr) const {
    require_dim(y.size(), rows_, "LinearMap::adjoint");
    if (counters) {
      counters->linop_applies += cost_per_apply();
      counters->adjoint_applies += cost_per_apply();
    }
    return backward(y);
  }

  /// Number of counted applications of the underlying data per call;
  /// a Gram map touches its factor twice.
  int cost_per_apply() const {
    return std::holds_alternative<Gram>(kind_) ? 2 : 1;
  }

  /// Dense copy, for oracles in tests and small diagnostics.
  DenseMatrix to_dense() const {
    DenseMatrix out(rows_, cols_);
    Vector e = Vector::Zero(cols_);
    for (Index j = 0; j < cols_; ++j) {
      e[j] = 1.0;
      out.col(j) = forward(e);
      e[j] = 0.0;
    }
    return out;
  }

  /// Frobenius norm, an under-estimate of the operator norm.
  double frobenius_norm() const {
    return std::visit(
        [this](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Dense>) {
            return std::abs(scale_) * k.m->norm();
          } else if constexpr (std::is_same_v<K, Sparse>) {
            return std::abs(scale_) * k.m->norm();
          } else if constexpr (std::is_same_v<K, Row>) {
            return std::abs(scale_) * k.a->norm();
          } else if constexpr (std::is_same_v<K, Zero>) {
            return 0.0;
          } else if constexpr (std::is_same_v<K, Identity>) {
            return std::abs(scale_) * std::sqrt(static_cast<double>(cols_));
          } else {
            return to_dense().norm();
          }
        },
        kind_);
  }

 private:
  struct Dense {
    std::shared_ptr<const DenseMatrix> m;
  };
  struct Sparse {
    std::shared_ptr<const SparseMatrix> m;
  };
  struct Row {
    std::shared_ptr<const Vector> a;
  };
  struct Zero {};
  struct Identity {};
  struct Gram {
    std::shared_ptr<const LinearMap> b;
  };
  using Kind = std::variant<Dense, Sparse, Row, Zero, Identity, Gram>;

  LinearMap(Kind kind, Index rows, Index cols, double scale = 1.0)
      : kind_(std::move(kind)), rows_(rows), cols_(cols), scale_(scale) {}

  Vector forward(const Vector& x) const {
    return std::visit(
        [&](const auto& k) -> Vector {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Dense>) {
            return scale_ * ((*k.m) * x);
          } else if constexpr (std::is_same_v<K, Sparse>) {
            return scale_ * ((*k.m) * x);
          } else if constexpr (std::is_same_v<K, Row>) {
            Vector out(1);
            out[0] = scale_ * k.a->dot(x);
            return out;
          } else if constexpr (std::is_same_v<K, Zero>) {
            return Vector::Zero(rows_);
          } else if constexpr (std::is_same_v<K, Identity>) {
            return scale_ * x;
          } else {
            return scale_ * k.b->backward(k.b->forward(x));
          }
        },
        kind_);
  }

  Vector backward(const Vector& y) const {
    return std::visit(
        [&](const auto& k) -> Vector {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Dense>) {
            return scale_ * (k.m->transpose() * y);
          } else if constexpr (std::is_same_v<K, Sparse>) {
            return scale_ * (k.m->transpose() * y);
          } else if constexpr (std::is_same_v<K, Row>) {
            return (scale_ * y[0]) * (*k.a);
          } else if constexpr (std::is_same_v<K, Zero>) {
            return Vector::Zero(cols_);
          } else if constexpr (std::is_same_v<K, Identity>) {
            return scale_ * y;
          } else {
            // s B^T B is self-adjoint
            return scale_ * k.b->backward(k.b->forward(y));
          }
        },
        kind_);
  }

  Kind kind_;
  Index rows_ = 0;
  Index cols_ = 0;
  double scale_ = 1.0;
};

}  // namespace adaprox
