#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "adaprox/numkit/linear_map.hpp"

namespace adaprox {

/// Convex, (locally) smooth term f with value and gradient.
///
/// Calls bump `f_evals` / `grad_evals` plus whatever linear-operator
/// applications the evaluation needs when a counter block is supplied.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual Index dim() const = 0;

  double value(const Vector& x, EvalCounters* counters = nullptr) const {
    require_dim(x.size(), dim(), "SmoothOracle::value");
    if (counters) ++counters->f_evals;
    return do_value(x, counters);
  }

  Vector gradient(const Vector& x, EvalCounters* counters = nullptr) const {
    require_dim(x.size(), dim(), "SmoothOracle::gradient");
    if (counters) ++counters->grad_evals;
    return do_gradient(x, counters);
  }

 private:
  virtual double do_value(const Vector& x, EvalCounters* c) const = 0;
  virtual Vector do_gradient(const Vector& x, EvalCounters* c) const = 0;
};

using SmoothPtr = std::shared_ptr<const SmoothOracle>;

class ZeroFunction final : public SmoothOracle {
 public:
  explicit ZeroFunction(Index n) : n_(n) {}
  Index dim() const override { return n_; }

 private:
  double do_value(const Vector&, EvalCounters*) const override { return 0.0; }
  Vector do_gradient(const Vector&, EvalCounters*) const override {
    return Vector::Zero(n_);
  }
  Index n_;
};

/// 1/2 ||D x - b||^2.
class LeastSquares final : public SmoothOracle {
 public:
  LeastSquares(LinearMap d, Vector b) : d_(std::move(d)), b_(std::move(b)) {
    require_dim(b_.size(), d_.rows(), "LeastSquares: b");
  }
  Index dim() const override { return d_.cols(); }
  const LinearMap& matrix() const { return d_; }
  const Vector& rhs() const { return b_; }

 private:
  double do_value(const Vector& x, EvalCounters* c) const override {
    return 0.5 * (d_.apply(x, c) - b_).squaredNorm();
  }
  Vector do_gradient(const Vector& x, EvalCounters* c) const override {
    return d_.adjoint(d_.apply(x, c) - b_, c);
  }
  LinearMap d_;
  Vector b_;
};

namespace detail {

// log(1 + e^z) without overflow
inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace detail

/// Mean logistic loss -(1/m) sum [y_i log s_i + (1 - y_i) log(1 - s_i)] with
/// s_i = sigmoid(<d_i, x>) and labels y_i in {0, 1}.
class LogisticLoss final : public SmoothOracle {
 public:
  LogisticLoss(LinearMap d, Vector y) : d_(std::move(d)), y_(std::move(y)) {
    require_dim(y_.size(), d_.rows(), "LogisticLoss: labels");
    for (Index i = 0; i < y_.size(); ++i) {
      if (y_[i] != 0.0 && y_[i] != 1.0) {
        throw std::invalid_argument("LogisticLoss: labels must be 0 or 1");
      }
    }
  }
  Index dim() const override { return d_.cols(); }
  const LinearMap& matrix() const { return d_; }
  const Vector& labels() const { return y_; }

 private:
  double do_value(const Vector& x, EvalCounters* c) const override {
    const Vector z = d_.apply(x, c);
    double acc = 0.0;
    // -[y log s + (1-y) log(1-s)] = softplus(z) - y z
    for (Index i = 0; i < z.size(); ++i) acc += detail::softplus(z[i]) - y_[i] * z[i];
    return acc / static_cast<double>(z.size());
  }
  Vector do_gradient(const Vector& x, EvalCounters* c) const override {
    Vector r = d_.apply(x, c);
    for (Index i = 0; i < r.size(); ++i) r[i] = detail::sigmoid(r[i]) - y_[i];
    return d_.adjoint(r, c) / static_cast<double>(r.size());
  }
  LinearMap d_;
  Vector y_;
};

/// 1/2 <x, Q x> + <x, q> + (M/6) ||x||^3. The gradient is locally but not
/// globally Lipschitz.
class QuadraticPlusCubic final : public SmoothOracle {
 public:
  QuadraticPlusCubic(LinearMap q_map, Vector q, double m)
      : q_map_(std::move(q_map)), q_(std::move(q)), m_(m) {
    require_dim(q_map_.rows(), q_map_.cols(), "QuadraticPlusCubic: Q square");
    require_dim(q_.size(), q_map_.cols(), "QuadraticPlusCubic: q");
    if (!(m_ >= 0.0)) throw std::invalid_argument("QuadraticPlusCubic: M must be >= 0");
  }
  Index dim() const override { return q_.size(); }
  const LinearMap& hessian() const { return q_map_; }
  const Vector& linear() const { return q_; }
  double cubic_weight() const { return m_; }

 private:
  double do_value(const Vector& x, EvalCounters* c) const override {
    const double nx = x.norm();
    return 0.5 * x.dot(q_map_.apply(x, c)) + x.dot(q_) + m_ / 6.0 * nx * nx * nx;
  }
  Vector do_gradient(const Vector& x, EvalCounters* c) const override {
    return q_map_.apply(x, c) + q_ + (0.5 * m_ * x.norm()) * x;
  }
  LinearMap q_map_;
  Vector q_;
  double m_;
};

/// Dual SVM objective 1/2 ||sum_i alpha_i a_i d_i||^2 - sum_i alpha_i, with
/// d_i the rows of D and labels a_i.
class DualSvmQuadratic final : public SmoothOracle {
 public:
  DualSvmQuadratic(LinearMap d, Vector a) : d_(std::move(d)), a_(std::move(a)) {
    require_dim(a_.size(), d_.rows(), "DualSvmQuadratic: labels");
  }
  Index dim() const override { return a_.size(); }

 private:
  // W alpha = D^T (a .* alpha)
  double do_value(const Vector& alpha, EvalCounters* c) const override {
    const Vector w = d_.adjoint(a_.cwiseProduct(alpha), c);
    return 0.5 * w.squaredNorm() - alpha.sum();
  }
  Vector do_gradient(const Vector& alpha, EvalCounters* c) const override {
    const Vector w = d_.adjoint(a_.cwiseProduct(alpha), c);
    return a_.cwiseProduct(d_.apply(w, c)) - Vector::Ones(a_.size());
  }
  LinearMap d_;
  Vector a_;
};

}  // namespace adaprox
