#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

#include "adaprox/numkit/types.hpp"

namespace adaprox {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Proper lsc convex term with an inexpensive proximal map
///   prox(tau, x) = argmin_w g(w) + ||w - x||^2 / (2 tau).
///
/// Indicator functions report 0 or +inf from value(). prox_conjugate()
/// defaults to the Moreau decomposition; closed forms override it.
class ProxOracle {
 public:
  virtual ~ProxOracle() = default;

  /// Dimension of the domain; 0 means "any".
  virtual Index dim() const { return 0; }

  virtual double value(const Vector& x) const = 0;
  virtual Vector prox(double tau, const Vector& x) const = 0;

  /// Value of the convex conjugate, when it has a usable closed form.
  virtual std::optional<double> conjugate_value(const Vector&) const {
    return std::nullopt;
  }

  /// prox of sigma h* at u.
  virtual Vector prox_conjugate(double sigma, const Vector& u) const {
    return prox_conjugate_moreau(sigma, u);
  }

  /// u - sigma prox_{h/sigma}(u / sigma), valid for every proper lsc convex h.
  Vector prox_conjugate_moreau(double sigma, const Vector& u) const {
    return u - sigma * prox(1.0 / sigma, u / sigma);
  }
};

using ProxPtr = std::shared_ptr<const ProxOracle>;

/// g == 0. Its conjugate is the indicator of {0}.
class ZeroProx final : public ProxOracle {
 public:
  double value(const Vector&) const override { return 0.0; }
  Vector prox(double, const Vector& x) const override { return x; }
  std::optional<double> conjugate_value(const Vector& y) const override {
    return y.isZero(0.0) ? 0.0 : kInf;
  }
  Vector prox_conjugate(double, const Vector& u) const override {
    return Vector::Zero(u.size());
  }
};

inline Vector soft_threshold(const Vector& u, double thresh) {
  return u.unaryExpr([thresh](double v) {
    return v > thresh ? v - thresh : (v < -thresh ? v + thresh : 0.0);
  });
}

/// lambda ||x||_1.
class L1Norm final : public ProxOracle {
 public:
  explicit L1Norm(double lambda) : lambda_(lambda) {
    if (!(lambda_ > 0.0)) throw std::invalid_argument("L1Norm: lambda must be > 0");
  }
  double weight() const { return lambda_; }

  double value(const Vector& x) const override { return lambda_ * x.lpNorm<1>(); }
  Vector prox(double tau, const Vector& x) const override {
    return soft_threshold(x, tau * lambda_);
  }
  // conjugate: indicator of the inf-norm ball of radius lambda
  std::optional<double> conjugate_value(const Vector& y) const override {
    return y.size() == 0 || y.lpNorm<Eigen::Infinity>() <= lambda_ ? 0.0 : kInf;
  }
  Vector prox_conjugate(double, const Vector& u) const override {
    return u.cwiseMax(-lambda_).cwiseMin(lambda_);
  }

 private:
  double lambda_;
};

/// Indicator of the box [lower, upper]; the prox is a clamp for every tau.
class BoxIndicator final : public ProxOracle {
 public:
  BoxIndicator(Vector lower, Vector upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_dim(upper_.size(), lower_.size(), "BoxIndicator");
    if ((lower_.array() > upper_.array()).any()) {
      throw std::invalid_argument("BoxIndicator: lower > upper");
    }
  }
  BoxIndicator(Index n, double lo, double hi)
      : BoxIndicator(Vector::Constant(n, lo), Vector::Constant(n, hi)) {}

  Index dim() const override { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  double value(const Vector& x) const override {
    require_dim(x.size(), lower_.size(), "BoxIndicator::value");
    return ((x.array() >= lower_.array()) && (x.array() <= upper_.array())).all() ? 0.0
                                                                                 : kInf;
  }
  Vector prox(double, const Vector& x) const override {
    require_dim(x.size(), lower_.size(), "BoxIndicator::prox");
    return x.cwiseMax(lower_).cwiseMin(upper_);
  }
  // support function of the box
  std::optional<double> conjugate_value(const Vector& y) const override {
    double acc = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      acc += y[i] >= 0.0 ? y[i] * upper_[i] : y[i] * lower_[i];
    }
    return acc;
  }

 private:
  Vector lower_, upper_;
};

/// Indicator of the single point {p}. Its conjugate is linear, <p, y>.
class SingletonIndicator final : public ProxOracle {
 public:
  explicit SingletonIndicator(Vector point) : point_(std::move(point)) {}
  Index dim() const override { return point_.size(); }
  const Vector& point() const { return point_; }

  double value(const Vector& x) const override { return x == point_ ? 0.0 : kInf; }
  Vector prox(double, const Vector&) const override { return point_; }
  std::optional<double> conjugate_value(const Vector& y) const override {
    return point_.dot(y);
  }
  Vector prox_conjugate(double sigma, const Vector& u) const override {
    if (point_.isZero(0.0)) return u;
    return u - sigma * point_;
  }

 private:
  Vector point_;
};

/// ||z - b||_p for p in {1, 2}. Conjugate: <b, y> + indicator of the unit
/// ball of the dual norm (inf-norm for p = 1, 2-norm for p = 2).
class PNormDistance final : public ProxOracle {
 public:
  PNormDistance(Vector center, int p) : b_(std::move(center)), p_(p) {
    if (p_ != 1 && p_ != 2) throw std::invalid_argument("PNormDistance: p must be 1 or 2");
  }
  Index dim() const override { return b_.size(); }
  int p() const { return p_; }
  const Vector& center() const { return b_; }

  double value(const Vector& z) const override {
    require_dim(z.size(), b_.size(), "PNormDistance::value");
    return p_ == 1 ? (z - b_).lpNorm<1>() : (z - b_).norm();
  }

  Vector prox(double tau, const Vector& z) const override {
    require_dim(z.size(), b_.size(), "PNormDistance::prox");
    const Vector v = z - b_;
    if (p_ == 1) return b_ + soft_threshold(v, tau);
    const double nv = v.norm();
    // the center is returned at the tie point v = 0
    if (nv <= tau) return b_;
    return b_ + (1.0 - tau / nv) * v;
  }

  std::optional<double> conjugate_value(const Vector& y) const override {
    const double dual = p_ == 1 ? y.lpNorm<Eigen::Infinity>() : y.norm();
    return dual <= 1.0 ? b_.dot(y) : kInf;
  }

  /// Projection of u - sigma b onto the dual-norm unit ball.
  Vector prox_conjugate(double sigma, const Vector& u) const override {
    require_dim(u.size(), b_.size(), "PNormDistance::prox_conjugate");
    const Vector w = u - sigma * b_;
    if (p_ == 1) return w.cwiseMax(-1.0).cwiseMin(1.0);
    const double nw = w.norm();
    return nw <= 1.0 ? w : Vector(w / nw);
  }

 private:
  Vector b_;
  int p_;
};

/// 1/2 ||z - b||^2, a smooth h used to exercise the dual update.
class SquaredDistance final : public ProxOracle {
 public:
  explicit SquaredDistance(Vector center) : b_(std::move(center)) {}
  Index dim() const override { return b_.size(); }

  double value(const Vector& z) const override { return 0.5 * (z - b_).squaredNorm(); }
  Vector prox(double tau, const Vector& z) const override {
    return (z + tau * b_) / (1.0 + tau);
  }
  std::optional<double> conjugate_value(const Vector& y) const override {
    return 0.5 * y.squaredNorm() + b_.dot(y);
  }
  Vector prox_conjugate(double sigma, const Vector& u) const override {
    return (u - sigma * b_) / (1.0 + sigma);
  }

 private:
  Vector b_;
};

/// h* wrapped as a ProxOracle in its own right: value via conjugate_value,
/// prox via the Moreau route of h.
class ConjugateOf final : public ProxOracle {
 public:
  explicit ConjugateOf(ProxPtr h) : h_(std::move(h)) {}
  Index dim() const override { return h_->dim(); }

  double value(const Vector& y) const override {
    const auto v = h_->conjugate_value(y);
    if (!v) throw std::logic_error("ConjugateOf: conjugate value has no closed form");
    return *v;
  }
  Vector prox(double sigma, const Vector& u) const override {
    return h_->prox_conjugate(sigma, u);
  }
  // h** = h
  std::optional<double> conjugate_value(const Vector& x) const override {
    return h_->value(x);
  }
  Vector prox_conjugate(double tau, const Vector& u) const override {
    return h_->prox(tau, u);
  }

 private:
  ProxPtr h_;
};

}  // namespace adaprox
