#pragma once

#include <cmath>

#include "adaprox/numkit/types.hpp"

namespace adaprox {

/// Local geometry of grad f between two iterates:
///   ell   = <dg, dx> / ||dx||^2      (inverse cocoercivity estimate)
///   cee   = ||dg||^2 / <dg, dx>      (Lipschitz-type estimate)
///   big_l = ||dg|| / ||dx||
/// with dx = x_prev - x, dg = grad_prev - grad and 0/0 = 0.
/// For convex f: ell <= big_l <= cee and ell * cee == big_l^2.
struct CurvaturePair {
  double ell = 0.0;
  double cee = 0.0;
  double big_l = 0.0;
};

class FixedPointReached : public std::runtime_error {
 public:
  FixedPointReached() : std::runtime_error("fixed point reached: x_prev == x") {}
};

inline CurvaturePair local_estimates(const Vector& x_prev, const Vector& x,
                                     const Vector& g_prev, const Vector& g) {
  require_dim(x.size(), x_prev.size(), "local_estimates: x");
  require_dim(g_prev.size(), x_prev.size(), "local_estimates: g_prev");
  require_dim(g.size(), x_prev.size(), "local_estimates: g");
  Vector dx = x_prev - x;
  if (dx.isZero(0.0)) throw FixedPointReached();
  Vector dg = g_prev - g;
  if (dg.norm() <= 1e-300) return {};
  // all three estimates are invariant under a common rescaling of dx, dg;
  // use it when ||dx||^2 would underflow
  if (dx.squaredNorm() < 1e-200) {
    const double s = dx.lpNorm<Eigen::Infinity>();
    dx /= s;
    dg /= s;
  }
  const double dx2 = dx.squaredNorm();
  const double ng = dg.norm();
  const double ndx = std::sqrt(dx2);
  const double inner = dg.dot(dx);
  const double big_l = ng / ndx;
  // roundoff can push the inner product of a convex gradient to <= 0
  if (inner <= 0.0) return {0.0, big_l, big_l};
  return {inner / dx2, ng * ng / inner, big_l};
}

/// gamma * ell * (gamma * cee - 1); may be negative.
inline double delta(double gamma, const CurvaturePair& p) {
  return gamma * p.ell * (gamma * p.cee - 1.0);
}

/// Squared contraction factor of id - gamma grad f between the two points:
/// 1 - gamma ell (2 - gamma cee).
inline double forward_contraction(double gamma, const CurvaturePair& p) {
  return 1.0 - gamma * p.ell * (2.0 - gamma * p.cee);
}

}  // namespace adaprox
