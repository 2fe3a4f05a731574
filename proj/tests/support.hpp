#pragma once

// Hand-rolled random generators and independent oracles shared by the suites.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "adaprox/numkit/types.hpp"

namespace testkit {

using adaprox::DenseMatrix;
using adaprox::Index;
using adaprox::SparseMatrix;
using adaprox::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>()(eng_); }
  Index index(Index lo, Index hi) {  // inclusive
    return std::uniform_int_distribution<Index>(lo, hi)(eng_);
  }
  bool coin(double p = 0.5) { return uniform() < p; }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Vector uniform_vector(Index n, double lo, double hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  DenseMatrix normal_matrix(Index m, Index n) {
    DenseMatrix a(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) a(i, j) = normal();
    return a;
  }
  SparseMatrix sparse_matrix(Index m, Index n, double density) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j)
        if (coin(density)) trip.emplace_back(i, j, normal());
    SparseMatrix s(m, n);
    s.setFromTriplets(trip.begin(), trip.end());
    s.makeCompressed();
    return s;
  }
  /// B^T B with B m x n, so rank <= m.
  DenseMatrix psd_matrix(Index n, Index m) {
    const DenseMatrix b = normal_matrix(m, n);
    return b.transpose() * b;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

/// Central differences with step h per coordinate.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h) {
  Vector g(x.size());
  Vector xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

/// Largest singular value from a dense Jacobi SVD.
inline double svd_norm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  return svd.singularValues()(0);
}

/// Minimizer of w -> g(w) + (w - u)^2 / (2 tau) over a uniform grid.
inline double grid_prox_1d(const std::function<double(double)>& g, double tau, double u,
                           double lo, double hi, int points) {
  double best_w = lo, best = INFINITY;
  for (int i = 0; i <= points; ++i) {
    const double w = lo + (hi - lo) * i / points;
    const double v = g(w) + (w - u) * (w - u) / (2.0 * tau);
    if (v < best) {
      best = v;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace testkit
