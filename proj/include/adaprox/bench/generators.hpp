#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "adaprox/numkit/io.hpp"
#include "adaprox/numkit/types.hpp"

namespace adaprox {

/// Lasso instance min 1/2 ||D x - b||^2 + lambda ||x||_1 with a known
/// minimizer. `certificate` is u = -D^T (D x* - b), an element of
/// lambda * subdifferential of ||.||_1 at x*.
struct LassoInstance {
  DenseMatrix d;
  Vector b;
  double lambda = 1.0;
  Vector x_star;
  double phi_star = 0.0;
  Vector certificate;
  std::vector<Index> support;  // sorted
  std::uint64_t seed_used = 0;
};

namespace detail {

inline double lasso_cost(const DenseMatrix& d, const Vector& b, const Vector& x) {
  return 0.5 * (d * x - b).squaredNorm() + x.lpNorm<1>();
}

}  // namespace detail

/// Known-solution lasso generator.
///   1. D has iid uniform[-1, 1] entries; v ~ N(0, I_m); u = D^T v.
///   2. S = the n_star largest |u_j|. Column j is scaled by 1/|u_j| on S and
///      by 0.99 / max(1, |u_j|) off S, then u is recomputed, so |u_j| = 1 on
///      S and |u_j| <= 0.99 elsewhere.
///   3. x*_j = rho sign(u_j) zeta_j on S with zeta_j uniform on (0.1, 1],
///      zero elsewhere; b = D x* + v.
/// Then -D^T (D x* - b) = u lies in the subdifferential of ||.||_1 at x*.
/// A tie at the boundary of S or a zero |u_j| on S redraws everything from
/// the next seed.
inline LassoInstance gen_lasso(Index m, Index n, Index n_star, double rho, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_lasso: m, n must be positive");
  if (n_star <= 0 || n_star > std::min(m, n)) {
    throw std::invalid_argument("gen_lasso: need 0 < n_star <= min(m, n)");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("gen_lasso: rho must be > 0");

  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = seed + attempt;
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;

    LassoInstance inst;
    inst.seed_used = s;
    inst.d.resize(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) inst.d(i, j) = unif(rng);
    Vector v(m);
    for (Index i = 0; i < m; ++i) v[i] = normal(rng);
    Vector u = inst.d.transpose() * v;

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&u](Index a, Index b) { return std::abs(u[a]) > std::abs(u[b]); });
    const auto ns = static_cast<std::size_t>(n_star);
    const bool tie = ns < order.size() && std::abs(u[order[ns - 1]]) == std::abs(u[order[ns]]);
    if (tie || std::abs(u[order[ns - 1]]) == 0.0) continue;

    std::vector<bool> in_s(static_cast<std::size_t>(n), false);
    for (std::size_t i = 0; i < ns; ++i) in_s[static_cast<std::size_t>(order[i])] = true;
    for (Index j = 0; j < n; ++j) {
      const double a = std::abs(u[j]);
      const double scale = in_s[static_cast<std::size_t>(j)] ? 1.0 / a : 0.99 / std::max(1.0, a);
      inst.d.col(j) *= scale;
    }
    u = inst.d.transpose() * v;

    inst.x_star = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      if (!in_s[static_cast<std::size_t>(j)]) continue;
      const double zeta = 1.0 - 0.9 * unit(rng);  // (0.1, 1]
      inst.x_star[j] = rho * (u[j] > 0.0 ? 1.0 : -1.0) * zeta;
      inst.support.push_back(j);
    }
    inst.b = inst.d * inst.x_star + v;
    inst.certificate = -inst.d.transpose() * (inst.d * inst.x_star - inst.b);
    inst.phi_star = detail::lasso_cost(inst.d, inst.b, inst.x_star);
    return inst;
  }
}

/// Sparse binary-classification data: features ~ N(0,1) at the given
/// density, labels in {-1, +1} from a random hyperplane with a fraction
/// `flip` of labels flipped.
inline LabeledDataset gen_classification(Index m, Index n, double density, double flip,
                                         std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_classification: empty shape");
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("gen_classification: density must be in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector w(n);
  for (Index j = 0; j < n; ++j) w[j] = normal(rng);
  std::vector<Eigen::Triplet<double>> trip;
  LabeledDataset ds;
  ds.labels.resize(m);
  for (Index i = 0; i < m; ++i) {
    double margin = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (unit(rng) >= density) continue;
      const double v = normal(rng);
      trip.emplace_back(i, j, v);
      margin += v * w[j];
    }
    double label = margin >= 0.0 ? 1.0 : -1.0;
    if (unit(rng) < flip) label = -label;
    ds.labels[i] = label;
  }
  ds.features.resize(m, n);
  ds.features.setFromTriplets(trip.begin(), trip.end());
  ds.features.makeCompressed();
  return ds;
}

/// Dense regression data b = D w + noise with heavy-tailed noise, so the
/// least-absolute-deviation and square-root-lasso fits differ.
inline LabeledDataset gen_regression(Index m, Index n, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_regression: empty shape");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::cauchy_distribution<double> cauchy(0.0, 0.1);
  DenseMatrix d(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) d(i, j) = normal(rng);
  Vector w = Vector::Zero(n);
  for (Index j = 0; j < n; j += 3) w[j] = normal(rng);
  LabeledDataset ds;
  ds.labels = d * w;
  for (Index i = 0; i < m; ++i) ds.labels[i] += cauchy(rng);
  ds.features = d.sparseView();
  ds.features.makeCompressed();
  return ds;
}

}  // namespace adaprox
