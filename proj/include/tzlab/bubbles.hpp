#pragma once

/**
 * @file bubbles.hpp
 * @brief Concentrating test functions on the torus.
 *
 * A JoinConfig is a point of the join of two weighted point sets: plus
 * points (t_i, x_i), minus points (s_j, y_j) and a join parameter s. For
 * lambda > 0 the test function is
 *
 *   phi(x) = log sum_i t_i (1 + l1^2 d(x,x_i)^2)^-2
 *            - 1/2 log sum_j s_j (1 + l2^2 d(x,y_j)^2)^-2,
 *
 * with l1 = (1-s) lambda and l2 = s lambda. At s = 0 the second sum is
 * identically 1, so minus points are irrelevant there; at s = 1 the same
 * holds for plus points.
 */

#include "tzlab/error.hpp"
#include "tzlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tzlab {

struct WeightedPoint {
  double weight = 1.0;
  TorusPoint point;
  friend bool operator==(const WeightedPoint&, const WeightedPoint&) = default;
};

struct JoinConfig {
  std::vector<WeightedPoint> plus_points;
  std::vector<WeightedPoint> minus_points;
  double s = 0.5;

  static constexpr double kWeightTolerance = 1e-12;

  int k() const { return static_cast<int>(plus_points.size()); }
  int l() const { return static_cast<int>(minus_points.size()); }

  void validate() const {
    detail::require(!plus_points.empty(), "join config needs at least one plus point");
    detail::require(!minus_points.empty(), "join config needs at least one minus point");
    detail::require(s >= 0.0 && s <= 1.0, "join parameter s must lie in [0,1]");
    check_weights(plus_points, "plus");
    check_weights(minus_points, "minus");
  }

  /// Equality modulo the join relation: minus points are ignored at s = 0,
  /// plus points at s = 1.
  friend bool operator==(const JoinConfig& a, const JoinConfig& b) {
    if (a.s != b.s) return false;
    if (a.s == 0.0) return a.plus_points == b.plus_points;
    if (a.s == 1.0) return a.minus_points == b.minus_points;
    return a.plus_points == b.plus_points && a.minus_points == b.minus_points;
  }

 private:
  static void check_weights(const std::vector<WeightedPoint>& pts, const char* name) {
    double total = 0.0;
    for (const auto& p : pts) {
      detail::require(p.weight >= 0.0, std::string(name) + " weights must be nonnegative");
      total += p.weight;
    }
    detail::require(std::abs(total - 1.0) <= kWeightTolerance,
                    std::string(name) + " weights must sum to 1");
  }
};

/// (lambda_{1,s}, lambda_{2,s}) = ((1-s) lambda, s lambda).
inline std::pair<double, double> lambda_split(double s, double lambda) {
  detail::require(s >= 0.0 && s <= 1.0, "join parameter s must lie in [0,1]");
  return {(1.0 - s) * lambda, s * lambda};
}

namespace detail {

/// log sum_i w_i (1 + scale^2 d(x, p_i)^2)^-2, evaluated as a log-sum-exp.
inline double log_bubble_sum(const TorusPoint& x, std::span<const WeightedPoint> pts,
                             double scale) {
  // Weights sum to 1, so a zero scale gives log 1 exactly, whatever the points.
  if (scale == 0.0) return 0.0;
  auto term = [&](const WeightedPoint& p) {
    return std::log(p.weight) - 2.0 * std::log1p(scale * scale * torus_distance_sq(x, p.point));
  };
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (p.weight > 0.0) top = std::max(top, term(p));
  }
  double sum = 0.0;
  for (const auto& p : pts) {
    if (p.weight > 0.0) sum += std::exp(term(p) - top);
  }
  return top + std::log(sum);
}

}  // namespace detail

/// build_bubble: samples phi_{lambda, zeta} on the grid.
inline ScalarField build_bubble(const JoinConfig& zeta, double lambda, const GridPtr& grid) {
  detail::require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  zeta.validate();
  const auto [l1, l2] = lambda_split(zeta.s, lambda);
  return ScalarField::from_function(grid, [&](double x, double y) {
    const TorusPoint p{x, y};
    return detail::log_bubble_sum(p, zeta.plus_points, l1) -
           0.5 * detail::log_bubble_sum(p, zeta.minus_points, l2);
  });
}

/// Closed-form radial solution of u'' + u'/r + e^u = 0 with u(0) = alpha:
///   u(r) = alpha - 2 log(1 + (e^alpha / 8) r^2).
inline double liouville_profile(double alpha, double r) {
  if (r == 0.0) return alpha;
  // log((e^alpha/8) r^2), kept in log form so large alpha does not overflow.
  const double t = alpha - std::log(8.0) + 2.0 * std::log(std::abs(r));
  const double softplus = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  return alpha - 2.0 * softplus;
}

/// Derivative of liouville_profile in r.
inline double liouville_profile_derivative(double alpha, double r) {
  const double mu2 = std::exp(alpha) / 8.0;
  return -4.0 * mu2 * r / (1.0 + mu2 * r * r);
}

/// Local mass (1/2pi) int_{B_r} e^u = 4 mu^2 r^2 / (1 + mu^2 r^2), mu^2 = e^alpha / 8.
inline double liouville_mass(double alpha, double r) {
  const double mu2 = std::exp(alpha) / 8.0;
  return 4.0 * mu2 * r * r / (1.0 + mu2 * r * r);
}

inline std::vector<double> liouville_profile(double alpha, std::span<const double> radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(liouville_profile(alpha, r));
  return out;
}

/// Liouville bubble centered at a torus point, using the torus distance.
inline ScalarField liouville_bubble(double alpha, const GridPtr& grid, const TorusPoint& center) {
  return ScalarField::from_function(grid, [&](double x, double y) {
    return liouville_profile(alpha, torus_distance({x, y}, center));
  });
}

/// Quantitative tests need the bubble core to span a few cells: lambda dx <= 2.
inline bool grid_adequate(double lambda_max, const TorusGrid& grid) {
  return lambda_max * grid.dx() <= 2.0;
}

}  // namespace tzlab
