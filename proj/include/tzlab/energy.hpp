#pragma once

/**
 * @file energy.hpp
 * @brief Mean-field energy of the Tzitzeica equation on the torus, its
 * L2-gradient, and Moser-Trudinger deficit functionals.
 *
 *   J(u) = 1/2 int |grad u|^2 - rho1 (log int h1 e^u - int u)
 *                            - rho2/2 (log int h2 e^{-2u} + int 2u)
 *
 * Every exponential integral goes through log_integral_exp(), which shifts
 * by the maximum exponent before exponentiating. Bubbles at lambda = 1e4
 * push -2u to about +74, so the naive sums overflow.
 */

#include "tzlab/error.hpp"
#include "tzlab/surface.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tzlab {

struct Params {
  double rho1 = 0.0;
  double rho2 = 0.0;
  ScalarField h1;
  ScalarField h2;

  Params(double rho1_, double rho2_, ScalarField h1_, ScalarField h2_)
      : rho1(rho1_), rho2(rho2_), h1(std::move(h1_)), h2(std::move(h2_)) {
    validate();
  }

  /// Constant weights h1 = h2 = 1.
  static Params uniform(const GridPtr& grid, double rho1, double rho2) {
    return Params(rho1, rho2, ScalarField::constant(grid, 1.0), ScalarField::constant(grid, 1.0));
  }

  void validate() const {
    detail::require(std::isfinite(rho1) && rho1 >= 0.0, "rho1 must be finite and nonnegative");
    detail::require(std::isfinite(rho2) && rho2 >= 0.0, "rho2 must be finite and nonnegative");
    detail::require(h1.same_grid(h2), "h1 and h2 must share a grid");
    detail::require(h1.min() > 0.0, "h1 must be strictly positive");
    detail::require(h2.min() > 0.0, "h2 must be strictly positive");
  }
};

/// Coefficients (a1, a2) of D(u) = 1/2 int|grad u|^2 - a1 log int e^{u-ubar}
///                                   - a2/2 log int e^{-2(u-ubar)}.
/// The sharp pair is (8 pi, 4 pi).
struct MTCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;

  static constexpr MTCoefficients sharp() {
    return {8.0 * std::numbers::pi, 4.0 * std::numbers::pi};
  }
};

/// log int weight * e^{scale * f}, stabilized by the maximum exponent.
inline double log_integral_exp(const ScalarField& f, double scale = 1.0,
                               const ScalarField* weight = nullptr) {
  if (weight) f.check_same_grid(*weight);
  const auto v = f.values();
  double shift = -std::numeric_limits<double>::infinity();
  for (double x : v) shift = std::max(shift, scale * x);
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double term = std::exp(scale * v[i] - shift);
    sum += weight ? (*weight)[i] * term : term;
  }
  sum *= f.grid()->cell_area();
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw OverflowError("stabilized exponential integral is not representable");
  }
  return shift + std::log(sum);
}

/// Normalized density weight e^{scale f} / int weight e^{scale f}.
inline ScalarField normalized_density(const ScalarField& f, double scale,
                                      const ScalarField& weight) {
  const double log_z = log_integral_exp(f, scale, &weight);
  return f.zip(weight, [&](double v, double w) { return w * std::exp(scale * v - log_z); });
}

/// energy_J
inline double energy_J(const ScalarField& u, const Params& p) {
  u.check_same_grid(p.h1);
  const double ubar = mean(u);
  double value = 0.5 * grad_norm_sq(u);
  if (p.rho1 != 0.0) value -= p.rho1 * (log_integral_exp(u, 1.0, &p.h1) - ubar);
  if (p.rho2 != 0.0) value -= 0.5 * p.rho2 * (log_integral_exp(u, -2.0, &p.h2) + 2.0 * ubar);
  return value;
}

/// J(v) - J(u), formed from d = v - u so it stays accurate when the change is
/// far below the rounding error of J itself (late line-search steps):
///   1/2 <d, -Lap(u+v)> - rho1 (log int dens1_u e^d - dbar)
///                      - rho2/2 (log int dens2_u e^{-2d} + 2 dbar),
/// with dens_u the normalized densities at u and log(1 + int dens (e^x - 1)).
inline double energy_change(const ScalarField& u, const ScalarField& v, const Params& p) {
  u.check_same_grid(p.h1);
  v.check_same_grid(p.h1);
  const ScalarField d = v - u;
  const double dbar = mean(d);
  double value = 0.5 * inner(d, -laplacian(u + v));
  auto log_ratio = [&](double scale, const ScalarField& h) {
    const ScalarField dens = normalized_density(u, scale, h);
    return std::log1p(inner(dens, d.map([scale](double x) { return std::expm1(scale * x); })));
  };
  if (p.rho1 != 0.0) value -= p.rho1 * (log_ratio(1.0, p.h1) - dbar);
  if (p.rho2 != 0.0) value -= 0.5 * p.rho2 * (log_ratio(-2.0, p.h2) + 2.0 * dbar);
  return value;
}

/// residual_J: the L2-gradient of energy_J,
///   -Lap u - rho1 (h1 e^u / int h1 e^u - 1) + rho2 (h2 e^{-2u} / int h2 e^{-2u} - 1).
/// It vanishes exactly at discrete solutions of the mean-field equation.
inline ScalarField residual_J(const ScalarField& u, const Params& p) {
  u.check_same_grid(p.h1);
  ScalarField r = -laplacian(u);
  if (p.rho1 != 0.0) r = r - p.rho1 * (normalized_density(u, 1.0, p.h1) - 1.0);
  if (p.rho2 != 0.0) r = r + p.rho2 * (normalized_density(u, -2.0, p.h2) - 1.0);
  return r;
}

/// energy_I: the scalar Liouville functional.
inline double energy_I(const ScalarField& u, double rho, const ScalarField& h) {
  detail::require(h.min() > 0.0, "h must be strictly positive");
  double value = 0.5 * grad_norm_sq(u);
  if (rho != 0.0) value -= rho * (log_integral_exp(u, 1.0, &h) - mean(u));
  return value;
}

namespace detail {

struct DeficitTerms {
  double dirichlet;     // 1/2 int |grad u|^2
  double log_plus;      // log int e^{u - ubar}
  double log_minus;     // log int e^{-2(u - ubar)}
};

inline DeficitTerms deficit_terms(const ScalarField& u) {
  const double ubar = mean(u);
  return {0.5 * grad_norm_sq(u), log_integral_exp(u, 1.0) - ubar,
          log_integral_exp(u, -2.0) + 2.0 * ubar};
}

}  // namespace detail

inline double mt_deficit(const ScalarField& u, const MTCoefficients& c) {
  detail::require(std::isfinite(c.a1) && c.a1 >= 0.0, "a1 must be finite and nonnegative");
  detail::require(std::isfinite(c.a2) && c.a2 >= 0.0, "a2 must be finite and nonnegative");
  const auto t = detail::deficit_terms(u);
  return t.dirichlet - c.a1 * t.log_plus - 0.5 * c.a2 * t.log_minus;
}

/// Improved deficit for mass spread over k (resp. l) regions, without the
/// unknown additive constant:
///   (1+eps)/2 int|grad u|^2 - 8k pi log int e^{u-ubar} - 2l pi log int e^{-2(u-ubar)}.
inline double improved_mt_deficit(const ScalarField& u, int k, int l, double eps = 0.05) {
  detail::require(k >= 1 && l >= 1, "k and l must be at least 1");
  detail::require(eps > 0.0, "eps must be positive");
  const auto t = detail::deficit_terms(u);
  const double pi = std::numbers::pi;
  return (1.0 + eps) * t.dirichlet - 8.0 * k * pi * t.log_plus - 2.0 * l * pi * t.log_minus;
}

enum class Species { plus, minus };

/// Node index sets on a grid.
using Region = std::vector<std::size_t>;

/// Fraction of int e^u (plus) or int e^{-2u} (minus) carried by each region.
inline std::vector<double> region_mass_fractions(const ScalarField& u,
                                                 const std::vector<Region>& regions,
                                                 Species which) {
  detail::require(!regions.empty(), "region list must not be empty");
  std::vector<char> owner(u.size(), 0);
  for (const auto& region : regions) {
    for (std::size_t idx : region) {
      detail::require(idx < u.size(), "region node index out of range");
      detail::require(!owner[idx], "regions must be pairwise disjoint");
      owner[idx] = 1;
    }
  }
  const double scale = which == Species::plus ? 1.0 : -2.0;
  const ScalarField one = ScalarField::constant(u.grid(), 1.0);
  const ScalarField density = normalized_density(u, scale, one);
  std::vector<double> fractions;
  fractions.reserve(regions.size());
  for (const auto& region : regions) {
    double m = 0.0;
    for (std::size_t idx : region) m += density[idx];
    fractions.push_back(m * u.grid()->cell_area());
  }
  return fractions;
}

/// True iff every region holds at least theta of the total mass.
inline bool check_spread(const ScalarField& u, const std::vector<Region>& regions,
                         Species which, double theta) {
  for (double f : region_mass_fractions(u, regions, which)) {
    if (f < theta) return false;
  }
  return true;
}

/// Nodes whose torus distance to center is below radius.
inline Region disk_region(const GridPtr& grid, const TorusPoint& center, double radius) {
  Region out;
  const double r2 = radius * radius;
  for (std::size_t idx = 0; idx < grid->size(); ++idx) {
    if (torus_distance_sq(grid->node(idx), center) < r2) out.push_back(idx);
  }
  return out;
}

/// Nodes whose coordinates fall in [x0, x1) x [y0, y1).
inline Region box_region(const GridPtr& grid, double x0, double x1, double y0, double y1) {
  Region out;
  for (std::size_t idx = 0; idx < grid->size(); ++idx) {
    const TorusPoint p = grid->node(idx);
    if (p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1) out.push_back(idx);
  }
  return out;
}

}  // namespace tzlab
