#pragma once

/**
 * @file radial.hpp
 * @brief Radial Tzitzeica solutions on the unit disk, local masses, the
 * Pohozaev identity, and the lattice of admissible blow-up mass pairs.
 *
 * The radial equation with constant coefficients is
 *
 *   u'' + u'/r + h1 e^u - h2 e^{-2u} = 0,   u(0) = alpha, u'(0) = 0,
 *
 * integrated by classical RK4 on a uniform radius grid. The local masses
 * sigma1(r) = int_0^r h1 e^u s ds and sigma2(r) = int_0^r h2 e^{-2u} s ds
 * (the 1/2pi-normalized disk integrals) are integrated alongside u.
 */

#include "tzlab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace tzlab::radial {

class StepTooLarge : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> sigma1;
  std::vector<double> sigma2;
  double alpha = 0.0;
  double h1 = 1.0;
  double h2 = 0.0;
  double step = 0.0;

  std::size_t size() const { return r.size(); }
  double r_max() const { return r.back(); }

  /// Index of the integration node nearest to radius rr.
  std::size_t node(double rr) const {
    tzlab::detail::require(rr >= 0.0 && rr <= r_max() * (1.0 + 1e-12),
                    "radius " + std::to_string(rr) + " outside profile range");
    const auto i = static_cast<std::size_t>(std::llround(rr / step));
    return std::min(i, size() - 1);
  }
};

/// Largest step allowed at central value alpha: step * e^{max(alpha,-2alpha)/2} <= 0.1.
inline double max_step(double alpha) {
  return 0.1 * std::exp(-0.5 * std::max(alpha, -2.0 * alpha));
}

inline constexpr double kMinU = -700.0;
inline constexpr double kMaxU = 350.0;

namespace detail {

using State = std::array<double, 4>;  // u, u', sigma1, sigma2

struct Rhs {
  double h1, h2;
  State operator()(double r, const State& y) const {
    const double e1 = h1 * std::exp(y[0]);
    const double e2 = h2 * std::exp(-2.0 * y[0]);
    return {y[1], -y[1] / r - e1 + e2, e1 * r, e2 * r};
  }
};

inline State axpy(const State& y, double a, const State& k) {
  return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
}

/// Taylor start across the r = 0 singularity:
///   u = alpha + c2 r^2 + c4 r^4, c2 = -F(alpha)/4, c4 = -F'(alpha) c2 / 16,
/// with F(u) = h1 e^u - h2 e^{-2u}.
inline State series_start(double alpha, double h1, double h2, double r) {
  const double e1 = h1 * std::exp(alpha);
  const double e2 = h2 * std::exp(-2.0 * alpha);
  const double c2 = -(e1 - e2) / 4.0;
  const double c4 = -(e1 + 2.0 * e2) * c2 / 16.0;
  const double r2 = r * r;
  return {alpha + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r + 4.0 * c4 * r2 * r,
          e1 * (r2 / 2.0 + c2 * r2 * r2 / 4.0), e2 * (r2 / 2.0 - c2 * r2 * r2 / 2.0)};
}

}  // namespace detail

/// shoot: RK4 trajectory on [0, r_max]. The step is rounded down so that
/// r_max is an integration node.
inline RadialProfile shoot(double alpha, double h1, double h2, double r_max, double step) {
  tzlab::detail::require(std::isfinite(alpha), "alpha must be finite");
  tzlab::detail::require(h1 > 0.0, "h1 must be positive");
  tzlab::detail::require(h2 >= 0.0, "h2 must be nonnegative");
  tzlab::detail::require(r_max > 0.0, "r_max must be positive");
  tzlab::detail::require(step > 0.0, "step must be positive");
  if (step > max_step(alpha)) {
    throw StepTooLarge("step " + std::to_string(step) + " too large for alpha " +
                       std::to_string(alpha) + " (max " + std::to_string(max_step(alpha)) + ")");
  }
  const auto count = static_cast<std::size_t>(std::ceil(r_max / step - 1e-9));
  const double h = r_max / static_cast<double>(count);

  RadialProfile p;
  p.alpha = alpha;
  p.h1 = h1;
  p.h2 = h2;
  p.step = h;
  for (auto* v : {&p.r, &p.u, &p.du, &p.sigma1, &p.sigma2}) v->reserve(count + 1);
  auto push = [&p](double r, const detail::State& y) {
    if (!(y[0] >= kMinU && y[0] <= kMaxU)) {
      throw OverflowError("u left [-700, 350] at r = " + std::to_string(r));
    }
    p.r.push_back(r);
    p.u.push_back(y[0]);
    p.du.push_back(y[1]);
    p.sigma1.push_back(y[2]);
    p.sigma2.push_back(y[3]);
  };

  push(0.0, {alpha, 0.0, 0.0, 0.0});
  detail::State y = detail::series_start(alpha, h1, h2, h);
  push(h, y);
  const detail::Rhs f{h1, h2};
  for (std::size_t i = 1; i < count; ++i) {
    const double r = static_cast<double>(i) * h;
    const auto k1 = f(r, y);
    const auto k2 = f(r + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
    const auto k3 = f(r + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
    const auto k4 = f(r + h, detail::axpy(y, h, k3));
    for (int c = 0; c < 4; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    push(static_cast<double>(i + 1) * h, y);
  }
  return p;
}

/// Left side of the constant-coefficient Pohozaev identity, 2 pi (2 sigma1 + sigma2).
inline double pohozaev_lhs(const RadialProfile& p, std::size_t i) {
  return 2.0 * std::numbers::pi * (2.0 * p.sigma1[i] + p.sigma2[i]);
}

inline double pohozaev_residual_at(const RadialProfile& p, std::size_t i) {
  const double pi = std::numbers::pi;
  const double r2 = p.r[i] * p.r[i];
  const double rhs = pi * r2 * p.du[i] * p.du[i] +
                     2.0 * pi * r2 * (p.h1 * std::exp(p.u[i]) + 0.5 * p.h2 * std::exp(-2.0 * p.u[i]));
  return pohozaev_lhs(p, i) - rhs;
}

/// pohozaev_residual: LHS - RHS at the integration node nearest to r.
inline double pohozaev_residual(const RadialProfile& p, double r) {
  return pohozaev_residual_at(p, p.node(r));
}

/// Max over nodes r > 0 of |pohozaev_residual| / (1 + |LHS|).
inline double max_pohozaev_ratio(const RadialProfile& p) {
  double worst = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(pohozaev_residual_at(p, i)) / (1.0 + std::abs(pohozaev_lhs(p, i))));
  }
  return worst;
}

struct OrderEstimate {
  double coarse = 0.0;  // max relative Pohozaev residual at step
  double fine = 0.0;    // same at step / 2
  double order = 0.0;   // log2(coarse / fine); infinity when resolved to roundoff
  bool at_roundoff = false;
};

/// Observed convergence order of the Pohozaev residual under step halving.
/// Residuals below noise_floor are roundoff: exact trajectories such as
/// u = 0 have nothing left to converge.
inline OrderEstimate pohozaev_order(double alpha, double h1, double h2, double r_max, double step,
                                    double noise_floor = 1e-11) {
  OrderEstimate e;
  e.coarse = max_pohozaev_ratio(shoot(alpha, h1, h2, r_max, step));
  e.fine = max_pohozaev_ratio(shoot(alpha, h1, h2, r_max, 0.5 * step));
  e.at_roundoff = e.coarse <= noise_floor;
  e.order = e.at_roundoff ? std::numeric_limits<double>::infinity() : std::log2(e.coarse / e.fine);
  return e;
}

/// Max over nodes of |r u' + sigma1 - sigma2|, which vanishes along exact solutions.
inline double derivative_identity_defect(const RadialProfile& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, std::abs(p.r[i] * p.du[i] + p.sigma1[i] - p.sigma2[i]));
  }
  return worst;
}

/// (sigma1 - sigma2)^2 - 4 (sigma1 + sigma2/2); zero on the blow-up hyperbola.
inline double limit_mass_relation(double sigma1, double sigma2) {
  const double d = sigma1 - sigma2;
  return d * d - 4.0 * (sigma1 + 0.5 * sigma2);
}

/// Integer form of limit_mass_relation: (sigma1 - sigma2)^2 - 4 sigma1 - 2 sigma2.
inline std::int64_t limit_mass_relation_exact(std::int64_t sigma1, std::int64_t sigma2) {
  const std::int64_t d = sigma1 - sigma2;
  return d * d - 4 * sigma1 - 2 * sigma2;
}

enum class Family { none, type_one, type_two };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::type_one: return "TypeI";
    case Family::type_two: return "TypeII";
    default: return "none";
  }
}

struct LatticePair {
  Family family;
  int m;
  std::int64_t sigma1;
  std::int64_t sigma2;
};

struct MassPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  Family family = Family::none;
  int m = 0;
  double distance = std::numeric_limits<double>::infinity();  // l-infinity, to nearest lattice pair
};

/// Type I: (2m(3m-1), 2(3m-1)(m-1)).
constexpr LatticePair type_one(int m) {
  const std::int64_t mm = m;
  return {Family::type_one, m, 2 * mm * (3 * mm - 1), 2 * (3 * mm - 1) * (mm - 1)};
}

/// Type II: (2(3m-2)(m-1), 2(3m-5)(m-1)).
constexpr LatticePair type_two(int m) {
  const std::int64_t mm = m;
  return {Family::type_two, m, 2 * (3 * mm - 2) * (mm - 1), 2 * (3 * mm - 5) * (mm - 1)};
}

/// Admissible blow-up pairs for m in [m_min, m_max], without (0,0) and
/// without negative entries, sorted by (sigma1, sigma2) and deduplicated.
inline std::vector<LatticePair> quantization_table(int m_min, int m_max) {
  tzlab::detail::require(m_min <= m_max, "m_min must not exceed m_max");
  std::vector<LatticePair> out;
  for (int m = m_min; m <= m_max; ++m) {
    for (const LatticePair& p : {type_one(m), type_two(m)}) {
      if (p.sigma1 == 0 && p.sigma2 == 0) continue;
      if (p.sigma1 < 0 || p.sigma2 < 0) continue;
      out.push_back(p);
    }
  }
  auto key_less = [](const LatticePair& a, const LatticePair& b) {
    if (a.sigma1 != b.sigma1) return a.sigma1 < b.sigma1;
    if (a.sigma2 != b.sigma2) return a.sigma2 < b.sigma2;
    if (std::abs(a.m) != std::abs(b.m)) return std::abs(a.m) < std::abs(b.m);
    return a.family < b.family;
  };
  std::stable_sort(out.begin(), out.end(), key_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const LatticePair& a, const LatticePair& b) {
                          return a.sigma1 == b.sigma1 && a.sigma2 == b.sigma2;
                        }),
            out.end());
  return out;
}

/// Nearest lattice pair in l-infinity; family is none when farther than tol.
/// Ties go to smaller |m|, then Type I.
inline MassPair classify_mass_pair(double sigma1, double sigma2, double tol = 0.05) {
  MassPair out{sigma1, sigma2};
  if (!std::isfinite(sigma1) || !std::isfinite(sigma2)) return out;
  // sigma1 grows like 6 m^2 on both families.
  const double scale = std::max({std::abs(sigma1), std::abs(sigma2), 1.0});
  const int bound = static_cast<int>(std::ceil(std::sqrt(scale / 2.0))) + 3;
  Family best_family = Family::none;
  int best_m = 0;
  for (const auto& p : quantization_table(-bound, bound)) {
    const double d = std::max(std::abs(sigma1 - static_cast<double>(p.sigma1)),
                              std::abs(sigma2 - static_cast<double>(p.sigma2)));
    const bool better =
        d < out.distance ||
        (d == out.distance && (std::abs(p.m) < std::abs(best_m) ||
                               (std::abs(p.m) == std::abs(best_m) && p.family < best_family)));
    if (better) {
      out.distance = d;
      best_family = p.family;
      best_m = p.m;
    }
  }
  if (out.distance <= tol) {
    out.family = best_family;
    out.m = best_m;
  }
  return out;
}

/// Dirichlet problem on the unit disk: bisection on alpha for u(1) = 0.
/// Needs u(1) to change sign over [alpha_lo, alpha_hi].
inline RadialProfile solve_dirichlet(double h1, double h2, double alpha_lo, double alpha_hi,
                                     double step, double tol = 1e-12, int max_iter = 200) {
  tzlab::detail::require(alpha_lo < alpha_hi, "alpha_lo must be below alpha_hi");
  auto boundary = [&](double a) { return shoot(a, h1, h2, 1.0, step).u.back(); };
  double f_lo = boundary(alpha_lo);
  const double f_hi = boundary(alpha_hi);
  tzlab::detail::require(f_lo * f_hi <= 0.0, "u(1) does not change sign on the bracket");
  for (int i = 0; i < max_iter && alpha_hi - alpha_lo > tol; ++i) {
    const double mid = 0.5 * (alpha_lo + alpha_hi);
    const double f_mid = boundary(mid);
    if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
      alpha_lo = mid;
      f_lo = f_mid;
    } else {
      alpha_hi = mid;
    }
  }
  return shoot(0.5 * (alpha_lo + alpha_hi), h1, h2, 1.0, step);
}

}  // namespace tzlab::radial
