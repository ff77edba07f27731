#pragma once

// Direct minimization of J in the coercive regime rho1 < 8 pi, rho2 < 4 pi by
// H1-preconditioned gradient descent with an Armijo line search.

#include "tzlab/energy.hpp"
#include "tzlab/error.hpp"
#include "tzlab/surface.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tzlab {

struct DescentConfig {
  int max_iters = 20000;
  double tol_residual = 1e-10;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_backtrack = 0.5;
  bool precondition = true;

  void validate() const {
    detail::require(max_iters > 0, "max_iters must be positive");
    detail::require(tol_residual > 0.0, "tol_residual must be positive");
    detail::require(step0 > 0.0, "step0 must be positive");
    detail::require(armijo_c > 0.0 && armijo_c < 1.0, "armijo_c must lie in (0,1)");
    detail::require(armijo_backtrack > 0.0 && armijo_backtrack < 1.0,
                    "armijo_backtrack must lie in (0,1)");
  }
};

struct Solution {
  ScalarField u;  // zero-mean representative
  double energy = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_history;
  std::vector<std::string> warnings;
};

class DescentError : public std::runtime_error {
 public:
  DescentError(const std::string& what, Solution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const Solution& best() const { return best_; }

 private:
  Solution best_;
};

/// Iteration cap reached with the residual still above tolerance.
class NonConvergence : public DescentError {
 public:
  using DescentError::DescentError;
};

/// No energy decrease even at the smallest admissible step.
class LineSearchStall : public DescentError {
 public:
  using DescentError::DescentError;
};

/// Solves (-Lap + I) g = r mode by mode.
inline ScalarField precondition_gradient(const ScalarField& r) {
  return detail::apply_spectral(r, [](double k2) { return 1.0 / (k2 + 1.0); });
}

/// Smooth random field: a sum of low Fourier modes with uniform random
/// amplitudes in [-amplitude, amplitude]. Deterministic for a given seed.
inline ScalarField random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                                       double amplitude = 0.1, int max_mode = 3) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  struct Mode {
    int kx, ky;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int kx = 0; kx <= max_mode; ++kx) {
    for (int ky = -max_mode; ky <= max_mode; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      modes.push_back({kx, ky, uniform(), uniform()});
    }
  }
  const double scale = amplitude / static_cast<double>(modes.size());
  const double two_pi = 2.0 * std::numbers::pi;
  return ScalarField::from_function(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : modes) {
      const double phase = two_pi * (m.kx * x + m.ky * y);
      v += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    return scale * v;
  });
}

inline Solution minimize(const Params& p, const ScalarField& u0, const DescentConfig& cfg = {}) {
  cfg.validate();
  p.validate();
  u0.check_same_grid(p.h1);

  Solution sol{.u = u0 - mean(u0), .energy_history = {}, .warnings = {}};
  const double pi = std::numbers::pi;
  if (p.rho1 >= 8.0 * pi) sol.warnings.push_back("rho1 >= 8 pi: J may not be coercive");
  if (p.rho2 >= 4.0 * pi) sol.warnings.push_back("rho2 >= 4 pi: J may not be coercive");

  // Below this step the trial point cannot differ meaningfully from u.
  const double min_step = cfg.step0 * 1e-14;

  double energy = energy_J(sol.u, p);
  ScalarField r = residual_J(sol.u, p);
  double rnorm = l2_norm(r);
  sol.energy_history.push_back(energy);

  auto snapshot = [&](int iters, bool converged) {
    sol.energy = energy;
    sol.residual_norm = rnorm;
    sol.iterations = iters;
    sol.converged = converged;
    return sol;
  };

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (rnorm <= cfg.tol_residual) return snapshot(it, true);

    const ScalarField g = cfg.precondition ? precondition_gradient(r) : r;
    const double slope = inner(r, g);

    double t = cfg.step0;
    for (;;) {
      ScalarField trial = sol.u - t * g;
      trial = trial - mean(trial);
      // The change is computed directly: near the minimum it is far below
      // the rounding error of J, and differencing two energies would stall.
      const double change = energy_change(sol.u, trial, p);
      if (change <= -cfg.armijo_c * t * slope) {
        sol.u = std::move(trial);
        energy = energy_J(sol.u, p);
        break;
      }
      t *= cfg.armijo_backtrack;
      if (t < min_step) {
        throw LineSearchStall("line search stalled at iteration " + std::to_string(it),
                              snapshot(it, false));
      }
    }
    r = residual_J(sol.u, p);
    rnorm = l2_norm(r);
    sol.energy_history.push_back(energy);
  }
  if (rnorm <= cfg.tol_residual) return snapshot(cfg.max_iters, true);
  throw NonConvergence("no convergence after " + std::to_string(cfg.max_iters) +
                           " iterations (residual " + std::to_string(rnorm) + ")",
                       snapshot(cfg.max_iters, false));
}

}  // namespace tzlab
