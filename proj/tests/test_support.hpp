#pragma once

#include "tzlab/surface.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace tzlab::testing {

inline constexpr double kPi = std::numbers::pi;

/// Analytic band-limited trigonometric polynomial with random coefficients.
struct TrigPoly {
  struct Term {
    int kx, ky;
    double a, b;
  };
  std::vector<Term> terms;
  double offset = 0.0;

  static TrigPoly random(std::uint64_t seed, int max_mode = 3, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-amplitude, amplitude);
    TrigPoly p;
    p.offset = coef(rng);
    for (int kx = 0; kx <= max_mode; ++kx) {
      for (int ky = -max_mode; ky <= max_mode; ++ky) {
        if (kx == 0 && ky <= 0) continue;
        p.terms.push_back({kx, ky, coef(rng), coef(rng)});
      }
    }
    return p;
  }

  double operator()(double x, double y) const {
    double v = offset;
    for (const auto& t : terms) {
      const double ph = 2.0 * kPi * (t.kx * x + t.ky * y);
      v += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return v;
  }

  double laplacian(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms) {
      const double ph = 2.0 * kPi * (t.kx * x + t.ky * y);
      const double k2 = 4.0 * kPi * kPi * (t.kx * t.kx + t.ky * t.ky);
      v -= k2 * (t.a * std::cos(ph) + t.b * std::sin(ph));
    }
    return v;
  }

  /// int |grad p|^2 over the unit torus: each mode contributes k^2 (a^2 + b^2) / 2.
  double dirichlet() const {
    double v = 0.0;
    for (const auto& t : terms) {
      v += 4.0 * kPi * kPi * (t.kx * t.kx + t.ky * t.ky) * (t.a * t.a + t.b * t.b) / 2.0;
    }
    return v;
  }

  ScalarField sample(const GridPtr& grid) const {
    return ScalarField::from_function(grid, [this](double x, double y) { return (*this)(x, y); });
  }
};

/// Five-point finite-difference Laplacian, independent of the FFT path.
inline std::vector<double> five_point_laplacian(const ScalarField& f) {
  const auto n = f.grid()->n();
  const double h2 = f.grid()->dx() * f.grid()->dx();
  std::vector<double> out(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = f.at(i, j);
      out[j * n + i] = (f.at((i + 1) % n, j) + f.at((i + n - 1) % n, j) + f.at(i, (j + 1) % n) +
                        f.at(i, (j + n - 1) % n) - 4.0 * c) /
                       h2;
    }
  }
  return out;
}

}  // namespace tzlab::testing
