#pragma once

/**
 * @file surface.hpp
 * @brief Flat unit-area square torus: grids, sampled fields, quadrature and
 * spectral calculus.
 *
 * Nodes sit at (i*dx, j*dx) for i, j in [0, n). Field values are stored
 * row-major with x fastest, i.e. value(i, j) lives at index j*n + i.
 * Integrals use the periodic trapezoid rule, which is exact for
 * trigonometric polynomials below the Nyquist band. Derivatives are taken in
 * Fourier space with the FFT convention documented in fft.hpp.
 */

#include "tzlab/error.hpp"
#include "tzlab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tzlab {

/// A point of the torus, coordinates taken modulo the side length.
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

class TorusGrid;
using GridPtr = std::shared_ptr<const TorusGrid>;

class TorusGrid {
 public:
  /// Side length of the unit-area square.
  static constexpr double kLength = 1.0;

  static GridPtr build(int n) {
    detail::require(n % 2 == 0, "n must be even (got " + std::to_string(n) + ")");
    detail::require(n >= 8, "n must be at least 8 (got " + std::to_string(n) + ")");
    return GridPtr(new TorusGrid(static_cast<std::size_t>(n)));
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double length() const { return kLength; }
  double dx() const { return dx_; }
  double cell_area() const { return dx_ * dx_; }
  double area() const { return static_cast<double>(size()) * cell_area(); }

  /// Angular frequency per axis index; entries k and n-k are conjugate partners.
  std::span<const double> wavenumbers() const { return wavenumbers_; }

  double coordinate(std::size_t i) const { return static_cast<double>(i) * dx_; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * n_ + ix; }
  TorusPoint node(std::size_t idx) const {
    return {coordinate(idx % n_), coordinate(idx / n_)};
  }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.n_ == b.n_ && a.dx_ == b.dx_;
  }

 private:
  explicit TorusGrid(std::size_t n)
      : n_(n), dx_(kLength / static_cast<double>(n)), wavenumbers_(n) {
    const double base = 2.0 * std::numbers::pi / kLength;
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
      auto signed_j = static_cast<std::ptrdiff_t>(j);
      if (signed_j >= half) signed_j -= static_cast<std::ptrdiff_t>(n);
      wavenumbers_[j] = base * static_cast<double>(signed_j);
    }
  }

  std::size_t n_;
  double dx_;
  std::vector<double> wavenumbers_;
};

/// build_grid: unit-area periodic grid with n nodes per axis.
inline GridPtr build_grid(int n) { return TorusGrid::build(n); }

/// Geodesic distance of the flat metric: Euclidean distance minimized over
/// the nine nearest periodic translates.
inline double torus_distance_sq(const TorusPoint& p, const TorusPoint& q,
                                double length = TorusGrid::kLength) {
  double best = std::numeric_limits<double>::infinity();
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      const double ddx = std::remainder(p.x - q.x, length) + sx * length;
      const double ddy = std::remainder(p.y - q.y, length) + sy * length;
      best = std::min(best, ddx * ddx + ddy * ddy);
    }
  }
  return best;
}

inline double torus_distance(const TorusPoint& p, const TorusPoint& q,
                             double length = TorusGrid::kLength) {
  return std::sqrt(torus_distance_sq(p, q, length));
}

class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    detail::require(grid_ != nullptr, "field requires a grid");
    detail::require(values_.size() == grid_->size(), "field size does not match grid");
    for (double v : values_) {
      if (!std::isfinite(v)) throw OverflowError("field value is not finite");
    }
  }

  static ScalarField constant(GridPtr grid, double c) {
    const std::size_t size = grid->size();
    return ScalarField(std::move(grid), std::vector<double>(size, c));
  }

  template <class F>
  static ScalarField from_function(GridPtr grid, F&& f) {
    std::vector<double> values(grid->size());
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const TorusPoint p = grid->node(idx);
      values[idx] = f(p.x, p.y);
    }
    return ScalarField(std::move(grid), std::move(values));
  }

  const GridPtr& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double at(std::size_t ix, std::size_t iy) const { return values_[grid_->index(ix, iy)]; }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }

  template <class F>
  ScalarField map(F&& f) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), std::forward<F>(f));
    return ScalarField(grid_, std::move(out));
  }

  template <class F>
  ScalarField zip(const ScalarField& other, F&& f) const {
    check_same_grid(other);
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), other.values_.begin(), out.begin(),
                   std::forward<F>(f));
    return ScalarField(grid_, std::move(out));
  }

  ScalarField exp() const { return map([](double v) { return std::exp(v); }); }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return a.zip(b, std::plus<>{});
  }
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return a.zip(b, std::minus<>{});
  }
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return a.zip(b, std::multiplies<>{});
  }
  friend ScalarField operator*(double s, const ScalarField& a) {
    return a.map([s](double v) { return s * v; });
  }
  friend ScalarField operator*(const ScalarField& a, double s) { return s * a; }
  friend ScalarField operator+(const ScalarField& a, double c) {
    return a.map([c](double v) { return v + c; });
  }
  friend ScalarField operator-(const ScalarField& a, double c) { return a + (-c); }
  friend ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

  bool same_grid(const ScalarField& other) const {
    return grid_ == other.grid_ || *grid_ == *other.grid_;
  }

  void check_same_grid(const ScalarField& other) const {
    detail::require(same_grid(other), "fields live on different grids");
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Periodic trapezoid rule.
inline double integrate(const ScalarField& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0) * f.grid()->cell_area();
}

/// Average over the surface; coincides with integrate() because the area is 1.
inline double mean(const ScalarField& f) { return integrate(f) / f.grid()->area(); }

inline double inner(const ScalarField& f, const ScalarField& g) {
  f.check_same_grid(g);
  const auto a = f.values();
  const auto b = g.values();
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) * f.grid()->cell_area();
}

inline double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

inline double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

namespace detail {

/// Multiplies every Fourier mode by symbol(|k|^2) and transforms back.
template <class Symbol>
ScalarField apply_spectral(const ScalarField& f, Symbol&& symbol) {
  const TorusGrid& grid = *f.grid();
  const std::size_t n = grid.n();
  const std::size_t cols = n / 2 + 1;
  const auto& p = fft::plan(n);
  auto spectrum = p.forward(f.values());
  const auto k = grid.wavenumbers();
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < cols; ++col) {
      // Column n/2 is the Nyquist mode; |k|^2 is sign-independent there.
      const double kx = (col == n / 2) ? k[n / 2] : k[col];
      const double k2 = kx * kx + k[row] * k[row];
      spectrum[row * cols + col] *= symbol(k2);
    }
  }
  return ScalarField(f.grid(), p.inverse(std::move(spectrum)));
}

}  // namespace detail

/// Spectral Laplacian: each mode scaled by -|k|^2. The result has zero mean.
inline ScalarField laplacian(const ScalarField& f) {
  return detail::apply_spectral(f, [](double k2) { return -k2; });
}

/// Dirichlet integral of f via Parseval: sum |k|^2 |f_k|^2 / n^4 (times area).
inline double grad_norm_sq(const ScalarField& f) {
  const TorusGrid& grid = *f.grid();
  const std::size_t n = grid.n();
  const std::size_t cols = n / 2 + 1;
  const auto spectrum = fft::plan(n).forward(f.values());
  const auto k = grid.wavenumbers();
  double sum = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < cols; ++col) {
      // Interior columns stand for a conjugate pair in the half spectrum.
      const double weight = (col == 0 || col == n / 2) ? 1.0 : 2.0;
      const double kx = (col == n / 2) ? k[n / 2] : k[col];
      sum += weight * (kx * kx + k[row] * k[row]) * std::norm(spectrum[row * cols + col]);
    }
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return sum / (nn * nn) * grid.area();
}

}  // namespace tzlab
