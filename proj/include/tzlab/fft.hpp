#pragma once

// Thin RAII layer over FFTW for square real-to-complex transforms.
//
// Convention: forward transform is unnormalized, inverse is scaled by 1/n^2.
// Arrays are row-major with x fastest, so the half spectrum has shape
// n rows (ky) by n/2+1 columns (kx).

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace tzlab::fft {

using Complex = std::complex<double>;

class Plan2D {
 public:
  explicit Plan2D(std::size_t n) : n_(n) {
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<double> real(n * n);
    std::vector<Complex> spec(n * (n / 2 + 1));
    forward_ = fftw_plan_dft_r2c_2d(ni, ni, real.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), flags);
    inverse_ = fftw_plan_dft_c2r_2d(ni, ni, reinterpret_cast<fftw_complex*>(spec.data()),
                                    real.data(), flags);
  }
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;
  ~Plan2D() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  std::size_t n() const { return n_; }
  std::size_t spectrum_size() const { return n_ * (n_ / 2 + 1); }

  std::vector<Complex> forward(std::span<const double> values) const {
    // r2c does not modify its input when planned out of place, but the API is non-const.
    std::vector<double> in(values.begin(), values.end());
    std::vector<Complex> out(spectrum_size());
    fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }

  /// Consumes the spectrum (c2r destroys its input).
  std::vector<double> inverse(std::vector<Complex> spectrum) const {
    std::vector<double> out(n_ * n_);
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n_ * n_);
    for (double& v : out) v *= scale;
    return out;
  }

 private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

/// Shared plan for size n. Planning is serialized; execution is thread safe.
inline const Plan2D& plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Plan2D>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan2D>(n);
  return *slot;
}

inline const char* library_version() { return fftw_version; }

}  // namespace tzlab::fft
