#pragma once

#include <fftw3.h>

#include <cstddef>
#include <mutex>

#include "prnu_mixed/error.hpp"

namespace prnu {

// Smallest size >= n whose only prime factors are 2, 3, 5 and 7.
inline std::size_t good_fft_size(std::size_t n) {
  for (std::size_t m = n < 1 ? 1 : n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2U, 3U, 5U, 7U})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

namespace detail {
// The FFTW planner is not re-entrant; plan execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Out-of-place real 2-D transform pair with owned, FFTW-aligned buffers.
// The inverse is unnormalized.
class RealFft2d {
 public:
  RealFft2d(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw DimensionError("empty FFT");
    real_ = fftw_alloc_real(rows * cols);
    spec_ = fftw_alloc_complex(rows * spectrum_cols());
    if (!real_ || !spec_) throw std::bad_alloc();
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int r = static_cast<int>(rows), c = static_cast<int>(cols);
    fwd_ = fftw_plan_dft_r2c_2d(r, c, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_2d(r, c, spec_, real_, FFTW_ESTIMATE);
  }
  ~RealFft2d() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t spectrum_cols() const { return cols_ / 2 + 1; }
  std::size_t spectrum_size() const { return rows_ * spectrum_cols(); }

  double* real() { return real_; }
  fftw_complex* spectrum() { return spec_; }

  void forward() { fftw_execute(fwd_); }
  void inverse() { fftw_execute(inv_); }

 private:
  std::size_t rows_, cols_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace prnu
