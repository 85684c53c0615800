#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "prnu_mixed/bayer.hpp"
#include "prnu_mixed/error.hpp"
#include "prnu_mixed/plane.hpp"

namespace prnu {

struct Margins {
  std::size_t top = 0;
  std::size_t bottom = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  friend bool operator==(const Margins&, const Margins&) = default;
};

struct CropWindow {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  bool fits(std::size_t src_rows, std::size_t src_cols) const {
    return rows > 0 && cols > 0 && top + rows <= src_rows && left + cols <= src_cols;
  }
  friend bool operator==(const CropWindow&, const CropWindow&) = default;
};

// Window of the given size centred in a source of the given size.
inline CropWindow center_window(std::size_t src_rows, std::size_t src_cols, std::size_t rows, std::size_t cols) {
  if (rows > src_rows || cols > src_cols || rows == 0 || cols == 0)
    throw DimensionError("center window " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not fit in " + std::to_string(src_rows) + "x" + std::to_string(src_cols));
  return {(src_rows - rows) / 2, (src_cols - cols) / 2, rows, cols};
}

// Bayer mosaic without range restrictions. Fingerprints reverted to the raw
// domain carry signed values, so the resizers operate on this type and
// RawFrame adds the sensor invariants on top.
struct Mosaic {
  PlaneD samples;
  BayerPattern pattern = BayerPattern::RGGB;

  std::size_t rows() const { return samples.rows(); }
  std::size_t cols() const { return samples.cols(); }
};

// Raw sensor output: linear intensities in [0, 1] behind a colour filter
// array, optionally surrounded by an active boundary.
class RawFrame {
 public:
  RawFrame(PlaneD samples, BayerPattern pattern, Margins boundary = {})
      : mosaic_{std::move(samples), pattern}, boundary_(boundary) {
    const std::size_t m = mosaic_.rows(), n = mosaic_.cols();
    if (m < 4 || n < 4 || m % 2 || n % 2)
      throw DimensionError("raw frame dimensions must be even and at least 4, got " + std::to_string(m) + "x" +
                           std::to_string(n));
    for (double v : mosaic_.samples.values())
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw ValidationError("raw samples must be finite and in [0,1]");
    if (2 * boundary_.top >= m || 2 * boundary_.bottom >= m || 2 * boundary_.left >= n || 2 * boundary_.right >= n)
      throw ValidationError("boundary margins must be smaller than half the frame");
  }

  std::size_t rows() const { return mosaic_.rows(); }
  std::size_t cols() const { return mosaic_.cols(); }
  BayerPattern pattern() const { return mosaic_.pattern; }
  const Margins& boundary() const { return boundary_; }
  const PlaneD& samples() const { return mosaic_.samples; }
  const Mosaic& mosaic() const { return mosaic_; }
  double operator()(std::size_t r, std::size_t c) const { return mosaic_.samples(r, c); }

  CropWindow active_region() const {
    return {boundary_.top, boundary_.left, rows() - boundary_.top - boundary_.bottom,
            cols() - boundary_.left - boundary_.right};
  }

 private:
  Mosaic mosaic_;
  Margins boundary_;
};

class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t rows, std::size_t cols, double fill = 0.0)
      : planes_{PlaneD(rows, cols, fill), PlaneD(rows, cols, fill), PlaneD(rows, cols, fill)} {}
  explicit RgbImage(std::array<PlaneD, 3> planes) : planes_(std::move(planes)) {
    if (!planes_[0].same_shape(planes_[1]) || !planes_[0].same_shape(planes_[2]))
      throw DimensionError("RGB planes must share dimensions");
    for (const auto& p : planes_)
      if (!all_finite(p)) throw ValidationError("RGB values must be finite");
  }

  std::size_t rows() const { return planes_[0].rows(); }
  std::size_t cols() const { return planes_[0].cols(); }
  PlaneD& plane(Channel c) { return planes_[static_cast<std::size_t>(c)]; }
  const PlaneD& plane(Channel c) const { return planes_[static_cast<std::size_t>(c)]; }
  std::array<PlaneD, 3>& planes() { return planes_; }
  const std::array<PlaneD, 3>& planes() const { return planes_; }

 private:
  std::array<PlaneD, 3> planes_;
};

}  // namespace prnu
