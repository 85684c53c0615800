#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prnu_mixed/error.hpp"
#include "prnu_mixed/rational.hpp"

namespace prnu {

// Pixel dimensions of a piece of media. r1 is the in-camera factor that
// took the sensor's active image to this resolution, when known.
struct MediaDims {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::optional<Rational> r1;

  MediaDims() = default;
  MediaDims(std::size_t r, std::size_t c, std::optional<Rational> factor = std::nullopt)
      : rows(r), cols(c), r1(factor) {
    validate();
  }

  void validate() const {
    if (rows < 16 || cols < 16)
      throw DimensionError("media dims " + std::to_string(rows) + "x" + std::to_string(cols) + " below 16");
    if (r1 && (*r1 <= Rational(0) || *r1 > Rational(1)))
      throw ValidationError("in-camera factor r1 must lie in (0, 1], got " + to_string(*r1));
  }

  double aspect() const { return static_cast<double>(cols) / static_cast<double>(rows); }
};

inline constexpr double kAspectTolerance = 1e-3;
inline constexpr double kDefaultMaxCropRatio = 1.6;

enum class AspectCase { same_aspect, diff_aspect };

inline std::string to_string(AspectCase c) { return c == AspectCase::same_aspect ? "same-aspect" : "diff-aspect"; }

struct SearchRange {
  Rational lo;
  Rational hi;
  AspectCase kind = AspectCase::same_aspect;
  MediaDims video;
  MediaDims image;

  bool empty() const { return lo > hi; }
  bool contains(const Rational& f) const { return !empty() && f >= lo && f <= hi; }
};

inline bool same_aspect(double a, double b) { return std::abs(a - b) <= kAspectTolerance * std::max(a, b); }

// Minimum possible r1 when the image was produced by in-camera downsizing
// of a known full-resolution active image.
inline Rational minimum_r1(const MediaDims& image, const MediaDims& full_res) {
  const Rational r = std::min(Rational(static_cast<std::int64_t>(image.rows), static_cast<std::int64_t>(full_res.rows)),
                              Rational(static_cast<std::int64_t>(image.cols), static_cast<std::int64_t>(full_res.cols)));
  if (r > Rational(1)) throw ValidationError("image larger than the stated full resolution");
  return r;
}

// Range of factors by which the image must be scaled to cover the video.
// sensor_aspect is cols/rows of the active image; without it the image is
// assumed uncropped (same aspect as the sensor).
inline SearchRange search_range(const MediaDims& video, const MediaDims& image,
                                std::optional<double> sensor_aspect = std::nullopt) {
  video.validate();
  image.validate();
  const Rational r1 = image.r1.value_or(Rational(1));
  const Rational a(static_cast<std::int64_t>(video.rows), static_cast<std::int64_t>(image.rows));
  const Rational b(static_cast<std::int64_t>(video.cols), static_cast<std::int64_t>(image.cols));
  SearchRange out;
  out.video = video;
  out.image = image;
  out.kind = !sensor_aspect || same_aspect(image.aspect(), *sensor_aspect) ? AspectCase::same_aspect
                                                                          : AspectCase::diff_aspect;
  out.lo = out.kind == AspectCase::same_aspect ? std::max(a, b) : std::min(a, b);
  out.hi = Rational(1) / r1;
  return out;
}

// min over axes of scaled / video; 1 means no crop.
inline double cropping_ratio(std::size_t scaled_rows, std::size_t scaled_cols, std::size_t video_rows,
                             std::size_t video_cols) {
  if (scaled_rows == 0 || scaled_cols == 0 || video_rows == 0 || video_cols == 0)
    throw DimensionError("cropping ratio of empty dims");
  return std::min(static_cast<double>(scaled_rows) / static_cast<double>(video_rows),
                  static_cast<double>(scaled_cols) / static_cast<double>(video_cols));
}

// Dimensions produced by scaling `n` samples by f.
inline std::size_t scaled_extent(std::size_t n, const Rational& f) {
  return static_cast<std::size_t>(floor_of(f * Rational(static_cast<std::int64_t>(n))));
}

struct ScheduledFactor {
  Rational factor;
  double crop_ratio = 1.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

// Lattice 1/(1 + 0.005 i) below one and (1 + 0.005 i) above, restricted to
// [lo, hi], ascending.
inline std::vector<Rational> factor_lattice(const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  if (lo > hi || lo <= Rational(0)) return out;
  for (std::int64_t i = 0;; ++i) {
    const Rational f(200, 200 + i);
    if (f < lo) break;
    if (f <= hi) out.push_back(f);
  }
  for (std::int64_t i = 1;; ++i) {
    const Rational f(200 + i, 200);
    if (f > hi) break;
    if (f >= lo) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Distance from "no crop" used to filter and order: ratios below one count
// by their reciprocal, so raising the cutoff only ever appends.
inline double crop_distance(double ratio) { return ratio >= 1.0 ? ratio : 1.0 / ratio; }

// Ordered factors to try. The cropping ratio is measured against
// `ratio_reference` when given (the uncropped video dims), else against
// range.video. Pass max_crop_ratio = infinity for an exhaustive schedule.
inline std::vector<ScheduledFactor> hypothesis_schedule(const SearchRange& range,
                                                        double max_crop_ratio = kDefaultMaxCropRatio,
                                                        std::optional<MediaDims> ratio_reference = std::nullopt) {
  std::vector<ScheduledFactor> out;
  if (range.empty()) return out;
  const MediaDims& ref = ratio_reference ? *ratio_reference : range.video;
  for (const Rational& f : factor_lattice(range.lo, range.hi)) {
    ScheduledFactor s{f, 0.0, scaled_extent(range.image.rows, f), scaled_extent(range.image.cols, f)};
    if (s.rows == 0 || s.cols == 0) continue;
    s.crop_ratio = cropping_ratio(s.rows, s.cols, ref.rows, ref.cols);
    if (crop_distance(s.crop_ratio) <= max_crop_ratio) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const ScheduledFactor& a, const ScheduledFactor& b) {
    const double da = crop_distance(a.crop_ratio), db = crop_distance(b.crop_ratio);
    if (da != db) return da < db;
    return a.factor < b.factor;
  });
  return out;
}

inline std::vector<ScheduledFactor> exhaustive_schedule(const SearchRange& range,
                                                        std::optional<MediaDims> ratio_reference = std::nullopt) {
  return hypothesis_schedule(range, std::numeric_limits<double>::infinity(), ratio_reference);
}

}  // namespace prnu
