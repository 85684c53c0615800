#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prnu_mixed/bayer.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/linear_map.hpp"
#include "prnu_mixed/rational.hpp"

namespace prnu {

// bilinear: separable two-tap resampling with src = (dst + 0.5)/factor - 0.5.
// box2x2: for factor 1/k, each output averages demosaiced pixels i0 and
// i0 + 1 along each axis, i0 = floor(k*dst + (k-1)/2). Identical to
// `bilinear` for k = 2 and 4; at k = 3 it reads pixels 3d+1 and 3d+2.
enum class ScaleKernel : std::uint8_t { bilinear, box2x2 };

inline std::string to_string(ScaleKernel k) { return k == ScaleKernel::bilinear ? "bilinear" : "box2x2"; }

struct BinPhase {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const BinPhase&, const BinPhase&) = default;
};

// Which two of every four rows (and columns) survive. Variant v keeps
// offsets kLineSkipPairs[v] within each group of four; variant 0 keeps the
// first two and drops the third and fourth.
struct LineSkipPhase {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t index() const { return row * 4 + col; }
  static LineSkipPhase from_index(std::size_t i) { return {i / 4, i % 4}; }
  friend bool operator==(const LineSkipPhase&, const LineSkipPhase&) = default;
};

inline constexpr std::array<std::array<std::size_t, 2>, 4> kLineSkipPairs = {{{0, 1}, {1, 2}, {2, 3}, {0, 3}}};

namespace detail {

struct AxisTap {
  std::uint32_t i0 = 0;
  std::uint32_t i1 = 0;
  Rational t{0};  // weight of i1; i0 gets 1 - t
};

inline std::size_t scaled_length(std::size_t n, const Rational& factor) {
  return static_cast<std::size_t>(floor_of(factor * Rational(static_cast<std::int64_t>(n))));
}

inline void check_factor(const Rational& factor, const Rational& max_factor) {
  if (factor <= Rational(0) || factor > max_factor)
    throw ValidationError("scale factor " + to_string(factor) + " out of range (0, " + to_string(max_factor) + "]");
}

inline std::vector<AxisTap> axis_taps(std::size_t n, const Rational& factor, ScaleKernel kernel) {
  const std::size_t out_n = scaled_length(n, factor);
  if (out_n == 0) throw DimensionError("scale factor " + to_string(factor) + " collapses an axis of " + std::to_string(n));
  std::vector<AxisTap> taps(out_n);
  if (kernel == ScaleKernel::box2x2) {
    if (factor.numerator() != 1 || factor.denominator() < 2)
      throw ValidationError("box2x2 kernel needs a factor 1/k with k >= 2");
    const std::int64_t k = factor.denominator();
    for (std::size_t d = 0; d < out_n; ++d) {
      auto i0 = static_cast<std::uint32_t>(floor_of(Rational(k - 1 + 2 * k * static_cast<std::int64_t>(d), 2)));
      taps[d] = {i0, static_cast<std::uint32_t>(std::min<std::size_t>(i0 + 1, n - 1)), Rational(1, 2)};
    }
    return taps;
  }
  for (std::size_t d = 0; d < out_n; ++d) {
    Rational s = Rational(2 * static_cast<std::int64_t>(d) + 1, 2) / factor - Rational(1, 2);
    if (s <= Rational(0)) {
      taps[d] = {0, 0, Rational(0)};
      continue;
    }
    std::int64_t i0 = floor_of(s);
    if (i0 >= static_cast<std::int64_t>(n) - 1) {
      taps[d] = {static_cast<std::uint32_t>(n - 1), static_cast<std::uint32_t>(n - 1), Rational(0)};
      continue;
    }
    taps[d] = {static_cast<std::uint32_t>(i0), static_cast<std::uint32_t>(i0 + 1), s - Rational(i0)};
  }
  return taps;
}

inline PlaneD apply_axis_taps(const PlaneD& in, const std::vector<AxisTap>& vt, const std::vector<AxisTap>& ht) {
  const std::size_t out_r = vt.size(), out_c = ht.size();
  std::vector<double> hw(out_c);
  for (std::size_t j = 0; j < out_c; ++j) hw[j] = to_double(ht[j].t);
  PlaneD tmp(in.rows(), out_c);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const double* src = in.data() + r * in.cols();
    double* dst = tmp.data() + r * out_c;
    for (std::size_t j = 0; j < out_c; ++j) dst[j] = (1.0 - hw[j]) * src[ht[j].i0] + hw[j] * src[ht[j].i1];
  }
  PlaneD out(out_r, out_c);
  for (std::size_t i = 0; i < out_r; ++i) {
    const double t = to_double(vt[i].t);
    const double* a = tmp.data() + vt[i].i0 * out_c;
    const double* b = tmp.data() + vt[i].i1 * out_c;
    double* dst = out.data() + i * out_c;
    for (std::size_t j = 0; j < out_c; ++j) dst[j] = (1.0 - t) * a[j] + t * b[j];
  }
  return out;
}

inline void check_bin(std::size_t rows, std::size_t cols, int k, BinPhase phase) {
  if (k < 2 || k > 4) throw ValidationError("binning factor must be 2, 3 or 4");
  if (phase.row >= static_cast<std::size_t>(k) || phase.col >= static_cast<std::size_t>(k))
    throw ValidationError("binning phase must be smaller than k");
  const auto block = static_cast<std::size_t>(2 * k);
  if (rows % block || cols % block)
    throw DimensionError("binning by " + std::to_string(k) + " needs dimensions divisible by " + std::to_string(block));
}

// A phase shifts the same-colour grouping by 2*phase raw sites; a trailing
// incomplete group is dropped.
inline std::size_t binned_length(std::size_t n, int k, std::size_t phase) {
  return 2 * ((n - 2 * phase) / (2 * static_cast<std::size_t>(k)));
}

inline std::size_t bin_source(std::size_t out, int k, std::size_t phase, std::size_t a) {
  return 2 * phase + (out / 2) * 2 * static_cast<std::size_t>(k) + (out & 1U) + 2 * a;
}

inline void check_line_skip(std::size_t rows, std::size_t cols, LineSkipPhase phase) {
  if (phase.row > 3 || phase.col > 3) throw ValidationError("line-skip variant must be 0..3");
  if (rows % 4 || cols % 4) throw DimensionError("line skipping needs dimensions divisible by 4");
}

inline std::size_t line_skip_source(std::size_t out, std::size_t variant) {
  return (out / 2) * 4 + kLineSkipPairs[variant][out & 1U];
}

}  // namespace detail

// ---- concrete transforms ---------------------------------------------------

// General-purpose resampling of a single plane; factors above one upsample.
inline PlaneD scale_plane(const PlaneD& in, const Rational& factor, ScaleKernel kernel = ScaleKernel::bilinear) {
  detail::check_factor(factor, Rational(16));
  if (factor == Rational(1)) return in;
  return detail::apply_axis_taps(in, detail::axis_taps(in.rows(), factor, kernel),
                                 detail::axis_taps(in.cols(), factor, kernel));
}

inline RgbImage bilinear_scale(const RgbImage& img, const Rational& factor, ScaleKernel kernel = ScaleKernel::bilinear) {
  detail::check_factor(factor, Rational(1));
  if (factor == Rational(1)) return img;
  auto vt = detail::axis_taps(img.rows(), factor, kernel);
  auto ht = detail::axis_taps(img.cols(), factor, kernel);
  RgbImage out;
  for (Channel ch : kChannels) out.planes()[static_cast<std::size_t>(ch)] = detail::apply_axis_taps(img.plane(ch), vt, ht);
  return out;
}

inline Mosaic bin(const Mosaic& raw, int k, BinPhase phase = {}) {
  detail::check_bin(raw.rows(), raw.cols(), k, phase);
  const std::size_t out_r = detail::binned_length(raw.rows(), k, phase.row);
  const std::size_t out_c = detail::binned_length(raw.cols(), k, phase.col);
  if (out_r == 0 || out_c == 0) throw DimensionError("binning leaves an empty frame");
  PlaneD out(out_r, out_c);
  const double inv = 1.0 / (k * k);
  for (std::size_t i = 0; i < out_r; ++i)
    for (std::size_t j = 0; j < out_c; ++j) {
      double acc = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          acc += raw.samples(detail::bin_source(i, k, phase.row, a), detail::bin_source(j, k, phase.col, b));
      out(i, j) = acc * inv;
    }
  return {std::move(out), raw.pattern};
}

inline RawFrame bin(const RawFrame& raw, int k, BinPhase phase = {}) {
  return RawFrame(bin(raw.mosaic(), k, phase).samples, raw.pattern());
}

inline Mosaic line_skip(const Mosaic& raw, LineSkipPhase phase = {}) {
  detail::check_line_skip(raw.rows(), raw.cols(), phase);
  const std::size_t out_r = raw.rows() / 2, out_c = raw.cols() / 2;
  PlaneD out(out_r, out_c);
  for (std::size_t i = 0; i < out_r; ++i) {
    const std::size_t sr = detail::line_skip_source(i, phase.row);
    for (std::size_t j = 0; j < out_c; ++j) out(i, j) = raw.samples(sr, detail::line_skip_source(j, phase.col));
  }
  const BayerPattern p =
      shifted(raw.pattern, detail::line_skip_source(0, phase.row), detail::line_skip_source(0, phase.col));
  return {std::move(out), p};
}

inline RawFrame line_skip(const RawFrame& raw, LineSkipPhase phase = {}) {
  Mosaic m = line_skip(raw.mosaic(), phase);
  return RawFrame(std::move(m.samples), m.pattern);
}

inline PlaneD crop(const PlaneD& in, const CropWindow& w) {
  if (!w.fits(in.rows(), in.cols())) throw DimensionError("crop window does not fit");
  PlaneD out(w.rows, w.cols);
  for (std::size_t r = 0; r < w.rows; ++r)
    std::copy_n(in.data() + (w.top + r) * in.cols() + w.left, w.cols, out.data() + r * w.cols);
  return out;
}

inline RgbImage crop(const RgbImage& in, const CropWindow& w) {
  RgbImage out;
  for (Channel ch : kChannels) out.planes()[static_cast<std::size_t>(ch)] = crop(in.plane(ch), w);
  return out;
}

inline Mosaic crop(const Mosaic& in, const CropWindow& w) {
  return {crop(in.samples, w), shifted(in.pattern, w.top, w.left)};
}

// Removes `rows` lines at the top and bottom and, when asked, enough columns
// on each side to keep the aspect ratio.
inline CropWindow boundary_window(std::size_t height, std::size_t width, std::size_t rows, bool preserve_aspect) {
  const std::size_t cols = preserve_aspect
                               ? static_cast<std::size_t>(std::llround(static_cast<double>(rows) * width / height))
                               : 0;
  if (2 * rows >= height || 2 * cols >= width)
    throw DimensionError("boundary crop of " + std::to_string(rows) + " rows exceeds a " + std::to_string(height) + "x" +
                         std::to_string(width) + " frame");
  return {rows, cols, height - 2 * rows, width - 2 * cols};
}

inline PlaneD crop_boundary(const PlaneD& img, std::size_t rows, bool preserve_aspect = true) {
  return crop(img, boundary_window(img.rows(), img.cols(), rows, preserve_aspect));
}

inline RgbImage crop_boundary(const RgbImage& img, std::size_t rows, bool preserve_aspect = true) {
  return crop(img, boundary_window(img.rows(), img.cols(), rows, preserve_aspect));
}

// ---- symbolic transforms ---------------------------------------------------
// Mosaic layouts are indexed r*cols + c; RGB layouts stack three planes.

template <typename W>
LinearMap<W> bin_map(std::size_t rows, std::size_t cols, int k, BinPhase phase) {
  detail::check_bin(rows, cols, k, phase);
  const std::size_t out_r = detail::binned_length(rows, k, phase.row);
  const std::size_t out_c = detail::binned_length(cols, k, phase.col);
  LinearMap<W> m(rows * cols);
  std::vector<WeightEntry<W>> scratch;
  const W w = weight_cast<W>(Rational(1, k * k));
  for (std::size_t i = 0; i < out_r; ++i)
    for (std::size_t j = 0; j < out_c; ++j) {
      scratch.clear();
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          scratch.push_back({static_cast<std::uint32_t>(detail::bin_source(i, k, phase.row, a) * cols +
                                                        detail::bin_source(j, k, phase.col, b)),
                             w});
      m.push_row(scratch);
    }
  return m;
}

template <typename W>
LinearMap<W> line_skip_map(std::size_t rows, std::size_t cols, LineSkipPhase phase) {
  detail::check_line_skip(rows, cols, phase);
  LinearMap<W> m(rows * cols);
  std::vector<WeightEntry<W>> scratch;
  for (std::size_t i = 0; i < rows / 2; ++i)
    for (std::size_t j = 0; j < cols / 2; ++j) {
      scratch.assign(1, {static_cast<std::uint32_t>(detail::line_skip_source(i, phase.row) * cols +
                                                    detail::line_skip_source(j, phase.col)),
                         W(1)});
      m.push_row(scratch);
    }
  return m;
}

template <typename W>
LinearMap<W> crop_map(std::size_t rows, std::size_t cols, std::size_t planes, const CropWindow& w) {
  if (!w.fits(rows, cols)) throw DimensionError("crop window does not fit");
  LinearMap<W> m(planes * rows * cols);
  std::vector<WeightEntry<W>> scratch;
  for (std::size_t p = 0; p < planes; ++p)
    for (std::size_t r = 0; r < w.rows; ++r)
      for (std::size_t c = 0; c < w.cols; ++c) {
        scratch.assign(1, {static_cast<std::uint32_t>(p * rows * cols + (w.top + r) * cols + w.left + c), W(1)});
        m.push_row(scratch);
      }
  return m;
}

template <typename W>
LinearMap<W> scale_map(std::size_t rows, std::size_t cols, const Rational& factor, ScaleKernel kernel) {
  detail::check_factor(factor, Rational(1));
  if (factor == Rational(1)) return LinearMap<W>::identity(3 * rows * cols);
  auto vt = detail::axis_taps(rows, factor, kernel);
  auto ht = detail::axis_taps(cols, factor, kernel);
  LinearMap<W> m(3 * rows * cols);
  std::vector<WeightEntry<W>> scratch;
  for (std::size_t p = 0; p < 3; ++p)
    for (const auto& v : vt)
      for (const auto& h : ht) {
        scratch.clear();
        const std::array<std::pair<std::uint32_t, Rational>, 2> vw = {{{v.i0, 1 - v.t}, {v.i1, v.t}}};
        const std::array<std::pair<std::uint32_t, Rational>, 2> hw = {{{h.i0, 1 - h.t}, {h.i1, h.t}}};
        for (const auto& [vi, vwt] : vw)
          for (const auto& [hi, hwt] : hw)
            scratch.push_back({static_cast<std::uint32_t>(p * rows * cols + vi * cols + hi), weight_cast<W>(vwt * hwt)});
        m.push_row(scratch);
      }
  return m;
}

}  // namespace prnu
