#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <locale>
#include <memory>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prnu_mixed/error.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/plane.hpp"

namespace prnu {

namespace detail {

// Mean over a (2r+1)^2 window with mirrored edges.
inline PlaneD box_mean(const PlaneD& in, std::size_t radius) {
  const std::size_t rows = in.rows(), cols = in.cols();
  if (radius == 0) return in;
  if (rows <= radius || cols <= radius) throw DimensionError("box filter larger than the image");
  auto idx = [](std::ptrdiff_t i, std::size_t n) -> std::size_t {
    if (i < 0) return static_cast<std::size_t>(-i);
    if (i >= static_cast<std::ptrdiff_t>(n)) return 2 * n - 2 - static_cast<std::size_t>(i);
    return static_cast<std::size_t>(i);
  };
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const double norm = 1.0 / static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  PlaneD tmp(rows, cols);
  for (std::size_t y = 0; y < rows; ++y) {
    const double* src = in.data() + y * cols;
    for (std::size_t x = 0; x < cols; ++x) {
      double s = 0.0;
      for (std::ptrdiff_t d = -r; d <= r; ++d) s += src[idx(static_cast<std::ptrdiff_t>(x) + d, cols)];
      tmp(y, x) = s;
    }
  }
  PlaneD out(rows, cols);
  for (std::size_t y = 0; y < rows; ++y)
    for (std::ptrdiff_t d = -r; d <= r; ++d) {
      const double* src = tmp.data() + idx(static_cast<std::ptrdiff_t>(y) + d, rows) * cols;
      double* dst = out.data() + y * cols;
      for (std::size_t x = 0; x < cols; ++x) dst[x] += src[x];
    }
  for (double& v : out.values()) v *= norm;
  return out;
}

}  // namespace detail

// Produces the noise-free estimate of a single plane; the residual
// (input - estimate) carries the sensor pattern.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual PlaneD denoise(const PlaneD& in) const = 0;
  virtual std::string id() const = 0;
};

class LocalMeanDenoiser final : public Denoiser {
 public:
  explicit LocalMeanDenoiser(std::size_t radius = 1) : radius_(radius) {}
  PlaneD denoise(const PlaneD& in) const override { return detail::box_mean(in, radius_); }
  std::string id() const override { return "local-mean-r" + std::to_string(radius_); }

 private:
  std::size_t radius_;
};

// Local adaptive Wiener filter: keeps the part of the local variance that
// exceeds the assumed noise variance.
class WienerDenoiser final : public Denoiser {
 public:
  explicit WienerDenoiser(std::size_t radius = 1, double noise_variance = 1e-4)
      : radius_(radius), noise_variance_(noise_variance) {}
  PlaneD denoise(const PlaneD& in) const override {
    PlaneD mu = detail::box_mean(in, radius_);
    PlaneD sq(in.rows(), in.cols());
    for (std::size_t i = 0; i < in.size(); ++i) sq.values()[i] = in.values()[i] * in.values()[i];
    PlaneD mu2 = detail::box_mean(sq, radius_);
    PlaneD out(in.rows(), in.cols());
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double m = mu.values()[i];
      const double var = std::max(mu2.values()[i] - m * m, 0.0);
      const double gain = var > noise_variance_ ? (var - noise_variance_) / var : 0.0;
      out.values()[i] = m + gain * (in.values()[i] - m);
    }
    return out;
  }
  std::string id() const override {
    std::ostringstream v;
    v.imbue(std::locale::classic());
    v << noise_variance_;
    return "wiener-r" + std::to_string(radius_) + "-v" + v.str();
  }

 private:
  std::size_t radius_;
  double noise_variance_;
};

// "local-mean" (3x3) or "wiener" (3x3, noise variance 1e-4).
inline std::unique_ptr<Denoiser> make_denoiser(std::string_view name) {
  if (name == "local-mean") return std::make_unique<LocalMeanDenoiser>(1);
  if (name == "wiener") return std::make_unique<WienerDenoiser>(1, 1e-4);
  throw ValidationError("unknown denoiser '" + std::string(name) + "'");
}

enum class SourceKind : std::uint8_t { image, video_frame };

struct NoisePattern {
  PlaneD plane;
  SourceKind source = SourceKind::image;
  std::size_t count = 1;
  bool low_quality = false;
};

struct ExtractOptions {
  // Subtract per-row and per-column means (linear pattern suppression).
  bool remove_linear_pattern = true;
};

inline void remove_linear_pattern(PlaneD& p) {
  const std::size_t rows = p.rows(), cols = p.cols();
  const double m = mean(p);
  for (double& v : p.values()) v -= m;
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (double v : p.row(r)) s += v;
    s /= static_cast<double>(cols);
    for (double& v : p.row(r)) v -= s;
  }
  std::vector<double> col(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) col[c] += p(r, c);
  for (double& v : col) v /= static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) p(r, c) -= col[c];
}

inline NoisePattern extract_noise(const RgbImage& img, const Denoiser& denoiser, SourceKind source = SourceKind::image,
                                  ExtractOptions opts = {}) {
  PlaneD combined(img.rows(), img.cols());
  for (Channel ch : kChannels) {
    const PlaneD& in = img.plane(ch);
    PlaneD smooth = denoiser.denoise(in);
    const double w = kChannelWeights[static_cast<std::size_t>(ch)];
    for (std::size_t i = 0; i < in.size(); ++i) combined.values()[i] += w * (in.values()[i] - smooth.values()[i]);
  }
  if (opts.remove_linear_pattern) {
    remove_linear_pattern(combined);
  } else {
    const double m = mean(combined);
    for (double& v : combined.values()) v -= m;
  }
  double energy = 0.0;
  for (double v : combined.values()) energy += v * v;
  NoisePattern out{std::move(combined), source, 1, false};
  out.low_quality = energy <= 1e-20 * static_cast<double>(out.plane.size());
  return out;
}

inline NoisePattern extract_noise(const RgbImage& img, SourceKind source = SourceKind::image, ExtractOptions opts = {}) {
  return extract_noise(img, WienerDenoiser{}, source, opts);
}

enum class Provenance : std::uint8_t { image_fe = 0, video_fe = 1 };

inline std::string to_string(Provenance p) { return p == Provenance::image_fe ? "image FE" : "video FE"; }

struct Fingerprint {
  PlaneD plane;
  std::size_t count = 1;
  Provenance provenance = Provenance::image_fe;
  std::string denoiser_id = WienerDenoiser{}.id();

  std::size_t rows() const { return plane.rows(); }
  std::size_t cols() const { return plane.cols(); }
};

// Running per-pixel mean. Partial accumulators over disjoint pattern sets
// merge to the same result regardless of grouping.
class FingerprintAccumulator {
 public:
  FingerprintAccumulator(std::size_t rows, std::size_t cols) : sum_(rows, cols) {}

  void add(const NoisePattern& p) { add_weighted(p.plane, p.count); }
  void add(const Fingerprint& f) { add_weighted(f.plane, f.count); }
  void merge(const FingerprintAccumulator& o) {
    if (!sum_.same_shape(o.sum_)) throw DimensionError("fingerprint accumulators differ in size");
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_.values()[i] += o.sum_.values()[i];
    count_ += o.count_;
  }

  std::size_t count() const { return count_; }

  Fingerprint result(Provenance provenance, std::string denoiser_id = WienerDenoiser{}.id()) const {
    if (count_ == 0) throw ValidationError("fingerprint from an empty set of noise patterns");
    PlaneD mean_plane(sum_.rows(), sum_.cols());
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t i = 0; i < sum_.size(); ++i) mean_plane.values()[i] = sum_.values()[i] * inv;
    return {std::move(mean_plane), count_, provenance, std::move(denoiser_id)};
  }

 private:
  void add_weighted(const PlaneD& p, std::size_t n) {
    if (!p.same_shape(sum_))
      throw DimensionError("noise pattern " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
                           " does not match fingerprint " + std::to_string(sum_.rows()) + "x" +
                           std::to_string(sum_.cols()));
    const auto w = static_cast<double>(n);
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_.values()[i] += w * p.values()[i];
    count_ += n;
  }

  PlaneD sum_;
  std::size_t count_ = 0;
};

inline Fingerprint accumulate_fingerprint(std::span<const NoisePattern> patterns,
                                          Provenance provenance = Provenance::image_fe,
                                          std::string denoiser_id = WienerDenoiser{}.id()) {
  if (patterns.empty()) throw ValidationError("fingerprint from an empty set of noise patterns");
  FingerprintAccumulator acc(patterns.front().plane.rows(), patterns.front().plane.cols());
  for (const auto& p : patterns) acc.add(p);
  return acc.result(provenance, std::move(denoiser_id));
}

// Pearson correlation coefficient of two same-sized planes.
inline double pearson(const PlaneD& a, const PlaneD& b) {
  if (!a.same_shape(b)) throw DimensionError("pearson: shape mismatch");
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.values()[i] - ma, y = b.values()[i] - mb;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  if (saa <= 0.0 || sbb <= 0.0) throw CorrelationError("pearson: zero-variance input");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace prnu
