#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/image_io.hpp"
#include "prnu_mixed/pipeline.hpp"
#include "prnu_mixed/plane.hpp"

namespace prnu {

// splitmix64 finaliser; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_seed(master);
  for (std::uint64_t p : path) s = mix_seed(s ^ mix_seed(p + 0x632BE59BD9B4E019ULL));
  return s;
}

namespace detail {

inline std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double s = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    s += v;
  }
  for (double& v : k) v /= s;
  return k;
}

}  // namespace detail

// Separable Gaussian blur with mirrored edges.
inline PlaneD gaussian_blur(const PlaneD& in, double sigma) {
  if (sigma <= 0.0) return in;
  const auto k = detail::gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);
  const std::size_t rows = in.rows(), cols = in.cols();
  auto mirror = [](std::ptrdiff_t i, std::size_t n) {
    const auto N = static_cast<std::ptrdiff_t>(n);
    if (N == 1) return std::size_t{0};
    const std::ptrdiff_t period = 2 * N - 2;
    i = ((i % period) + period) % period;
    return static_cast<std::size_t>(i < N ? i : period - i);
  };
  PlaneD tmp(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::ptrdiff_t d = -radius; d <= radius; ++d)
        s += k[static_cast<std::size_t>(d + radius)] * in(r, mirror(static_cast<std::ptrdiff_t>(c) + d, cols));
      tmp(r, c) = s;
    }
  PlaneD out(rows, cols);
  for (std::ptrdiff_t d = -radius; d <= radius; ++d) {
    const double w = k[static_cast<std::size_t>(d + radius)];
    for (std::size_t r = 0; r < rows; ++r) {
      const double* src = tmp.data() + mirror(static_cast<std::ptrdiff_t>(r) + d, rows) * cols;
      double* dst = out.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

// A simulated sensor: active image of the nominal resolution, an optional
// active boundary around it, and a PRNU factor X for every site.
class SyntheticCamera {
 public:
  SyntheticCamera(std::size_t active_rows, std::size_t active_cols, double sigma_x, std::uint64_t seed,
                  BayerPattern pattern = BayerPattern::RGGB, Margins boundary = {})
      : active_rows_(active_rows), active_cols_(active_cols), boundary_(boundary), pattern_(pattern),
        sigma_x_(sigma_x), seed_(seed) {
    if (active_rows < 4 || active_cols < 4 || active_rows % 2 || active_cols % 2)
      throw DimensionError("active image dims must be even and at least 4");
    if (boundary.top % 2 || boundary.left % 2 || boundary.bottom % 2 || boundary.right % 2)
      throw ValidationError("boundary margins must be even to keep the Bayer phase");
    if (!(sigma_x >= 0.0) || !std::isfinite(sigma_x)) throw ValidationError("sigma_x must be finite and >= 0");
    prnu_ = PlaneD(sensor_rows(), sensor_cols());
    std::mt19937_64 rng(derive_seed(seed, {0x5052}));
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& v : prnu_.values()) v = sigma_x * n(rng);
    const double m = mean(prnu_);
    for (double& v : prnu_.values()) v -= m;
  }

  std::size_t active_rows() const { return active_rows_; }
  std::size_t active_cols() const { return active_cols_; }
  std::size_t sensor_rows() const { return active_rows_ + boundary_.top + boundary_.bottom; }
  std::size_t sensor_cols() const { return active_cols_ + boundary_.left + boundary_.right; }
  const Margins& boundary() const { return boundary_; }
  bool has_boundary() const { return !(boundary_ == Margins{}); }
  BayerPattern pattern() const { return pattern_; }
  double sigma_x() const { return sigma_x_; }
  std::uint64_t seed() const { return seed_; }
  const PlaneD& prnu() const { return prnu_; }

  CropWindow active_window() const { return {boundary_.top, boundary_.left, active_rows_, active_cols_}; }

 private:
  std::size_t active_rows_, active_cols_;
  Margins boundary_;
  BayerPattern pattern_;
  double sigma_x_;
  std::uint64_t seed_;
  PlaneD prnu_;
};

enum class ContentKind { flat, textured, image_file };

struct ContentSpec {
  ContentKind kind = ContentKind::textured;
  double level = 0.5;  // flat grey level
  std::filesystem::path path;
};

struct CaptureProfile {
  Pipeline pipeline = named_pipeline("identity");
  double sigma_psi = 0.01;
  ContentSpec content;
  // Read out the whole sensor (video modes on boundary-pixel cameras)
  // instead of only the active image.
  bool use_boundary = false;
  // Multiplies sigma_psi; models per-still quality spread.
  double quality = 1.0;
};

namespace detail {

// Scene radiance per raw site, before PRNU and read noise.
inline PlaneD render_content(const ContentSpec& spec, std::size_t rows, std::size_t cols, BayerPattern pattern,
                             std::mt19937_64& rng) {
  PlaneD out(rows, cols);
  switch (spec.kind) {
    case ContentKind::flat:
      std::fill(out.values().begin(), out.values().end(), spec.level);
      return out;
    case ContentKind::textured: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double mu = 0.15 + 0.7 * u(rng);
      const double sigma = 2.0 + 6.0 * u(rng);
      const double amp = 0.02 + 0.13 * u(rng);
      std::array<double, 3> gain{};
      for (double& g : gain) g = 0.7 + 0.3 * u(rng);
      PlaneD field(rows, cols);
      std::normal_distribution<double> n(0.0, 1.0);
      for (double& v : field.values()) v = n(rng);
      field = gaussian_blur(field, sigma);
      const double m = mean(field);
      double var = 0.0;
      for (double v : field.values()) var += (v - m) * (v - m);
      const double sd = std::sqrt(var / static_cast<double>(field.size()));
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          const double base = mu + amp * (field(r, c) - m) / (sd > 0.0 ? sd : 1.0);
          out(r, c) = std::clamp(gain[static_cast<std::size_t>(channel_at(pattern, r, c))] * base, 0.02, 1.0);
        }
      return out;
    }
    case ContentKind::image_file: {
      const RgbImage img = read_image(spec.path);
      if (img.rows() < rows || img.cols() < cols)
        throw DimensionError("content image " + spec.path.string() + " smaller than the sensor region");
      const CropWindow w = center_window(img.rows(), img.cols(), rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
          out(r, c) = std::clamp(img.plane(channel_at(pattern, r, c))(w.top + r, w.left + c), 0.0, 1.0);
      return out;
    }
  }
  return out;
}

}  // namespace detail

// Raw readout I = clip(I0 (1 + X) + psi) of the active image, or of the
// whole sensor when the profile uses the boundary.
inline RawFrame capture_raw(const SyntheticCamera& cam, const CaptureProfile& profile, std::uint64_t seed) {
  const CropWindow region = profile.use_boundary ? CropWindow{0, 0, cam.sensor_rows(), cam.sensor_cols()}
                                                 : cam.active_window();
  const BayerPattern pattern = shifted(cam.pattern(), region.top, region.left);
  std::mt19937_64 rng(derive_seed(cam.seed(), {0x43415054, seed}));
  PlaneD raw = detail::render_content(profile.content, region.rows, region.cols, pattern, rng);
  const double sd = profile.sigma_psi * profile.quality;
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t r = 0; r < region.rows; ++r)
    for (std::size_t c = 0; c < region.cols; ++c) {
      double v = raw(r, c) * (1.0 + cam.prnu()(region.top + r, region.left + c));
      if (sd > 0.0) v += sd * n(rng);
      raw(r, c) = std::clamp(v, 0.0, 1.0);
    }
  Margins m;
  if (profile.use_boundary) m = cam.boundary();
  return RawFrame(std::move(raw), pattern, m);
}

inline RgbImage capture(const SyntheticCamera& cam, const CaptureProfile& profile, std::uint64_t seed) {
  return run_pipeline(capture_raw(cam, profile, seed), profile.pipeline);
}

}  // namespace prnu
