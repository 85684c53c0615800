#pragma once

// Shared fixtures and a brute-force weight oracle written from the textbook
// definitions of each resizer, independent of the library's symbolic maps.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>

#include "prnu_mixed/bayer.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/plane.hpp"

namespace testing_support {

inline prnu::PlaneD random_plane(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                                 double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  prnu::PlaneD p(rows, cols);
  for (double& v : p.values()) v = u(rng);
  return p;
}

inline prnu::PlaneD gaussian_plane(std::size_t rows, std::size_t cols, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sd);
  prnu::PlaneD p(rows, cols);
  for (double& v : p.values()) v = n(rng);
  return p;
}

inline prnu::RawFrame random_raw(std::size_t rows, std::size_t cols, prnu::BayerPattern p, std::uint64_t seed) {
  return prnu::RawFrame(random_plane(rows, cols, seed), p);
}

namespace oracle {

using Site = std::pair<long, long>;
using Weights = std::map<Site, double>;

inline void add(Weights& acc, const Weights& w, double scale) {
  for (const auto& [s, v] : w) acc[s] += scale * v;
}

// Raw sites feeding one sample of an intermediate mosaic.
struct MosaicSource {
  enum Kind { raw, binned, skipped } kind = raw;
  int k = 2;

  Weights operator()(long i, long j) const {
    Weights w;
    switch (kind) {
      case raw:
        w[{i, j}] = 1.0;
        break;
      case binned:
        // k x k same-colour sites inside a 2k x 2k block
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            w[{(i / 2) * 2 * k + (i % 2) + 2 * a, (j / 2) * 2 * k + (j % 2) + 2 * b}] = 1.0 / (k * k);
        break;
      case skipped:
        // keep lines 0 and 1 of every 4
        w[{(i / 2) * 4 + (i % 2), (j / 2) * 4 + (j % 2)}] = 1.0;
        break;
    }
    return w;
  }
};

// Bilinear demosaic of an interior mosaic sample: the 3x3 kernels applied
// to the zero-filled colour plane.
inline Weights demosaic(prnu::BayerPattern p, const MosaicSource& src, long r, long c, prnu::Channel ch) {
  static const double rb[3][3] = {{.25, .5, .25}, {.5, 1, .5}, {.25, .5, .25}};
  static const double g[3][3] = {{0, .25, 0}, {.25, 1, .25}, {0, .25, 0}};
  const auto& kern = ch == prnu::Channel::G ? g : rb;
  Weights w;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      const long rr = r + dr, cc = c + dc;
      if (prnu::channel_at(p, static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) != ch) continue;
      const double k = kern[dr + 1][dc + 1];
      if (k != 0.0) add(w, src(rr, cc), k);
    }
  return w;
}

// Named half-size (or 1/k) pipelines; output pixel must be interior.
inline Weights pipeline(const std::string& name, prnu::BayerPattern p, long r, long c, prnu::Channel ch) {
  if (name == "identity") return demosaic(p, {MosaicSource::raw}, r, c, ch);
  if (name == "bin") return demosaic(p, {MosaicSource::binned, 2}, r, c, ch);
  if (name == "bin:3") return demosaic(p, {MosaicSource::binned, 3}, r, c, ch);
  if (name == "bin:4") return demosaic(p, {MosaicSource::binned, 4}, r, c, ch);
  if (name == "lskip") return demosaic(p, {MosaicSource::skipped}, r, c, ch);
  int k = 2;
  if (name == "bscale:3") k = 3;
  else if (name == "bscale:4") k = 4;
  else if (name != "bscale") throw std::invalid_argument(name);
  // two taps per axis at k*d + (k-1)/2 rounded down and the next pixel
  const long r0 = (2 * k * r + k - 1) / 2, c0 = (2 * k * c + k - 1) / 2;
  Weights w;
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b) add(w, demosaic(p, {MosaicSource::raw}, r0 + a, c0 + b, ch), 0.25);
  return w;
}

inline double alignment(const Weights& a, const Weights& b) {
  double s = 0.0;
  for (const auto& [site, wa] : a)
    if (auto it = b.find(site); it != b.end()) s += std::min(wa, it->second);
  return s;
}

// Mean per-plane alignment over output pixels at least `border` from the edge.
inline std::array<double, 3> roa(const std::string& a, const std::string& b, prnu::BayerPattern p, long out_rows,
                                 long out_cols, long border = 2) {
  std::array<double, 3> out{};
  for (prnu::Channel ch : prnu::kChannels) {
    double s = 0.0;
    long n = 0;
    for (long r = border; r + border < out_rows; ++r)
      for (long c = border; c + border < out_cols; ++c) {
        s += alignment(pipeline(a, p, r, c, ch), pipeline(b, p, r, c, ch));
        ++n;
      }
    out[static_cast<std::size_t>(ch)] = s / static_cast<double>(n);
  }
  return out;
}

}  // namespace oracle
}  // namespace testing_support
