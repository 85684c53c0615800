#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "prnu_mixed/bayer.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/weight_map.hpp"

namespace prnu {

namespace detail {

// Bilinear demosaicing applied to zero-filled colour planes:
//   R, B: 1/4 [1 2 1; 2 4 2; 1 2 1]     G: 1/4 [0 1 0; 1 4 1; 0 1 0]
// Weights are stored in quarters.
inline constexpr int kKernelRb[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
inline constexpr int kKernelG[3][3] = {{0, 1, 0}, {1, 4, 1}, {0, 1, 0}};

struct Tap {
  std::uint32_t source;
  std::uint8_t quarters;
};

using Stencil = std::array<Tap, 9>;

// Whole-sample mirror (-1 -> 1, n -> n-2). Unlike edge replication it keeps
// the colour parity of the reflected site.
inline std::size_t mirror_index(std::ptrdiff_t i, std::size_t n) {
  if (i < 0) return static_cast<std::size_t>(-i);
  if (i >= static_cast<std::ptrdiff_t>(n)) return 2 * n - 2 - static_cast<std::size_t>(i);
  return static_cast<std::size_t>(i);
}

// Sorted, duplicate-merged taps for output (r, c, ch). Returns the count.
inline std::size_t demosaic_stencil(std::size_t rows, std::size_t cols, BayerPattern p, std::size_t r,
                                    std::size_t c, Channel ch, Stencil& out) {
  const auto& k = ch == Channel::G ? kKernelG : kKernelRb;
  std::size_t n = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      int q = k[dr + 1][dc + 1];
      if (q == 0) continue;
      std::size_t sr = mirror_index(static_cast<std::ptrdiff_t>(r) + dr, rows);
      std::size_t sc = mirror_index(static_cast<std::ptrdiff_t>(c) + dc, cols);
      if (channel_at(p, sr, sc) != ch) continue;
      auto src = static_cast<std::uint32_t>(sr * cols + sc);
      std::size_t pos = n;
      while (pos > 0 && out[pos - 1].source > src) --pos;
      if (pos > 0 && out[pos - 1].source == src) {
        out[pos - 1].quarters = static_cast<std::uint8_t>(out[pos - 1].quarters + q);
        continue;
      }
      for (std::size_t j = n; j > pos; --j) out[j] = out[j - 1];
      out[pos] = {src, static_cast<std::uint8_t>(q)};
      ++n;
    }
  }
  return n;
}

// Translation-invariant interior stencils, one per (row parity, col parity,
// channel), with source offsets relative to the output pixel.
struct RelativeTap {
  int dr, dc;
  std::uint8_t quarters;
};
struct InteriorStencil {
  std::array<RelativeTap, 9> taps;
  std::size_t count = 0;
};

inline std::array<InteriorStencil, 12> interior_stencils(BayerPattern p) {
  std::array<InteriorStencil, 12> result{};
  for (std::size_t pr = 0; pr < 2; ++pr)
    for (std::size_t pc = 0; pc < 2; ++pc)
      for (Channel ch : kChannels) {
        auto& s = result[(pr * 2 + pc) * 3 + static_cast<std::size_t>(ch)];
        const auto& k = ch == Channel::G ? kKernelG : kKernelRb;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            int q = k[dr + 1][dc + 1];
            // +2 keeps the parity arithmetic unsigned.
            if (q == 0 || channel_at(p, pr + 2 + dr, pc + 2 + dc) != ch) continue;
            s.taps[s.count++] = {dr, dc, static_cast<std::uint8_t>(q)};
          }
      }
  return result;
}

}  // namespace detail

inline RgbImage demosaic_bilinear(const Mosaic& raw) {
  const std::size_t rows = raw.rows(), cols = raw.cols();
  if (rows < 4 || cols < 4) throw DimensionError("demosaic: frame smaller than 4x4");
  RgbImage out(rows, cols);
  const auto interior = detail::interior_stencils(raw.pattern);
  const double* x = raw.samples.data();
  detail::Stencil st;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool edge_row = r == 0 || r + 1 == rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const bool edge = edge_row || c == 0 || c + 1 == cols;
      for (Channel ch : kChannels) {
        double acc = 0.0;
        if (edge) {
          std::size_t n = detail::demosaic_stencil(rows, cols, raw.pattern, r, c, ch, st);
          for (std::size_t i = 0; i < n; ++i) acc += (st[i].quarters * 0.25) * x[st[i].source];
        } else {
          const auto& s = interior[((r & 1) * 2 + (c & 1)) * 3 + static_cast<std::size_t>(ch)];
          for (std::size_t i = 0; i < s.count; ++i) {
            const auto& t = s.taps[i];
            acc += (t.quarters * 0.25) * x[(r + t.dr) * cols + (c + t.dc)];
          }
        }
        out.plane(ch)(r, c) = acc;
      }
    }
  }
  return out;
}

inline RgbImage demosaic_bilinear(const RawFrame& raw) { return demosaic_bilinear(raw.mosaic()); }

// Symbolic form of demosaic_bilinear on an arbitrary mosaic layout:
// rows*cols mosaic values -> 3 stacked planes.
template <typename W>
LinearMap<W> demosaic_map(std::size_t rows, std::size_t cols, BayerPattern p) {
  if (rows < 4 || cols < 4) throw DimensionError("demosaic: frame smaller than 4x4");
  LinearMap<W> m(rows * cols);
  std::vector<WeightEntry<W>> scratch;
  detail::Stencil st;
  for (Channel ch : kChannels)
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        std::size_t n = detail::demosaic_stencil(rows, cols, p, r, c, ch, st);
        scratch.clear();
        for (std::size_t i = 0; i < n; ++i) scratch.push_back({st[i].source, weight_cast<W>(Rational(st[i].quarters, 4))});
        m.push_row(scratch);
      }
  return m;
}

template <typename W = Rational>
WeightMap<W> demosaic_weight_map(std::size_t rows, std::size_t cols, BayerPattern p) {
  if (rows % 2 || cols % 2) throw DimensionError("demosaic_weight_map: dimensions must be even");
  return {rows, cols, rows, cols, demosaic_map<W>(rows, cols, p)};
}

}  // namespace prnu
