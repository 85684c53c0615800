#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/linear_map.hpp"

namespace prnu {

// End-to-end map from raw sensor sites (row-major over source_rows x
// source_cols) to the three colour planes of an output image. Output index
// of (r, c, ch) is ch*rows*cols + r*cols + c.
template <typename W>
struct WeightMap {
  std::size_t source_rows = 0;
  std::size_t source_cols = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  LinearMap<W> map;

  std::size_t index(std::size_t r, std::size_t c, Channel ch) const {
    return static_cast<std::size_t>(ch) * rows * cols + r * cols + c;
  }

  std::span<const WeightEntry<W>> weights(std::size_t r, std::size_t c, Channel ch) const {
    return map.row(index(r, c, ch));
  }

  // Source (row, col) of a raw index.
  std::pair<std::size_t, std::size_t> site(std::uint32_t source) const {
    return {source / source_cols, source % source_cols};
  }

  RgbImage apply(const PlaneD& samples) const {
    if (samples.rows() != source_rows || samples.cols() != source_cols)
      throw DimensionError("weight map applied to a frame of the wrong size");
    std::vector<double> out(3 * rows * cols);
    map.apply(samples.values(), out);
    RgbImage img(rows, cols);
    for (Channel ch : kChannels) {
      auto& p = img.plane(ch);
      std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(index(0, 0, ch)), rows * cols, p.data());
    }
    return img;
  }
  RgbImage apply(const RawFrame& raw) const { return apply(raw.samples()); }
};

}  // namespace prnu
