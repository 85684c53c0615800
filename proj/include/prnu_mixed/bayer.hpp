#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "prnu_mixed/error.hpp"

namespace prnu {

enum class Channel : std::uint8_t { R = 0, G = 1, B = 2 };

inline constexpr std::array<Channel, 3> kChannels = {Channel::R, Channel::G, Channel::B};

// Luma-like weights used both for combining per-channel noise residuals and
// for combining per-plane alignment ratios.
inline constexpr std::array<double, 3> kChannelWeights = {0.3, 0.6, 0.1};

enum class BayerPattern : std::uint8_t { RGGB = 0, BGGR = 1, GRBG = 2, GBRG = 3 };

namespace detail {
// Top-left 2x2 cell of each pattern, row-major.
inline constexpr std::array<std::array<Channel, 4>, 4> kBayerCells = {{
    {Channel::R, Channel::G, Channel::G, Channel::B},
    {Channel::B, Channel::G, Channel::G, Channel::R},
    {Channel::G, Channel::R, Channel::B, Channel::G},
    {Channel::G, Channel::B, Channel::R, Channel::G},
}};
}  // namespace detail

// Zero-based lookup used by all internal code.
constexpr Channel channel_at(BayerPattern p, std::size_t row, std::size_t col) {
  return detail::kBayerCells[static_cast<std::size_t>(p)][(row & 1U) * 2 + (col & 1U)];
}

// One-based lookup: for RGGB, (odd, odd) is red and (even, even) is blue.
inline Channel color_at(BayerPattern p, std::size_t row, std::size_t col) {
  if (row < 1 || col < 1) throw ValidationError("color_at: indices are 1-based");
  return channel_at(p, row - 1, col - 1);
}

// Pattern seen by a sub-mosaic whose first sample is source site (row, col).
constexpr BayerPattern shifted(BayerPattern p, std::size_t row, std::size_t col) {
  for (std::uint8_t v = 0; v < 4; ++v) {
    auto q = static_cast<BayerPattern>(v);
    if (channel_at(q, 0, 0) == channel_at(p, row, col) && channel_at(q, 0, 1) == channel_at(p, row, col + 1))
      return q;
  }
  return p;  // unreachable for valid patterns
}

inline std::string to_string(BayerPattern p) {
  constexpr std::array<std::string_view, 4> names = {"RGGB", "BGGR", "GRBG", "GBRG"};
  return std::string(names[static_cast<std::size_t>(p)]);
}

inline char to_char(Channel c) {
  constexpr std::array<char, 3> names = {'R', 'G', 'B'};
  return names[static_cast<std::size_t>(c)];
}

inline BayerPattern parse_bayer_pattern(std::string_view s) {
  for (std::uint8_t v = 0; v < 4; ++v) {
    auto p = static_cast<BayerPattern>(v);
    if (to_string(p) == s) return p;
  }
  throw ValidationError("unknown Bayer pattern '" + std::string(s) + "'");
}

}  // namespace prnu
