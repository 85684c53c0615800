#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <span>
#include <string_view>

#include "prnu_mixed/pipeline.hpp"
#include "prnu_mixed/weight_map.hpp"

namespace prnu {

template <typename W>
void check_normalized(std::span<const WeightEntry<W>> ws) {
  W sum(0);
  for (const auto& e : ws) {
    if (e.weight < W(0)) throw ValidationError("negative weight");
    sum += e.weight;
  }
  if constexpr (is_exact_weight_v<W>) {
    if (sum != W(1)) throw ValidationError("weights sum to " + to_string(sum) + ", not 1");
  } else {
    if (std::abs(weight_to_double(sum) - 1.0) > 1e-9) throw ValidationError("weights do not sum to 1");
  }
}

// Overlap of two weight lists over the same raw sites: the sum over shared
// sites of the smaller weight. Both lists must be sorted by source.
template <typename W>
W pixel_alignment(std::span<const WeightEntry<W>> a, std::span<const WeightEntry<W>> b) {
  check_normalized(a);
  check_normalized(b);
  W s(0);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].source < b[j].source) {
      ++i;
    } else if (b[j].source < a[i].source) {
      ++j;
    } else {
      s += std::min(a[i].weight, b[j].weight);
      ++i;
      ++j;
    }
  }
  // Float weights may sum to 1 + ulp.
  if constexpr (!is_exact_weight_v<W>) s = std::min(s, W(1));
  return s;
}

template <typename W>
W pixel_alignment(const std::vector<WeightEntry<W>>& a, const std::vector<WeightEntry<W>>& b) {
  return pixel_alignment<W>(std::span<const WeightEntry<W>>(a), std::span<const WeightEntry<W>>(b));
}

template <typename W>
struct RoaReport {
  W red{0};
  W green{0};
  W blue{0};
  W combined{0};

  W plane(Channel c) const { return c == Channel::R ? red : c == Channel::G ? green : blue; }
};

template <typename W>
W combine_planes(const W& r, const W& g, const W& b) {
  if constexpr (is_exact_weight_v<W>) {
    return Rational(3, 10) * r + Rational(6, 10) * g + Rational(1, 10) * b;
  } else {
    return W(kChannelWeights[0]) * r + W(kChannelWeights[1]) * g + W(kChannelWeights[2]) * b;
  }
}

// Pixels nearer than this to the output border are skipped so that edge
// padding never enters the comparison.
inline constexpr std::size_t kRoaBorder = 2;

template <typename W>
void check_comparable(const WeightMap<W>& a, const WeightMap<W>& b, std::size_t border) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionError("roa: output dimensions differ (" + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + ")");
  if (a.source_rows != b.source_rows || a.source_cols != b.source_cols)
    throw DimensionError("roa: pipelines start from different sensors");
  if (a.rows <= 2 * border || a.cols <= 2 * border) throw DimensionError("roa: no interior pixels");
}

template <typename W>
W plane_alignment(const WeightMap<W>& a, const WeightMap<W>& b, Channel ch, std::size_t border = kRoaBorder) {
  check_comparable(a, b, border);
  W sum(0);
  std::int64_t n = 0;
  for (std::size_t r = border; r + border < a.rows; ++r)
    for (std::size_t c = border; c + border < a.cols; ++c) {
      sum += pixel_alignment<W>(a.weights(r, c, ch), b.weights(r, c, ch));
      ++n;
    }
  if constexpr (is_exact_weight_v<W>) {
    return sum / Rational(n);
  } else {
    return sum / static_cast<W>(n);
  }
}

template <typename W>
RoaReport<W> roa(const WeightMap<W>& a, const WeightMap<W>& b, std::size_t border = kRoaBorder) {
  RoaReport<W> rep;
  rep.red = plane_alignment(a, b, Channel::R, border);
  rep.green = plane_alignment(a, b, Channel::G, border);
  rep.blue = plane_alignment(a, b, Channel::B, border);
  rep.combined = combine_planes(rep.red, rep.green, rep.blue);
  return rep;
}

// Parity case of an output pixel (0-based indices): 1 = (even, even),
// 2 = (even, odd), 3 = (odd, even), 4 = (odd, odd).
constexpr int parity_case(std::size_t r, std::size_t c) { return 1 + static_cast<int>((r & 1U) * 2 + (c & 1U)); }

// Mean alignment of one plane restricted to each parity case.
template <typename W>
std::array<W, 4> case_alignments(const WeightMap<W>& a, const WeightMap<W>& b, Channel ch,
                                 std::size_t border = kRoaBorder) {
  check_comparable(a, b, border);
  std::array<W, 4> sum{W(0), W(0), W(0), W(0)};
  std::array<std::int64_t, 4> n{};
  for (std::size_t r = border; r + border < a.rows; ++r)
    for (std::size_t c = border; c + border < a.cols; ++c) {
      const int k = parity_case(r, c) - 1;
      sum[k] += pixel_alignment<W>(a.weights(r, c, ch), b.weights(r, c, ch));
      ++n[k];
    }
  for (int k = 0; k < 4; ++k) {
    if constexpr (is_exact_weight_v<W>) {
      sum[k] = n[k] ? sum[k] / Rational(n[k]) : W(0);
    } else {
      sum[k] = n[k] ? sum[k] / static_cast<W>(n[k]) : W(0);
    }
  }
  return sum;
}

template <typename W = Rational>
RoaReport<W> roa(std::string_view spec_a, std::string_view spec_b, std::size_t rows, std::size_t cols,
                 BayerPattern pattern = BayerPattern::RGGB) {
  return roa(compose_pipeline<W>(rows, cols, pattern, pipeline_from_spec(spec_a)),
             compose_pipeline<W>(rows, cols, pattern, pipeline_from_spec(spec_b)));
}

// Published closed-form values (two decimals) for half-size resizing, and
// for k x k binning against 1/k bilinear scaling.
struct AnalyticRoaTable {
  std::array<std::string_view, 3> techniques{"bscale", "bin", "lskip"};
  std::array<std::array<double, 3>, 3> matrix{};
  struct BinVsBilinear {
    int k;
    double actual;
    double maximum;
  };
  std::array<BinVsBilinear, 3> bin_vs_bilinear{};

  // Index of a technique name, or -1.
  int index_of(std::string_view name) const {
    for (int i = 0; i < 3; ++i)
      if (techniques[static_cast<std::size_t>(i)] == name) return i;
    return -1;
  }
};

constexpr AnalyticRoaTable analytic_roa_table() {
  AnalyticRoaTable t;
  t.matrix = {{{1.00, 0.46, 0.17}, {0.46, 1.00, 0.21}, {0.17, 0.21, 1.00}}};
  t.bin_vs_bilinear = {{{2, 0.46, 0.53}, {3, 0.22, 0.31}, {4, 0.14, 0.25}}};
  return t;
}

// Tabulated value for a pair of pipeline shorthands, if there is one.
// Accepts "bscale"/"bin"/"lskip" pairs and "bin:K" against "bscale:K".
inline std::optional<double> analytic_roa(std::string_view a, std::string_view b) {
  constexpr auto t = analytic_roa_table();
  const int i = t.index_of(a), j = t.index_of(b);
  if (i >= 0 && j >= 0) return t.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  for (const auto& e : t.bin_vs_bilinear) {
    const std::string bin = "bin:" + std::to_string(e.k), bs = "bscale:" + std::to_string(e.k);
    if ((a == bin && b == bs) || (a == bs && b == bin)) return e.actual;
  }
  return std::nullopt;
}

}  // namespace prnu
