#include <gtest/gtest.h>

#include "prnu_mixed/demosaic.hpp"
#include "prnu_mixed/resize.hpp"
#include "support.hpp"

using namespace prnu;
namespace ts = testing_support;

namespace {

ts::oracle::Weights to_oracle(const WeightMap<Rational>& m, std::size_t r, std::size_t c, Channel ch) {
  ts::oracle::Weights w;
  for (const auto& e : m.weights(r, c, ch)) {
    const auto [sr, sc] = m.site(e.source);
    w[{static_cast<long>(sr), static_cast<long>(sc)}] = to_double(e.weight);
  }
  return w;
}

constexpr std::array<BayerPattern, 4> kPatterns = {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG,
                                                   BayerPattern::GBRG};

}  // namespace

TEST(Demosaic, OutputMatchesInputDims) {
  const auto raw = ts::random_raw(8, 12, BayerPattern::RGGB, 1);
  const RgbImage img = demosaic_bilinear(raw);
  EXPECT_EQ(img.rows(), 8u);
  EXPECT_EQ(img.cols(), 12u);
}

TEST(Demosaic, RejectsTinyMosaic) {
  EXPECT_THROW(demosaic_bilinear(Mosaic{PlaneD(2, 8), BayerPattern::RGGB}), DimensionError);
}

TEST(Demosaic, RedCaseOneIsCoSitedSample) {
  const auto raw = ts::random_raw(8, 8, BayerPattern::RGGB, 2);
  const RgbImage img = demosaic_bilinear(raw);
  EXPECT_EQ(img.plane(Channel::R)(2, 2), raw(2, 2));
  const auto m = demosaic_weight_map(8, 8, BayerPattern::RGGB);
  const auto w = m.weights(2, 2, Channel::R);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].weight, Rational(1));
}

TEST(Demosaic, RedCaseFourAveragesDiagonals) {
  const auto m = demosaic_weight_map(8, 8, BayerPattern::RGGB);
  const auto w = m.weights(3, 3, Channel::R);
  ASSERT_EQ(w.size(), 4u);
  for (const auto& e : w) EXPECT_EQ(e.weight, Rational(1, 4));
  std::vector<std::pair<std::size_t, std::size_t>> sites;
  for (const auto& e : w) sites.push_back(m.site(e.source));
  EXPECT_EQ(sites, (std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {2, 4}, {4, 2}, {4, 4}}));
}

TEST(Demosaic, GreenCaseOneHasFourQuarterContributors) {
  const auto m = demosaic_weight_map(8, 8, BayerPattern::RGGB);
  const auto w = m.weights(2, 2, Channel::G);
  ASSERT_EQ(w.size(), 4u);
  for (const auto& e : w) EXPECT_EQ(e.weight, Rational(1, 4));
}

TEST(Demosaic, ConstantFramePreserved) {
  for (BayerPattern p : kPatterns) {
    const RawFrame raw(PlaneD(10, 12, 0.37), p);
    const RgbImage img = demosaic_bilinear(raw);
    for (Channel ch : kChannels)
      for (double v : img.plane(ch).values()) EXPECT_NEAR(v, 0.37, 1e-15);
  }
}

TEST(Demosaic, WeightMapReproducesConcreteOutputExactly) {
  for (BayerPattern p : kPatterns) {
    const auto raw = ts::random_raw(8, 8, p, 3 + static_cast<int>(p));
    const RgbImage direct = demosaic_bilinear(raw);
    const RgbImage mapped = demosaic_weight_map<double>(8, 8, p).apply(raw);
    for (Channel ch : kChannels) EXPECT_EQ(max_abs_diff(direct.plane(ch), mapped.plane(ch)), 0.0);
  }
}

TEST(Demosaic, WeightsSumToOneEverywhere) {
  for (BayerPattern p : kPatterns) {
    const auto m = demosaic_weight_map(10, 14, p);
    for (std::size_t i = 0; i < m.map.rows(); ++i) EXPECT_EQ(m.map.row_sum(i), Rational(1));
  }
}

TEST(Demosaic, InteriorWeightsMatchKernelOracle) {
  for (BayerPattern p : kPatterns) {
    const auto m = demosaic_weight_map(12, 12, p);
    for (std::size_t r = 1; r + 1 < 12; ++r)
      for (std::size_t c = 1; c + 1 < 12; ++c)
        for (Channel ch : kChannels)
          EXPECT_EQ(to_oracle(m, r, c, ch),
                    ts::oracle::demosaic(p, {}, static_cast<long>(r), static_cast<long>(c), ch));
  }
}

TEST(Demosaic, EveryPixelFallsInExactlyOneParityCase) {
  // Red weight-list sizes identify the case: 1, 2, 2, 4 sites.
  const auto m = demosaic_weight_map(12, 12, BayerPattern::RGGB);
  for (std::size_t r = 1; r + 1 < 12; ++r)
    for (std::size_t c = 1; c + 1 < 12; ++c) {
      const std::size_t n = m.weights(r, c, Channel::R).size();
      const std::size_t expected = (r % 2 == 0 && c % 2 == 0) ? 1 : (r % 2 == 1 && c % 2 == 1) ? 4 : 2;
      EXPECT_EQ(n, expected) << r << "," << c;
    }
}

TEST(Demosaic, PatternEquivalenceUnderOnePixelShift) {
  // A BGGR frame is the RGGB frame seen from site (1,1).
  const auto big = ts::random_raw(14, 14, BayerPattern::RGGB, 9);
  const Mosaic sub{crop(big.samples(), CropWindow{1, 1, 12, 12}), BayerPattern::BGGR};
  const RgbImage a = demosaic_bilinear(big);
  const RgbImage b = demosaic_bilinear(sub);
  for (Channel ch : kChannels)
    for (std::size_t r = 1; r + 1 < 12; ++r)
      for (std::size_t c = 1; c + 1 < 12; ++c) EXPECT_DOUBLE_EQ(b.plane(ch)(r, c), a.plane(ch)(r + 1, c + 1));
}

TEST(Demosaic, EdgesUseMirrorPadding) {
  // Row 0 of an RGGB frame: the red value at a G site (0,1) is the mean of
  // its horizontal neighbours; at B-row edges mirroring reuses row 1.
  const auto raw = ts::random_raw(8, 8, BayerPattern::RGGB, 4);
  const RgbImage img = demosaic_bilinear(raw);
  EXPECT_NEAR(img.plane(Channel::R)(0, 1), 0.5 * (raw(0, 0) + raw(0, 2)), 1e-15);
  EXPECT_NEAR(img.plane(Channel::B)(0, 0), raw(1, 1), 1e-15);
}
