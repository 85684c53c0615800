#include <gtest/gtest.h>

#include <array>

#include "prnu_mixed/bayer.hpp"
#include "prnu_mixed/frame.hpp"
#include "support.hpp"

using namespace prnu;

namespace {
constexpr std::array<BayerPattern, 4> kPatterns = {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG,
                                                   BayerPattern::GBRG};
}

TEST(ColorAt, OneBasedExamples) {
  EXPECT_EQ(color_at(BayerPattern::RGGB, 1, 1), Channel::R);
  EXPECT_EQ(color_at(BayerPattern::RGGB, 2, 2), Channel::B);
  EXPECT_EQ(color_at(BayerPattern::BGGR, 1, 1), Channel::B);
  EXPECT_EQ(color_at(BayerPattern::RGGB, 1, 2), Channel::G);
  EXPECT_EQ(color_at(BayerPattern::RGGB, 2, 1), Channel::G);
}

TEST(ColorAt, ZeroIndexRejected) { EXPECT_THROW(color_at(BayerPattern::RGGB, 0, 1), ValidationError); }

TEST(BayerPatternInvariants, EveryCellHasOneRedOneBlueTwoGreen) {
  for (BayerPattern p : kPatterns)
    for (std::size_t r0 = 0; r0 < 6; ++r0)
      for (std::size_t c0 = 0; c0 < 6; ++c0) {
        std::array<int, 3> n{};
        for (std::size_t dr = 0; dr < 2; ++dr)
          for (std::size_t dc = 0; dc < 2; ++dc) ++n[static_cast<std::size_t>(channel_at(p, r0 + dr, c0 + dc))];
        EXPECT_EQ(n[0], 1);
        EXPECT_EQ(n[1], 2);
        EXPECT_EQ(n[2], 1);
      }
}

TEST(BayerPatternInvariants, PeriodTwo) {
  for (BayerPattern p : kPatterns)
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) {
        EXPECT_EQ(channel_at(p, r, c), channel_at(p, r + 2, c));
        EXPECT_EQ(channel_at(p, r, c), channel_at(p, r, c + 2));
      }
}

TEST(BayerPatternInvariants, ShiftedMatchesOffsetLookup) {
  for (BayerPattern p : kPatterns)
    for (std::size_t dr = 0; dr < 2; ++dr)
      for (std::size_t dc = 0; dc < 2; ++dc) {
        const BayerPattern q = shifted(p, dr, dc);
        for (std::size_t r = 0; r < 4; ++r)
          for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(channel_at(q, r, c), channel_at(p, r + dr, c + dc));
      }
}

TEST(BayerPatternNames, RoundTrip) {
  for (BayerPattern p : kPatterns) EXPECT_EQ(parse_bayer_pattern(to_string(p)), p);
  EXPECT_THROW(parse_bayer_pattern("RGBG"), ValidationError);
}

TEST(RawFrame, RejectsOddOrTinyDims) {
  EXPECT_THROW(RawFrame(PlaneD(5, 8), BayerPattern::RGGB), DimensionError);
  EXPECT_THROW(RawFrame(PlaneD(2, 8), BayerPattern::RGGB), DimensionError);
  EXPECT_NO_THROW(RawFrame(PlaneD(4, 4), BayerPattern::RGGB));
}

TEST(RawFrame, RejectsOutOfRangeSamples) {
  PlaneD p(4, 4, 0.5);
  p(1, 1) = 1.5;
  EXPECT_THROW(RawFrame(p, BayerPattern::RGGB), ValidationError);
  p(1, 1) = std::nan("");
  EXPECT_THROW(RawFrame(p, BayerPattern::RGGB), ValidationError);
}

TEST(RawFrame, BoundaryMarginsBelowHalf) {
  EXPECT_THROW(RawFrame(PlaneD(8, 8), BayerPattern::RGGB, Margins{4, 0, 0, 0}), ValidationError);
  const RawFrame f(PlaneD(12, 16), BayerPattern::RGGB, Margins{2, 2, 4, 4});
  EXPECT_EQ(f.active_region(), (CropWindow{2, 4, 8, 8}));
}

TEST(RgbImage, PlanesMustShareShape) {
  EXPECT_THROW(RgbImage(std::array<PlaneD, 3>{PlaneD(4, 4), PlaneD(4, 4), PlaneD(4, 5)}), DimensionError);
}

TEST(CenterWindow, CentresAndRejectsOversize) {
  EXPECT_EQ(center_window(10, 20, 4, 6), (CropWindow{3, 7, 4, 6}));
  EXPECT_THROW(center_window(10, 20, 11, 6), DimensionError);
}
