#include <gtest/gtest.h>

#include <iostream>

#include "prnu_mixed/experiment.hpp"
#include "prnu_mixed/matcher.hpp"

using namespace prnu;

namespace {

// Small cameras; the 16:9 video band of a 192x256 sensor is 144x256, 72x128
// after half-size resizing, so the true factor is exactly 1/2.
struct Scene {
  SyntheticCamera a{192, 256, 0.03, derive_seed(0, {1})};
  SyntheticCamera b{192, 256, 0.03, derive_seed(0, {2})};
  Fingerprint image_a = build_fingerprint(a, CaptureProfile{}, {12, 1.0}, derive_seed(0, {3}), Provenance::image_fe);

  Fingerprint video(const SyntheticCamera& cam, VideoTechnique t, std::uint64_t seed) const {
    VideoMode m;
    m.technique = t;
    CaptureProfile vp;
    vp.pipeline = video_pipeline(cam.active_rows(), cam.active_cols(), m);
    return build_fingerprint(cam, vp, {16, 1.0}, derive_seed(0, {4, seed}), Provenance::video_fe);
  }
};

const Scene& scene() {
  static const Scene s;
  return s;
}

MatchConfig small_config() {
  MatchConfig c;
  c.boundary_rows = 6;
  return c;
}

Rational distance_from_half(const Rational& f) { return f > Rational(1, 2) ? f - Rational(1, 2) : Rational(1, 2) - f; }

// Bilinear schedule the matcher builds for a 72x128 video against the image.
std::size_t bilinear_schedule_size() {
  const CropWindow w = boundary_window(72, 128, 6, true);
  const SearchRange range = search_range(MediaDims(w.rows, w.cols), MediaDims(192, 256));
  return hypothesis_schedule(range, 1.6, MediaDims(72, 128)).size();
}

}  // namespace

TEST(Matcher, BilinearHalfSizeMatchesNearHalf) {
  const auto& s = scene();
  const auto r = attribute(s.image_a, s.video(s.a, VideoTechnique::bscale, 0), small_config());
  EXPECT_EQ(r.decision, Decision::match);
  ASSERT_TRUE(r.winning);
  EXPECT_EQ(r.winning->technique, ResizeTechnique::bilinear);
  // Lattice steps near 1/2 are about 1/800.
  EXPECT_LE(distance_from_half(r.winning->factor), Rational(1, 800));
  EXPECT_GT(r.best_pce, 60.0);
  EXPECT_FALSE(r.incompatible_dims);
}

TEST(Matcher, BinningOnlySearchFindsTheReadoutPhase) {
  const auto& s = scene();
  MatchConfig c = small_config();
  c.techniques = {ResizeTechnique::binning};
  const auto r = attribute(s.image_a, s.video(s.a, VideoTechnique::bin00, 1), c);
  EXPECT_EQ(r.decision, Decision::match);
  ASSERT_TRUE(r.winning);
  EXPECT_EQ(r.winning->technique, ResizeTechnique::binning);
  EXPECT_EQ(r.winning->phase.row, 0u);
  EXPECT_EQ(r.winning->phase.col, 0u);
  EXPECT_EQ(r.winning->k, 2);
  EXPECT_EQ(r.winning->factor, Rational(1, 2));
}

TEST(Matcher, BinningRunsOnlyAfterBilinearFails) {
  const auto& s = scene();
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const Fingerprint v = s.video(s.a, VideoTechnique::bin00, seed);
    const auto full = attribute(s.image_a, v, small_config());
    const auto high = attribute_with_strategy(s.image_a, v, FeQuality::high, small_config());
    EXPECT_EQ(full.decision, Decision::match) << seed;
    ASSERT_TRUE(full.winning);
    EXPECT_TRUE(!high.winning || high.winning->technique == ResizeTechnique::bilinear);
    if (full.winning->technique == ResizeTechnique::binning) {
      // Fallback: the whole bilinear schedule was exhausted first.
      EXPECT_EQ(high.decision, Decision::no_match) << seed;
      EXPECT_EQ(high.hypotheses_tried, bilinear_schedule_size());
      EXPECT_GT(full.hypotheses_tried, bilinear_schedule_size());
    } else {
      EXPECT_EQ(high.best_pce, full.best_pce) << seed;
      EXPECT_EQ(high.hypotheses_tried, full.hypotheses_tried);
    }
  }
}

TEST(Matcher, CorrectPhaseDominatesOtherPhases) {
  const auto& s = scene();
  const Fingerprint v = s.video(s.a, VideoTechnique::bin11, 2);
  const Matcher m(small_config());
  double best = 0.0;
  std::size_t best_phase = 99;
  for (std::size_t pr = 0; pr < 2; ++pr)
    for (std::size_t pc = 0; pc < 2; ++pc) {
      const double p = m.evaluate(s.image_a, v, {ResizeTechnique::binning, Rational(1, 2), 2, {pr, pc}, std::nullopt}).pce;
      if (p > best) best = p, best_phase = pr * 2 + pc;
    }
  EXPECT_EQ(best_phase, 3u);
}

TEST(Matcher, DifferentCameraTriesEverythingAndRejects) {
  const auto& s = scene();
  const auto r = attribute(s.image_a, s.video(s.b, VideoTechnique::bscale, 3), small_config());
  EXPECT_EQ(r.decision, Decision::no_match);
  EXPECT_FALSE(r.winning);
  EXPECT_LT(r.best_pce, 60.0);
  const std::size_t n = bilinear_schedule_size();
  // Bilinear pass plus four binning phases for factors with 2f <= 1.
  EXPECT_GT(r.hypotheses_tried, n);
  EXPECT_LE(r.hypotheses_tried, 5 * n);
}

TEST(Matcher, Deterministic) {
  const auto& s = scene();
  const Fingerprint v = s.video(s.a, VideoTechnique::lskip, 4);
  const auto r1 = attribute(s.image_a, v, small_config());
  const auto r2 = attribute(s.image_a, v, small_config());
  EXPECT_EQ(r1.decision, r2.decision);
  EXPECT_EQ(r1.best_pce, r2.best_pce);
  EXPECT_EQ(r1.hypotheses_tried, r2.hypotheses_tried);
  EXPECT_EQ(r1.peak_offset.dy, r2.peak_offset.dy);
}

TEST(Matcher, RaisingTauNeverTurnsNoMatchIntoMatch) {
  const auto& s = scene();
  const Fingerprint v = s.video(s.a, VideoTechnique::lskip, 5);
  bool was_match = true;
  for (double tau : {10.0, 60.0, 200.0, 1e4, 1e13}) {
    MatchConfig c = small_config();
    c.tau = tau;
    const bool m = attribute(s.image_a, v, c).decision == Decision::match;
    EXPECT_TRUE(was_match || !m) << tau;
    was_match = m;
  }
  EXPECT_FALSE(was_match);
}

TEST(Matcher, EarlyExitAgreesWithDirectEvaluation) {
  const auto& s = scene();
  const Fingerprint v = s.video(s.a, VideoTechnique::bscale, 6);
  const Matcher m(small_config());
  const auto r = m.attribute(s.image_a, v);
  ASSERT_TRUE(r.winning);
  EXPECT_DOUBLE_EQ(m.evaluate(s.image_a, v, *r.winning).pce, r.best_pce);
  // Exhaustive search cannot find a weaker maximum than the early exit.
  MatchConfig ex = small_config();
  ex.exhaustive = true;
  ex.techniques = {ResizeTechnique::bilinear};
  const auto full = attribute(s.image_a, v, ex);
  EXPECT_GE(full.best_pce, r.best_pce);
  EXPECT_EQ(full.decision, Decision::match);
  EXPECT_GT(full.hypotheses_tried, r.hypotheses_tried);
}

TEST(Matcher, BoundaryCropRescuesVideoWithBoundaryPixels) {
  // The video reads out the whole sensor, boundary included.
  const SyntheticCamera cam(192, 256, 0.03, derive_seed(1, {1}), BayerPattern::RGGB, Margins{8, 8, 8, 8});
  const Fingerprint img = build_fingerprint(cam, CaptureProfile{}, {12, 1.0}, derive_seed(1, {2}), Provenance::image_fe);
  CaptureProfile vp;
  vp.use_boundary = true;
  vp.pipeline = video_pipeline(cam.sensor_rows(), cam.sensor_cols(), VideoMode{});
  const Fingerprint v = build_fingerprint(cam, vp, {16, 1.0}, derive_seed(1, {3}), Provenance::video_fe);
  MatchConfig c;
  c.boundary_rows = 10;
  const auto with = attribute(img, v, c);
  EXPECT_EQ(with.decision, Decision::match);
  c.skip_boundary_crop = true;
  const auto without = attribute(img, v, c);
  std::cout << "boundary camera PCE with crop " << with.best_pce << ", without " << without.best_pce << "\n";
  EXPECT_GE(with.best_pce, without.best_pce);
}

TEST(Matcher, IncompatibleDimsAreReportedNotThrown) {
  const auto& s = scene();
  const Fingerprint tiny{PlaneD(16, 16, 0.0), 1, Provenance::image_fe, "x"};
  const auto r = attribute(tiny, s.video(s.a, VideoTechnique::bscale, 7), small_config());
  EXPECT_TRUE(r.incompatible_dims);
  EXPECT_EQ(r.decision, Decision::no_match);
  MatchConfig c = small_config();
  c.boundary_rows = 100;
  EXPECT_TRUE(attribute(s.image_a, s.video(s.a, VideoTechnique::bscale, 7), c).incompatible_dims);
}

TEST(Matcher, ParsesTechniqueNames) {
  EXPECT_EQ(parse_technique("bilinear"), ResizeTechnique::bilinear);
  EXPECT_EQ(parse_technique("bin"), ResizeTechnique::binning);
  EXPECT_THROW(parse_technique("nearest"), ValidationError);
}
