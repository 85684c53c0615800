// Simulates two cameras, records stills and a binned, cropped video with
// the first, then attributes the video against both image fingerprints.
//
//   attribute_demo [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "prnu_mixed/experiment.hpp"
#include "prnu_mixed/roa.hpp"

using namespace prnu;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;

  const SyntheticCamera owner(192, 256, 0.03, derive_seed(seed, {1}), BayerPattern::GRBG);
  const SyntheticCamera other(192, 256, 0.03, derive_seed(seed, {2}), BayerPattern::GRBG);

  CaptureProfile still;
  const FingerprintRecipe stills{12, 1.0};
  const Fingerprint fe_owner = build_fingerprint(owner, still, stills, derive_seed(seed, {3}), Provenance::image_fe);
  const Fingerprint fe_other = build_fingerprint(other, still, stills, derive_seed(seed, {4}), Provenance::image_fe);

  VideoMode mode;
  mode.technique = VideoTechnique::bin01;
  mode.crop_ratio = 1.05;
  CaptureProfile video;
  video.pipeline = video_pipeline(owner.active_rows(), owner.active_cols(), mode);
  const Fingerprint fe_video = build_fingerprint(owner, video, {16, 1.0}, derive_seed(seed, {5}), Provenance::video_fe);

  std::printf("image FEs %zux%zu, video FE %zux%zu (%s, crop ratio %.2f)\n", fe_owner.rows(), fe_owner.cols(),
              fe_video.rows(), fe_video.cols(), to_string(mode.technique).c_str(), mode.crop_ratio);

  const auto r = roa("bin", "bscale", 64, 64);
  std::printf("RoA(bin, bscale) = %s = %.4f\n",
              to_string(r.combined).c_str(), to_double(r.combined));

  MatchConfig cfg;
  cfg.boundary_rows = 6;
  const Matcher matcher(cfg);
  for (const auto* fe : {&fe_owner, &fe_other}) {
    const MatchReport rep = matcher.attribute(*fe, fe_video);
    std::printf("%s camera: %s, PCE %.1f after %zu hypotheses in %.2f s", fe == &fe_owner ? "owner" : "other",
                to_string(rep.decision).c_str(), rep.best_pce, rep.hypotheses_tried, rep.wall_time);
    if (rep.decision == Decision::match && rep.winning)
      std::printf(" via %s at offset %td,%td", to_string(*rep.winning).c_str(), rep.peak_offset.dy, rep.peak_offset.dx);
    std::printf("\n");
  }
  return 0;
}
