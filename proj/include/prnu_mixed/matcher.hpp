#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prnu_mixed/correlation.hpp"
#include "prnu_mixed/demosaic.hpp"
#include "prnu_mixed/noise.hpp"
#include "prnu_mixed/resize.hpp"
#include "prnu_mixed/search.hpp"

namespace prnu {

enum class ResizeTechnique { bilinear, binning };

inline std::string to_string(ResizeTechnique t) { return t == ResizeTechnique::bilinear ? "bilinear" : "binning"; }

inline ResizeTechnique parse_technique(std::string_view s) {
  if (s == "bilinear" || s == "bscale") return ResizeTechnique::bilinear;
  if (s == "binning" || s == "bin") return ResizeTechnique::binning;
  throw ValidationError("unknown resizing technique '" + std::string(s) + "'");
}

// One candidate explanation of how the video relates to the image FE.
// `factor` is the overall image-to-video scale; for binning the image FE is
// binned by k at the given phase and then scaled by factor * k.
struct ResizeHypothesis {
  ResizeTechnique technique = ResizeTechnique::bilinear;
  Rational factor{1};
  int k = 1;
  BinPhase phase;
  std::optional<Offset> expected_offset;
};

inline std::string to_string(const ResizeHypothesis& h) {
  std::string s = to_string(h.technique) + " f=" + to_string(h.factor);
  if (h.technique == ResizeTechnique::binning)
    s += " k=" + std::to_string(h.k) + " phase=" + std::to_string(h.phase.row) + "," + std::to_string(h.phase.col);
  return s;
}

struct MatchConfig {
  double tau = 60.0;
  std::size_t boundary_rows = 20;
  double max_crop_ratio = kDefaultMaxCropRatio;
  std::vector<ResizeTechnique> techniques{ResizeTechnique::bilinear, ResizeTechnique::binning};
  // Try every hypothesis without a crop-ratio cutoff and report the best.
  bool exhaustive = false;
  // Ablation switch: correlate against the uncropped video FE.
  bool skip_boundary_crop = false;
  std::size_t pce_radius = kDefaultPceRadius;
  std::vector<int> bin_factors{2};
  std::optional<Rational> r1;
  // cols / rows of the sensor's active image, when known.
  std::optional<double> sensor_aspect;
  BayerPattern pattern = BayerPattern::RGGB;
  bool remove_linear_pattern = true;
};

enum class Decision { match, no_match };

inline std::string to_string(Decision d) { return d == Decision::match ? "match" : "no_match"; }

struct MatchReport {
  Decision decision = Decision::no_match;
  double best_pce = 0.0;
  std::optional<ResizeHypothesis> winning;
  Offset peak_offset;
  std::size_t hypotheses_tried = 0;
  std::size_t hypotheses_skipped = 0;
  double wall_time = 0.0;
  bool incompatible_dims = false;
};

namespace detail {

inline PlaneD combine_channels(const RgbImage& img) {
  PlaneD out(img.rows(), img.cols());
  for (Channel ch : kChannels) {
    const double w = kChannelWeights[static_cast<std::size_t>(ch)];
    const auto& p = img.plane(ch).values();
    for (std::size_t i = 0; i < p.size(); ++i) out.values()[i] += w * p[i];
  }
  return out;
}

// Image FE treated as a raw mosaic, binned and demosaiced back to a plane.
inline PlaneD binned_fingerprint(const PlaneD& fe, BayerPattern pattern, int k, BinPhase phase) {
  const std::size_t block = 2 * static_cast<std::size_t>(k);
  const std::size_t rows = fe.rows() / block * block, cols = fe.cols() / block * block;
  if (rows < 2 * block || cols < 2 * block) throw DimensionError("image FE too small to bin");
  Mosaic m{crop(fe, CropWindow{0, 0, rows, cols}), pattern};
  return combine_channels(demosaic_bilinear(bin(m, k, phase)));
}

struct Evaluation {
  bool skipped = true;
  double pce = 0.0;
  Offset offset;
};

}  // namespace detail

class Matcher {
 public:
  explicit Matcher(MatchConfig cfg = {}) : cfg_(std::move(cfg)) {}

  const MatchConfig& config() const { return cfg_; }

  MatchReport attribute(const Fingerprint& image_fe, const Fingerprint& video_fe) const {
    const auto t0 = std::chrono::steady_clock::now();
    MatchReport rep;
    auto finish = [&] {
      rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return rep;
    };

    PlaneD video = video_fe.plane;
    if (!cfg_.skip_boundary_crop && cfg_.boundary_rows > 0) {
      try {
        video = crop_boundary(video, cfg_.boundary_rows);
      } catch (const DimensionError&) {
        rep.incompatible_dims = true;
        return finish();
      }
    }
    if (cfg_.remove_linear_pattern) remove_linear_pattern(video);

    std::vector<ScheduledFactor> schedule;
    try {
      const MediaDims vdims(video.rows(), video.cols());
      const MediaDims idims(image_fe.rows(), image_fe.cols(), cfg_.r1);
      const SearchRange range = search_range(vdims, idims, cfg_.sensor_aspect);
      const MediaDims reference(video_fe.rows(), video_fe.cols());
      schedule = cfg_.exhaustive ? exhaustive_schedule(range, reference)
                                 : hypothesis_schedule(range, cfg_.max_crop_ratio, reference);
    } catch (const DimensionError&) {
      rep.incompatible_dims = true;
      return finish();
    }

    TemplateCorrelator correlator(video);
    std::optional<std::pair<double, ResizeHypothesis>> best;
    bool any_evaluated = false;

    auto consider = [&](const ResizeHypothesis& h, const PlaneD& scaled) -> bool {
      const auto ev = evaluate(correlator, video, scaled);
      ++rep.hypotheses_tried;
      if (ev.skipped) {
        ++rep.hypotheses_skipped;
        return false;
      }
      const bool first = !any_evaluated;
      any_evaluated = true;
      if (first || ev.pce > rep.best_pce || (ev.pce == rep.best_pce && closer_to_one(h, best->second))) {
        rep.best_pce = ev.pce;
        rep.peak_offset = ev.offset;
        best.emplace(ev.pce, h);
      }
      return !cfg_.exhaustive && ev.pce > cfg_.tau;
    };

    for (ResizeTechnique tech : cfg_.techniques) {
      if (tech == ResizeTechnique::bilinear) {
        for (const auto& s : schedule) {
          ResizeHypothesis h{ResizeTechnique::bilinear, s.factor, 1, {}, std::nullopt};
          if (consider(h, prepared(scale_plane(image_fe.plane, s.factor)))) return finalize(rep, best, finish);
        }
      } else {
        for (int k : cfg_.bin_factors) {
          std::map<std::pair<std::size_t, std::size_t>, PlaneD> binned;
          for (std::size_t pr = 0; pr < static_cast<std::size_t>(k); ++pr)
            for (std::size_t pc = 0; pc < static_cast<std::size_t>(k); ++pc) {
              try {
                binned.emplace(std::make_pair(pr, pc),
                               detail::binned_fingerprint(image_fe.plane, cfg_.pattern, k, {pr, pc}));
              } catch (const DimensionError&) {
              }
            }
          const Rational kr(k);
          for (const auto& s : schedule) {
            const Rational g = s.factor * kr;
            if (g > Rational(1)) continue;
            for (const auto& [ph, plane] : binned) {
              ResizeHypothesis h{ResizeTechnique::binning, s.factor, k, {ph.first, ph.second}, std::nullopt};
              if (consider(h, prepared(scale_plane(plane, g)))) return finalize(rep, best, finish);
            }
          }
        }
      }
    }
    if (!any_evaluated) rep.incompatible_dims = true;
    return finalize(rep, best, finish);
  }

  // Correlation of a single hypothesis, as the search loop computes it.
  detail::Evaluation evaluate(const Fingerprint& image_fe, const Fingerprint& video_fe,
                              const ResizeHypothesis& h) const {
    PlaneD video = cfg_.skip_boundary_crop ? video_fe.plane : crop_boundary(video_fe.plane, cfg_.boundary_rows);
    if (cfg_.remove_linear_pattern) remove_linear_pattern(video);
    TemplateCorrelator correlator(video);
    if (h.technique == ResizeTechnique::bilinear)
      return evaluate(correlator, video, prepared(scale_plane(image_fe.plane, h.factor)));
    const PlaneD b = detail::binned_fingerprint(image_fe.plane, cfg_.pattern, h.k, h.phase);
    return evaluate(correlator, video, prepared(scale_plane(b, h.factor * Rational(h.k))));
  }

 private:
  PlaneD prepared(PlaneD p) const {
    if (cfg_.remove_linear_pattern && p.rows() > 1 && p.cols() > 1) remove_linear_pattern(p);
    return p;
  }

  static bool closer_to_one(const ResizeHypothesis& a, const ResizeHypothesis& b) {
    const Rational one(1);
    const Rational da = a.factor > one ? a.factor - one : one - a.factor;
    const Rational db = b.factor > one ? b.factor - one : one - b.factor;
    return da < db;
  }

  // The video template slides inside the scaled image FE. When the scaled
  // FE is narrower than the video along an axis (aspect-changing image
  // crops), the video is centre-cropped along that axis.
  detail::Evaluation evaluate(TemplateCorrelator& correlator, const PlaneD& video, const PlaneD& scaled) const {
    detail::Evaluation ev;
    const std::size_t tr = std::min(video.rows(), scaled.rows()), tc = std::min(video.cols(), scaled.cols());
    try {
      NccSurface surf;
      if (tr == video.rows() && tc == video.cols()) {
        surf = correlator.padded_surface(scaled);
      } else {
        PlaneD t = crop(video, center_window(video.rows(), video.cols(), tr, tc));
        surf = padded_ncc_surface(scaled, t);
      }
      const auto r = summarize(surf, cfg_.pce_radius);
      ev = {false, r.peak_pce, r.peak_offset};
    } catch (const CorrelationError&) {
    }
    return ev;
  }

  template <typename Finish>
  MatchReport finalize(MatchReport& rep, const std::optional<std::pair<double, ResizeHypothesis>>& best,
                       Finish&& finish) const {
    if (best && rep.best_pce > cfg_.tau) {
      rep.decision = Decision::match;
      rep.winning = best->second;
    }
    return finish();
  }

  MatchConfig cfg_;
};

inline MatchReport attribute(const Fingerprint& image_fe, const Fingerprint& video_fe, const MatchConfig& cfg = {}) {
  return Matcher(cfg).attribute(image_fe, video_fe);
}

enum class FeQuality { high, low };

// Good fingerprints only need bilinear scaling; weak ones fall back to the
// 2x2 binning phases.
inline MatchReport attribute_with_strategy(const Fingerprint& image_fe, const Fingerprint& video_fe, FeQuality q,
                                           MatchConfig cfg = {}) {
  cfg.techniques = q == FeQuality::high ? std::vector{ResizeTechnique::bilinear}
                                        : std::vector{ResizeTechnique::bilinear, ResizeTechnique::binning};
  return attribute(image_fe, video_fe, cfg);
}

}  // namespace prnu
