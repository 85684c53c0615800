#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "prnu_mixed/catalog.hpp"
#include "prnu_mixed/correlation.hpp"
#include "prnu_mixed/matcher.hpp"
#include "prnu_mixed/noise.hpp"
#include "prnu_mixed/synth.hpp"

namespace prnu {

// ---- technique-crossed correlation experiment --------------------------------

inline constexpr std::array<const char*, 3> kHalfSizeTechniques = {"bscale", "bin", "lskip"};

struct RoaExperimentConfig {
  std::size_t rows = 512;
  std::size_t cols = 512;
  double sigma_x = 0.02;
  double sigma_psi = 0.01;
  std::size_t n_train = 20;
  std::size_t n_test = 60;
  std::uint64_t seed = 0;
  double tau = 60.0;
  // Test stills get sigma_psi * q with q log-uniform in [quality_min, quality_max].
  double quality_min = 0.5;
  double quality_max = 6.0;
  ContentSpec content;
  std::string denoiser = "wiener";
};

namespace detail {

inline double parse_double(std::string_view v, const std::string& key) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw FormatError("config: bad value for " + key);
  return out;
}

inline std::uint64_t parse_u64(std::string_view v, const std::string& key) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw FormatError("config: bad value for " + key);
  return out;
}

}  // namespace detail

// `key = value` lines; '#' comments. Unknown keys are errors.
inline RoaExperimentConfig parse_experiment_config(std::string_view text) {
  RoaExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key(detail::trim(t.substr(0, eq)));
    const std::string_view val = detail::trim(t.substr(eq + 1));
    if (key == "rows") c.rows = detail::parse_u64(val, key);
    else if (key == "cols") c.cols = detail::parse_u64(val, key);
    else if (key == "sigma_x") c.sigma_x = detail::parse_double(val, key);
    else if (key == "sigma_psi") c.sigma_psi = detail::parse_double(val, key);
    else if (key == "n_train") c.n_train = detail::parse_u64(val, key);
    else if (key == "n_test") c.n_test = detail::parse_u64(val, key);
    else if (key == "seed") c.seed = detail::parse_u64(val, key);
    else if (key == "tau") c.tau = detail::parse_double(val, key);
    else if (key == "quality_min") c.quality_min = detail::parse_double(val, key);
    else if (key == "quality_max") c.quality_max = detail::parse_double(val, key);
    else if (key == "denoiser") c.denoiser = std::string(val);
    else if (key == "content") {
      if (val == "flat") c.content.kind = ContentKind::flat;
      else if (val == "textured") c.content.kind = ContentKind::textured;
      else {
        c.content.kind = ContentKind::image_file;
        c.content.path = std::string(val);
      }
    } else {
      throw FormatError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

struct RoaExperimentResult {
  // [fingerprint technique][test technique], in kHalfSizeTechniques order.
  std::array<std::array<double, 3>, 3> mean_rho{};
  std::array<std::array<double, 3>, 3> tpr{};
  std::array<std::array<double, 3>, 3> mean_pce{};
  std::size_t n_test = 0;
};

inline RoaExperimentResult run_roa_correlation_experiment(const RoaExperimentConfig& cfg) {
  if (cfg.n_train < 10) throw ValidationError("experiment needs at least 10 training stills");
  if (cfg.n_test < 40) throw ValidationError("experiment needs at least 40 test stills");
  if (!(cfg.quality_min > 0.0) || cfg.quality_max < cfg.quality_min) throw ValidationError("bad quality range");
  const auto denoiser = make_denoiser(cfg.denoiser);
  const SyntheticCamera cam(cfg.rows, cfg.cols, cfg.sigma_x, derive_seed(cfg.seed, {1}));
  std::array<Pipeline, 3> pipes;
  for (std::size_t t = 0; t < 3; ++t) pipes[t] = named_pipeline(kHalfSizeTechniques[t]);

  CaptureProfile profile;
  profile.sigma_psi = cfg.sigma_psi;
  profile.content = cfg.content;

  std::vector<FingerprintAccumulator> acc;
  for (std::size_t t = 0; t < 3; ++t) acc.emplace_back(cfg.rows / 2, cfg.cols / 2);
  for (std::size_t i = 0; i < cfg.n_train; ++i) {
    const RawFrame raw = capture_raw(cam, profile, derive_seed(cfg.seed, {2, i}));
    for (std::size_t t = 0; t < 3; ++t) acc[t].add(extract_noise(run_pipeline(raw, pipes[t]), *denoiser));
  }
  std::array<Fingerprint, 3> fps;
  for (std::size_t t = 0; t < 3; ++t) fps[t] = acc[t].result(Provenance::image_fe);

  RoaExperimentResult res;
  res.n_test = cfg.n_test;
  std::mt19937_64 qrng(derive_seed(cfg.seed, {3}));
  std::uniform_real_distribution<double> u(std::log(cfg.quality_min), std::log(cfg.quality_max));
  for (std::size_t j = 0; j < cfg.n_test; ++j) {
    CaptureProfile tp = profile;
    tp.quality = std::exp(u(qrng));
    const RawFrame raw = capture_raw(cam, tp, derive_seed(cfg.seed, {4, j}));
    for (std::size_t b = 0; b < 3; ++b) {
      const NoisePattern n = extract_noise(run_pipeline(raw, pipes[b]), *denoiser);
      for (std::size_t a = 0; a < 3; ++a) {
        const double rho = pearson(fps[a].plane, n.plane);
        const auto r = correlate_circular(fps[a].plane, n.plane);
        res.mean_rho[a][b] += rho;
        res.mean_pce[a][b] += r.peak_pce;
        if (r.peak_pce > cfg.tau) res.tpr[a][b] += 1.0;
      }
    }
  }
  const auto n = static_cast<double>(cfg.n_test);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      res.mean_rho[a][b] /= n;
      res.mean_pce[a][b] /= n;
      res.tpr[a][b] /= n;
    }
  return res;
}

// One block per metric; rows are the fingerprint technique, columns the
// test-still technique.
inline std::string to_csv(const RoaExperimentResult& r) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "metric,fingerprint,bscale,bin,lskip\n";
  auto block = [&](const char* name, const std::array<std::array<double, 3>, 3>& m) {
    for (std::size_t a = 0; a < 3; ++a) {
      out << name << ',' << kHalfSizeTechniques[a];
      for (std::size_t b = 0; b < 3; ++b) out << ',' << detail::format_fixed(m[a][b], 4);
      out << '\n';
    }
  };
  block("rho", r.mean_rho);
  block("tpr", r.tpr);
  block("pce", r.mean_pce);
  return out.str();
}

// ---- end-to-end attribution benchmark ----------------------------------------

// Video resizing applied in camera: half size by bilinear scaling, 2x2
// binning at one of four phases, or line skipping.
enum class VideoTechnique { bscale, bin00, bin01, bin10, bin11, lskip };

inline constexpr std::array<VideoTechnique, 6> kVideoTechniques = {
    VideoTechnique::bscale, VideoTechnique::bin00, VideoTechnique::bin01,
    VideoTechnique::bin10,  VideoTechnique::bin11, VideoTechnique::lskip};

inline std::string to_string(VideoTechnique t) {
  switch (t) {
    case VideoTechnique::bscale: return "bscale";
    case VideoTechnique::bin00: return "bin(0,0)";
    case VideoTechnique::bin01: return "bin(0,1)";
    case VideoTechnique::bin10: return "bin(1,0)";
    case VideoTechnique::bin11: return "bin(1,1)";
    case VideoTechnique::lskip: break;
  }
  return "lskip";
}

inline Step video_resize_step(VideoTechnique t) {
  switch (t) {
    case VideoTechnique::bin00: return BinStep{2, {0, 0}};
    case VideoTechnique::bin01: return BinStep{2, {0, 1}};
    case VideoTechnique::bin10: return BinStep{2, {1, 0}};
    case VideoTechnique::bin11: return BinStep{2, {1, 1}};
    case VideoTechnique::lskip: return LineSkipStep{};
    case VideoTechnique::bscale: break;
  }
  return ScaleStep{Rational(1, 2), ScaleKernel::bilinear};
}

struct VideoMode {
  VideoTechnique technique = VideoTechnique::bscale;
  // Video dims relative to the half-size readout; 1 means the full 16:9
  // band of the readout region is kept.
  double crop_ratio = 1.0;
  double aspect = 16.0 / 9.0;  // cols / rows
};

// Readout window for a video mode: a centred band of the sensor region with
// the video aspect, shrunk by the crop ratio, on even offsets and with
// multiple-of-4 dims so every resizing technique applies.
inline CropWindow video_window(std::size_t region_rows, std::size_t region_cols, const VideoMode& m) {
  double rows = static_cast<double>(region_rows), cols = static_cast<double>(region_cols);
  if (cols / rows < m.aspect) rows = cols / m.aspect;
  else cols = rows * m.aspect;
  auto q4 = [&](double v) { return static_cast<std::size_t>(std::floor(v / m.crop_ratio / 4.0)) * 4; };
  const std::size_t r = q4(rows), c = q4(cols);
  if (r < 16 || c < 16) throw DimensionError("video window too small");
  return {(region_rows - r) / 4 * 2, (region_cols - c) / 4 * 2, r, c};
}

inline Pipeline video_pipeline(std::size_t region_rows, std::size_t region_cols, const VideoMode& m) {
  Pipeline p;
  p.steps.push_back(CropStep{video_window(region_rows, region_cols, m)});
  const Step resize = video_resize_step(m.technique);
  if (std::holds_alternative<ScaleStep>(resize)) {
    p.steps.push_back(DemosaicStep{});
    p.steps.push_back(resize);
  } else {
    p.steps.push_back(resize);
    p.steps.push_back(DemosaicStep{});
  }
  return p;
}

struct FingerprintRecipe {
  std::size_t stills = 10;
  double quality = 1.0;
};

inline Fingerprint build_fingerprint(const SyntheticCamera& cam, CaptureProfile profile, const FingerprintRecipe& recipe,
                                     std::uint64_t seed, Provenance prov) {
  profile.quality = recipe.quality;
  std::optional<FingerprintAccumulator> acc;
  for (std::size_t i = 0; i < recipe.stills; ++i) {
    const NoisePattern n =
        extract_noise(capture(cam, profile, derive_seed(seed, {i})),
                      prov == Provenance::video_fe ? SourceKind::video_frame : SourceKind::image);
    if (!acc) acc.emplace(n.plane.rows(), n.plane.cols());
    acc->add(n);
  }
  if (!acc) throw ValidationError("fingerprint recipe with zero stills");
  return acc->result(prov);
}

struct AttributionBenchConfig {
  std::size_t cameras = 20;
  std::size_t active_rows = 384;
  std::size_t active_cols = 512;
  std::size_t boundary = 16;
  double sigma_x = 0.02;
  double sigma_psi = 0.01;
  FingerprintRecipe image{20, 1.0};
  FingerprintRecipe video{30, 1.0};
  std::size_t videos_per_camera = 1;
  std::size_t h0_trials = 200;
  std::uint64_t seed = 0;
  MatchConfig match;
};

struct SyntheticVideo {
  std::size_t camera = 0;
  VideoMode mode;
  bool boundary = false;
  Fingerprint fe;
};

struct AttributionCorpus {
  std::vector<SyntheticCamera> cameras;
  std::vector<Fingerprint> image_fes;
  std::vector<SyntheticVideo> videos;
};

// Odd-numbered cameras carry an active boundary and record video over the
// full width of the whole sensor, so the video includes boundary pixels.
// Other cameras crop within the active image: crop ratios are mostly in
// [1, 1.1] with the rest up to 1.6. Video techniques go round-robin.
inline AttributionCorpus build_attribution_corpus(const AttributionBenchConfig& cfg) {
  AttributionCorpus c;
  std::mt19937_64 rng(derive_seed(cfg.seed, {10}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < cfg.cameras; ++i) {
    const bool boundary = i % 2 == 1;
    const std::size_t b = boundary ? cfg.boundary : 0;
    const auto pattern = static_cast<BayerPattern>(i % 4);
    c.cameras.emplace_back(cfg.active_rows, cfg.active_cols, cfg.sigma_x, derive_seed(cfg.seed, {11, i}), pattern,
                           Margins{b, b, b, b});
    CaptureProfile still;
    still.sigma_psi = cfg.sigma_psi;
    c.image_fes.push_back(
        build_fingerprint(c.cameras.back(), still, cfg.image, derive_seed(cfg.seed, {12, i}), Provenance::image_fe));
  }
  std::size_t k = 0;
  for (std::size_t v = 0; v < cfg.videos_per_camera; ++v)
    for (std::size_t i = 0; i < cfg.cameras; ++i, ++k) {
      const SyntheticCamera& cam = c.cameras[i];
      VideoMode mode;
      mode.technique = kVideoTechniques[k % kVideoTechniques.size()];
      const double draw = u(rng) < 0.7 ? 1.0 + 0.1 * u(rng) : 1.1 + 0.5 * u(rng);
      mode.crop_ratio = cam.has_boundary() ? 1.0 : draw;
      CaptureProfile vp;
      vp.sigma_psi = cfg.sigma_psi;
      vp.use_boundary = cam.has_boundary();
      const std::size_t rr = vp.use_boundary ? cam.sensor_rows() : cam.active_rows();
      const std::size_t rc = vp.use_boundary ? cam.sensor_cols() : cam.active_cols();
      vp.pipeline = video_pipeline(rr, rc, mode);
      c.videos.push_back({i, mode, cam.has_boundary(),
                          build_fingerprint(cam, vp, cfg.video, derive_seed(cfg.seed, {13, v, i}), Provenance::video_fe)});
    }
  return c;
}

struct TrialOutcome {
  std::size_t image_camera = 0;
  std::size_t video_index = 0;
  MatchReport report;
};

struct AttributionBenchResult {
  std::vector<TrialOutcome> h1;
  std::vector<TrialOutcome> h0;
  double tpr = 0.0;
  double fpr = 0.0;
};

inline double match_rate(const std::vector<TrialOutcome>& v) {
  if (v.empty()) return 0.0;
  std::size_t m = 0;
  for (const auto& t : v) m += t.report.decision == Decision::match;
  return static_cast<double>(m) / static_cast<double>(v.size());
}

// H1: every video against its own camera's image FE. H0: image FE of camera
// i against video (i + 1 + t) mod n for t = 0, 1, ... until h0_trials.
inline AttributionBenchResult run_attribution_bench(const AttributionCorpus& c, const MatchConfig& mc,
                                                    std::size_t h0_trials,
                                                    const std::function<void(const TrialOutcome&, bool)>& progress = {}) {
  AttributionBenchResult r;
  const Matcher m(mc);
  for (std::size_t v = 0; v < c.videos.size(); ++v) {
    const auto& vid = c.videos[v];
    r.h1.push_back({vid.camera, v, m.attribute(c.image_fes[vid.camera], vid.fe)});
    if (progress) progress(r.h1.back(), true);
  }
  const std::size_t n = c.image_fes.size();
  // Offsets t beyond n - 2 move on to the next set of videos.
  bool exhausted = n < 2;
  for (std::size_t t = 0; !exhausted && r.h0.size() < h0_trials; ++t)
    for (std::size_t i = 0; i < n && r.h0.size() < h0_trials; ++i) {
      const std::size_t v = (i + 1 + t % (n - 1)) % n + (t / (n - 1)) * n;
      if (v >= c.videos.size()) {
        exhausted = true;
        break;
      }
      r.h0.push_back({i, v, m.attribute(c.image_fes[i], c.videos[v].fe)});
      if (progress) progress(r.h0.back(), false);
    }
  r.tpr = match_rate(r.h1);
  r.fpr = match_rate(r.h0);
  return r;
}

}  // namespace prnu
