// prnu-mixed: fingerprints, matching, RoA reports, synthetic data and the
// camera catalog. Exit codes: 0 success / match / catalog hit, 1 no match /
// catalog miss, 2 error.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prnu_mixed/catalog.hpp"
#include "prnu_mixed/experiment.hpp"
#include "prnu_mixed/file_formats.hpp"
#include "prnu_mixed/manifest.hpp"
#include "prnu_mixed/matcher.hpp"
#include "prnu_mixed/roa.hpp"

#ifndef PRNU_MIXED_DEFAULT_CATALOG
#define PRNU_MIXED_DEFAULT_CATALOG "data/camera_catalog.txt"
#endif

namespace fs = std::filesystem;
using namespace prnu;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

// Shortest round-trip text, independent of the global locale.
std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, r.ptr);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FormatError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PRNU_MIXED_CACHE"); env && *env) return env;
  return fs::current_path();
}

// ---- fingerprint -------------------------------------------------------------

struct FingerprintArgs {
  std::string manifest;
  std::string out_dir;
  std::string denoiser = "wiener";
};

int cmd_fingerprint(const FingerprintArgs& a) {
  const fs::path mpath(a.manifest);
  const auto groups = group_manifest(parse_manifest(slurp(mpath), mpath.parent_path()));
  if (groups.empty()) throw ValidationError("manifest " + a.manifest + " lists no stills");
  const auto denoiser = make_denoiser(a.denoiser);
  const fs::path out = output_dir(a.out_dir);
  fs::create_directories(out);
  for (const auto& g : groups) {
    if (g.role == ManifestRole::test_image) {
      std::cout << "skip group=" << g.id() << " reason=test-images-are-queries\n";
      continue;
    }
    if (g.paths.empty()) throw ValidationError("group " + g.id() + " is empty");
    const bool video = g.role == ManifestRole::video_frames;
    FingerprintAccumulator acc(g.dims.height, g.dims.width);
    for (const auto& p : g.paths) {
      const RgbImage img = read_image(p);
      if (img.rows() != g.dims.height || img.cols() != g.dims.width)
        throw DimensionError("group " + g.id() + ": " + p.string() + " is " + std::to_string(img.cols()) + "x" +
                             std::to_string(img.rows()));
      acc.add(extract_noise(img, *denoiser, video ? SourceKind::video_frame : SourceKind::image));
    }
    const Fingerprint fp = acc.result(video ? Provenance::video_fe : Provenance::image_fe, denoiser->id());
    const fs::path file = out / (sanitize(g.camera) + "_" + to_string(g.role) + "_" + to_string(g.dims) + ".fe");
    write_fingerprint(file, fp);
    std::cout << "fingerprint group=" << g.id() << " count=" << fp.count << " rows=" << fp.rows()
              << " cols=" << fp.cols() << " path=" << file.string() << "\n";
  }
  return kExitOk;
}

// ---- match -------------------------------------------------------------------

struct MatchArgs {
  std::string image;
  std::string video;
  double tau = 60.0;
  std::size_t boundary_rows = 20;
  double max_crop_ratio = kDefaultMaxCropRatio;
  std::vector<std::string> techniques{"bilinear", "binning"};
  bool exhaustive = false;
  bool no_boundary_crop = false;
  std::string r1;
  double sensor_aspect = 0.0;
  std::string catalog;
  std::string model;
  std::string pattern = "RGGB";
};

int cmd_match(const MatchArgs& a) {
  const Fingerprint img = read_fingerprint(a.image);
  const Fingerprint vid = read_fingerprint(a.video);
  if (img.provenance != Provenance::image_fe)
    std::cerr << "warning: " << a.image << " was built from video frames\n";
  if (vid.provenance != Provenance::video_fe)
    std::cerr << "warning: " << a.video << " was built from still images\n";

  MatchConfig cfg;
  cfg.tau = a.tau;
  cfg.boundary_rows = a.boundary_rows;
  cfg.max_crop_ratio = a.max_crop_ratio;
  cfg.exhaustive = a.exhaustive;
  cfg.skip_boundary_crop = a.no_boundary_crop;
  cfg.pattern = parse_bayer_pattern(a.pattern);
  cfg.techniques.clear();
  for (const auto& t : a.techniques) cfg.techniques.push_back(parse_technique(t));
  if (!a.r1.empty()) cfg.r1 = parse_rational(a.r1);
  if (a.sensor_aspect > 0.0) cfg.sensor_aspect = a.sensor_aspect;
  if (!a.model.empty()) {
    const auto cat = CameraCatalog::load(a.catalog.empty() ? PRNU_MIXED_DEFAULT_CATALOG : a.catalog);
    if (const auto s = cat.sensor(a.model); s && s->dims) {
      const MediaDims full = s->dims->dims();
      if (!cfg.sensor_aspect) cfg.sensor_aspect = full.aspect();
      const MediaDims idims(img.rows(), img.cols());
      if (!cfg.r1 && same_aspect(idims.aspect(), full.aspect()) && idims.rows <= full.rows && idims.cols <= full.cols)
        cfg.r1 = minimum_r1(idims, full);
    }
  }

  const MatchReport r = Matcher(cfg).attribute(img, vid);
  std::cout << (r.decision == Decision::match ? "MATCH" : "NO MATCH") << ": best PCE " << fixed(r.best_pce, 2)
            << " after " << r.hypotheses_tried << " hypotheses";
  if (r.winning) std::cout << " (" << to_string(*r.winning) << ")";
  if (r.incompatible_dims) std::cout << " [no hypothesis fits these dimensions]";
  std::cout << "\n";

  std::cout << "result decision=" << to_string(r.decision) << " pce=" << fixed(r.best_pce, 4);
  if (r.winning) {
    const auto& h = *r.winning;
    std::cout << " technique=" << to_string(h.technique) << " factor=" << to_string(h.factor) << " k=" << h.k
              << " phase=" << h.phase.row << "," << h.phase.col;
  } else {
    std::cout << " technique=- factor=- k=- phase=-";
  }
  std::cout << " offset=" << r.peak_offset.dy << "," << r.peak_offset.dx << " tried=" << r.hypotheses_tried
            << " skipped=" << r.hypotheses_skipped << " incompatible=" << (r.incompatible_dims ? 1 : 0)
            << " seconds=" << fixed(r.wall_time, 3) << "\n";
  return r.decision == Decision::match ? kExitOk : kExitNegative;
}

// ---- roa ---------------------------------------------------------------------

struct RoaArgs {
  std::string a;
  std::string b;
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::string pattern = "RGGB";
  bool csv = false;
  bool table = false;
};

// Shorthands print as given; full specs as one quoted line of canonical steps.
std::string spec_label(const std::string& spec) {
  if (spec.find_first_of(" =;\n") == std::string::npos) return spec;
  std::string out;
  for (const auto& step : pipeline_from_spec(spec).steps) out += (out.empty() ? "" : "; ") + to_string(step);
  return "\"" + out + "\"";
}

void print_roa(const std::string& a_spec, const std::string& b_spec, std::size_t rows, std::size_t cols,
               BayerPattern p, bool csv) {
  const std::string a = spec_label(a_spec), b = spec_label(b_spec);
  const auto rep = roa<Rational>(a_spec, b_spec, rows, cols, p);
  const auto analytic = analytic_roa(a_spec, b_spec);
  const std::string an = analytic ? fixed(*analytic, 2) : "-";
  if (csv) {
    std::cout << a << "," << b << "," << rows << "," << cols << "," << to_string(rep.red) << "," << to_string(rep.green)
              << "," << to_string(rep.blue) << "," << to_string(rep.combined) << "," << num(to_double(rep.combined))
              << "," << an << "\n";
    return;
  }
  std::cout << "roa a=" << a << " b=" << b << " rows=" << rows << " cols=" << cols << " pattern=" << to_string(p)
            << " red=" << to_string(rep.red) << " green=" << to_string(rep.green) << " blue=" << to_string(rep.blue)
            << " combined=" << to_string(rep.combined) << " value=" << num(to_double(rep.combined))
            << " rounded=" << fixed(to_double(rep.combined), 2) << " analytic=" << an << "\n";
}

int cmd_roa(const RoaArgs& a) {
  const BayerPattern p = parse_bayer_pattern(a.pattern);
  if (a.csv) std::cout << "a,b,rows,cols,red,green,blue,combined,value,analytic\n";
  if (a.table) {
    constexpr auto t = analytic_roa_table();
    for (auto x : t.techniques)
      for (auto y : t.techniques) print_roa(std::string(x), std::string(y), 64, 64, p, a.csv);
    for (const auto& e : t.bin_vs_bilinear) {
      const std::size_t n = 32 * static_cast<std::size_t>(e.k);
      print_roa("bin:" + std::to_string(e.k), "bscale:" + std::to_string(e.k), n, n, p, a.csv);
    }
    return kExitOk;
  }
  if (a.a.empty() || a.b.empty()) throw ValidationError("roa needs two pipeline specs, or --table");
  print_roa(a.a, a.b, a.rows, a.cols, p, a.csv);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

struct SimArgs {
  std::uint64_t seed = 0;
  std::string out_dir;
  // experiment
  std::string config;
  bool seed_given = false;
  // pair / stills
  std::size_t rows = 384;
  std::size_t cols = 512;
  std::size_t boundary = 0;
  double sigma_x = 0.02;
  double sigma_psi = 0.01;
  std::string technique = "bscale";
  double crop_ratio = 1.0;
  bool different_camera = false;
  std::size_t image_stills = 20;
  std::size_t video_frames = 30;
  std::uint64_t camera_seed = 0;
  std::size_t count = 10;
  std::string pipeline = "identity";
  std::string camera_id = "cam0";
  std::string role = "train-image";
  bool raw = false;
};

VideoTechnique parse_video_technique(const std::string& s) {
  for (VideoTechnique t : kVideoTechniques)
    if (to_string(t) == s) return t;
  if (s == "bin") return VideoTechnique::bin00;
  throw ValidationError("unknown video technique '" + s + "' (bscale, bin(0,0) .. bin(1,1), lskip)");
}

SyntheticCamera sim_camera(const SimArgs& a, std::uint64_t which) {
  const std::size_t b = a.boundary;
  return SyntheticCamera(a.rows, a.cols, a.sigma_x, derive_seed(a.camera_seed, {which}), BayerPattern::RGGB,
                         Margins{b, b, b, b});
}

int cmd_sim_experiment(const SimArgs& a) {
  RoaExperimentConfig cfg;
  if (!a.config.empty()) cfg = parse_experiment_config(slurp(a.config));
  if (a.seed_given) cfg.seed = a.seed;
  const auto res = run_roa_correlation_experiment(cfg);
  const std::string csv = to_csv(res);
  std::cout << csv;
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    std::ofstream(fs::path(a.out_dir) / "experiment.csv") << csv;
  }
  return kExitOk;
}

int cmd_sim_pair(const SimArgs& a) {
  const fs::path out = output_dir(a.out_dir);
  fs::create_directories(out);
  const SyntheticCamera cam = sim_camera(a, 0);
  const SyntheticCamera other = sim_camera(a, 1);
  CaptureProfile still;
  still.sigma_psi = a.sigma_psi;
  const Fingerprint img =
      build_fingerprint(cam, still, {a.image_stills, 1.0}, derive_seed(a.seed, {1}), Provenance::image_fe);
  const SyntheticCamera& vcam = a.different_camera ? other : cam;
  VideoMode mode;
  mode.technique = parse_video_technique(a.technique);
  mode.crop_ratio = a.crop_ratio;
  CaptureProfile vp;
  vp.sigma_psi = a.sigma_psi;
  vp.use_boundary = vcam.has_boundary();
  vp.pipeline = video_pipeline(vp.use_boundary ? vcam.sensor_rows() : vcam.active_rows(),
                               vp.use_boundary ? vcam.sensor_cols() : vcam.active_cols(), mode);
  const Fingerprint vid =
      build_fingerprint(vcam, vp, {a.video_frames, 1.0}, derive_seed(a.seed, {2}), Provenance::video_fe);
  write_fingerprint(out / "image.fe", img);
  write_fingerprint(out / "video.fe", vid);
  std::cout << "pair image=" << (out / "image.fe").string() << " video=" << (out / "video.fe").string()
            << " image_dims=" << img.cols() << "x" << img.rows() << " video_dims=" << vid.cols() << "x" << vid.rows()
            << " technique=" << to_string(mode.technique) << " crop_ratio=" << num(mode.crop_ratio)
            << " same_camera=" << (a.different_camera ? 0 : 1) << "\n";
  return kExitOk;
}

int cmd_sim_stills(const SimArgs& a) {
  const fs::path out = output_dir(a.out_dir);
  fs::create_directories(out);
  const ManifestRole role = parse_manifest_role(a.role);
  const SyntheticCamera cam = sim_camera(a, 0);
  CaptureProfile p;
  p.sigma_psi = a.sigma_psi;
  p.pipeline = pipeline_from_spec(a.pipeline);
  std::ofstream manifest(out / "manifest.txt", std::ios::app);
  for (std::size_t i = 0; i < a.count; ++i) {
    const std::uint64_t s = derive_seed(a.seed, {i});
    const std::string stem = sanitize(a.camera_id) + "_" + to_string(role) + "_" + std::to_string(a.seed) + "_" +
                             std::to_string(i);
    fs::path file;
    std::size_t w = 0, h = 0;
    if (a.raw) {
      const RawFrame f = capture_raw(cam, p, s);
      file = out / (stem + ".prw");
      write_raw_frame(file, f);
      h = f.rows();
      w = f.cols();
    } else {
      const RgbImage img = capture(cam, p, s);
      file = out / (stem + ".ppm");
      write_ppm16(file, img);
      h = img.rows();
      w = img.cols();
    }
    manifest << file.filename().string() << ", " << to_string(role) << ", " << a.camera_id << ", " << w << "x" << h
             << "\n";
  }
  std::cout << "stills count=" << a.count << " camera=" << a.camera_id << " role=" << to_string(role)
            << " manifest=" << (out / "manifest.txt").string() << "\n";
  return kExitOk;
}

// ---- catalog -----------------------------------------------------------------

struct CatalogArgs {
  std::string path;
  std::string model;
  std::string image;
  std::string video;
  std::string match;
  double rf = 0.0;
  std::string r1;
};

fs::path catalog_path(const CatalogArgs& a) { return a.path.empty() ? fs::path(PRNU_MIXED_DEFAULT_CATALOG) : fs::path(a.path); }

int cmd_catalog_show(const CatalogArgs& a) {
  std::cout << CameraCatalog::load(catalog_path(a)).serialize();
  return kExitOk;
}

int cmd_catalog_lookup(const CatalogArgs& a) {
  const auto cat = CameraCatalog::load(catalog_path(a));
  const Resolution image = parse_resolution(a.image), video = parse_resolution(a.video);
  std::optional<Rational> r1;
  if (!a.r1.empty()) r1 = parse_rational(a.r1);
  const auto res = lookup_or_search(cat, a.model, MediaDims(image.height, image.width, r1), video.dims());
  if (const auto* e = std::get_if<CatalogEntry>(&res)) {
    std::cout << "hit model=" << e->model << " image=" << to_string(e->image) << " video=" << to_string(e->video)
              << " match=" << to_string(e->match) << " rf=" << fixed(e->rf, 4) << "\n";
    return kExitOk;
  }
  const auto& r = std::get<SearchRange>(res);
  std::cout << "miss model=" << a.model << " image=" << to_string(image) << " video=" << to_string(video)
            << " lo=" << to_string(r.lo) << " hi=" << to_string(r.hi) << " lo_value=" << fixed(to_double(r.lo), 4)
            << " hi_value=" << fixed(to_double(r.hi), 4) << " case=" << to_string(r.kind)
            << " hypotheses=" << hypothesis_schedule(r).size() << "\n";
  return kExitNegative;
}

int cmd_catalog_add(const CatalogArgs& a) {
  const fs::path p = catalog_path(a);
  CameraCatalog cat = fs::exists(p) ? CameraCatalog::load(p) : CameraCatalog{};
  const CatalogEntry e{a.model, parse_resolution(a.image), parse_resolution(a.video), parse_resolution(a.match), a.rf};
  if (!(e.rf > 0.0)) throw ValidationError("rf must be positive");
  cat.add(e);
  cat.save(p);
  std::cout << "added " << canonical_line(e) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PRNU source-camera attribution across images and videos"};
  app.require_subcommand(1);

  FingerprintArgs fa;
  auto* fp = app.add_subcommand("fingerprint", "Build fingerprints from a manifest of stills");
  fp->add_option("manifest", fa.manifest, "Manifest file: path, role, camera-id, WxH per line")->required();
  fp->add_option("--out-dir", fa.out_dir, "Output directory (default: $PRNU_MIXED_CACHE, else the working directory)");
  fp->add_option("--denoiser", fa.denoiser, "wiener or local-mean")->capture_default_str();

  MatchArgs ma;
  auto* mt = app.add_subcommand("match", "Decide whether an image FE and a video FE share a camera");
  mt->add_option("image", ma.image, "Image fingerprint (.fe)")->required();
  mt->add_option("video", ma.video, "Video fingerprint (.fe)")->required();
  mt->add_option("--tau", ma.tau, "PCE threshold")->capture_default_str();
  mt->add_option("--boundary-rows", ma.boundary_rows, "Rows cropped from top and bottom of the video FE")
      ->capture_default_str();
  mt->add_option("--max-crop-ratio", ma.max_crop_ratio, "Largest cropping ratio tried")->capture_default_str();
  mt->add_option("--techniques", ma.techniques, "Resizing techniques in order: bilinear, binning")
      ->delimiter(',')
      ->capture_default_str();
  mt->add_flag("--exhaustive", ma.exhaustive, "Try every factor without cutoff or early exit");
  mt->add_flag("--no-boundary-crop", ma.no_boundary_crop, "Skip the boundary crop (ablation)");
  mt->add_option("--r1", ma.r1, "Known image downsizing factor, e.g. 1/2");
  mt->add_option("--sensor-aspect", ma.sensor_aspect, "cols/rows of the active sensor image");
  mt->add_option("--catalog", ma.catalog, "Camera catalog used with --model");
  mt->add_option("--model", ma.model, "Camera model: sensor dims from the catalog set aspect and minimum r1");
  mt->add_option("--pattern", ma.pattern, "Bayer pattern of the image FE for binning")->capture_default_str();

  RoaArgs ra;
  auto* ro = app.add_subcommand("roa", "Rate of alignment between two resizing pipelines");
  ro->add_option("a", ra.a, "Pipeline spec or shorthand (bscale, bin, lskip, bin:3, bscale:3, ...)");
  ro->add_option("b", ra.b, "Second pipeline spec");
  ro->add_option("--rows", ra.rows, "Raw frame rows")->capture_default_str();
  ro->add_option("--cols", ra.cols, "Raw frame cols")->capture_default_str();
  ro->add_option("--pattern", ra.pattern, "Bayer pattern")->capture_default_str();
  ro->add_flag("--csv", ra.csv, "CSV output");
  ro->add_flag("--table", ra.table, "All tabulated pairs");

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "Synthetic cameras and experiments");
  sim->require_subcommand(1);
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
    c->add_option("--out-dir", sa.out_dir, "Output directory (default: $PRNU_MIXED_CACHE, else the working directory)");
  };
  auto add_camera = [&](CLI::App* c) {
    c->add_option("--rows", sa.rows, "Active image rows")->capture_default_str();
    c->add_option("--cols", sa.cols, "Active image cols")->capture_default_str();
    c->add_option("--boundary", sa.boundary, "Active boundary width on each side (even)")->capture_default_str();
    c->add_option("--sigma-x", sa.sigma_x, "PRNU spread")->capture_default_str();
    c->add_option("--sigma-psi", sa.sigma_psi, "Read noise")->capture_default_str();
    c->add_option("--camera-seed", sa.camera_seed, "Seed of the synthetic camera")->capture_default_str();
  };
  auto* ex = sim->add_subcommand("experiment", "RoA-vs-correlation experiment over bscale/bin/lskip");
  add_seed(ex);
  ex->add_option("--config", sa.config, "key = value config file");
  auto* pr = sim->add_subcommand("pair", "Write an image FE and a video FE");
  add_seed(pr);
  add_camera(pr);
  pr->add_option("--technique", sa.technique, "bscale, bin(0,0) .. bin(1,1), lskip")->capture_default_str();
  pr->add_option("--crop-ratio", sa.crop_ratio, "Video crop ratio (>= 1)")->capture_default_str();
  pr->add_flag("--different-camera", sa.different_camera, "Video from a second camera");
  pr->add_option("--image-stills", sa.image_stills, "Stills in the image FE")->capture_default_str();
  pr->add_option("--video-frames", sa.video_frames, "Frames in the video FE")->capture_default_str();
  auto* st = sim->add_subcommand("stills", "Write synthetic stills and a manifest");
  add_seed(st);
  add_camera(st);
  st->add_option("--count", sa.count, "Number of stills")->capture_default_str();
  st->add_option("--pipeline", sa.pipeline, "In-camera pipeline spec")->capture_default_str();
  st->add_option("--camera-id", sa.camera_id, "Camera id written to the manifest")->capture_default_str();
  st->add_option("--role", sa.role, "train-image, test-image or video-frames")->capture_default_str();
  st->add_flag("--raw", sa.raw, "Write raw .prw frames instead of demosaiced PPM");

  CatalogArgs ca;
  auto* cat = app.add_subcommand("catalog", "Camera parameter lookup table");
  cat->require_subcommand(1);
  cat->add_option("--catalog", ca.path, "Catalog file")->default_str(PRNU_MIXED_DEFAULT_CATALOG);
  auto* show = cat->add_subcommand("show", "Print the catalog");
  auto* lookup = cat->add_subcommand("lookup", "Look up a resize entry, or print the search range on a miss");
  lookup->add_option("model", ca.model)->required();
  lookup->add_option("image", ca.image, "Image WxH")->required();
  lookup->add_option("video", ca.video, "Video WxH")->required();
  lookup->add_option("--r1", ca.r1, "Known image downsizing factor");
  auto* add = cat->add_subcommand("add", "Append an entry");
  add->add_option("model", ca.model)->required();
  add->add_option("image", ca.image, "Image WxH")->required();
  add->add_option("video", ca.video, "Video WxH")->required();
  add->add_option("match", ca.match, "Resized image WxH")->required();
  add->add_option("rf", ca.rf, "Resize factor")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    for (auto* c : {ex, pr, st})
      if (c->parsed()) sa.seed_given = c->count("--seed") > 0;
    if (fp->parsed()) return cmd_fingerprint(fa);
    if (mt->parsed()) return cmd_match(ma);
    if (ro->parsed()) return cmd_roa(ra);
    if (ex->parsed()) return cmd_sim_experiment(sa);
    if (pr->parsed()) return cmd_sim_pair(sa);
    if (st->parsed()) return cmd_sim_stills(sa);
    if (show->parsed()) return cmd_catalog_show(ca);
    if (lookup->parsed()) return cmd_catalog_lookup(ca);
    if (add->parsed()) return cmd_catalog_add(ca);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
