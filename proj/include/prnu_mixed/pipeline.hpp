#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prnu_mixed/demosaic.hpp"
#include "prnu_mixed/error.hpp"
#include "prnu_mixed/resize.hpp"
#include "prnu_mixed/weight_map.hpp"

namespace prnu {

struct CropStep {
  CropWindow window;
};
struct CenterCropStep {
  std::size_t rows = 0;
  std::size_t cols = 0;
};
struct BinStep {
  int k = 2;
  BinPhase phase;
};
struct LineSkipStep {
  LineSkipPhase phase;
};
struct DemosaicStep {};
struct ScaleStep {
  Rational factor{1, 2};
  ScaleKernel kernel = ScaleKernel::bilinear;
};

using Step = std::variant<CropStep, CenterCropStep, BinStep, LineSkipStep, DemosaicStep, ScaleStep>;

struct Pipeline {
  std::vector<Step> steps;
};

// Demosaicing happens exactly once; binning and line skipping act on the
// mosaic before it, scaling on the RGB image after it. Crops may go anywhere.
inline void validate(const Pipeline& p) {
  bool demosaiced = false;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    const std::string where = "step " + std::to_string(i + 1) + ": ";
    if (std::holds_alternative<DemosaicStep>(s)) {
      if (demosaiced) throw PipelineError(where + "demosaic appears twice");
      demosaiced = true;
    } else if (std::holds_alternative<BinStep>(s) || std::holds_alternative<LineSkipStep>(s)) {
      if (demosaiced) throw PipelineError(where + "binning and line skipping must precede demosaicing");
    } else if (std::holds_alternative<ScaleStep>(s)) {
      if (!demosaiced) throw PipelineError(where + "scaling must follow demosaicing");
    }
  }
  if (!demosaiced) throw PipelineError("pipeline has no demosaic step");
}

// ---- text form ---------------------------------------------------------------
//   crop top=T left=L rows=R cols=C
//   center-crop rows=R cols=C
//   bin k=K phase=R,C
//   line-skip phase=R,C
//   demosaic
//   scale factor=F [kernel=bilinear|box2x2]
// One step per line (or separated by ';'); '#' starts a comment.

namespace detail {

struct StepArgs {
  std::string name;
  std::vector<std::pair<std::string, std::string>> kv;

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  }
  const std::string& get(std::string_view key) const {
    if (auto* v = find(key)) return *v;
    throw PipelineError(name + ": missing '" + std::string(key) + "='");
  }
};

inline std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s.front() == '-') throw PipelineError("bad value for " + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& s, const std::string& what) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw PipelineError(what + " expects two comma-separated values");
  return {parse_size(s.substr(0, comma), what), parse_size(s.substr(comma + 1), what)};
}

inline Step parse_step(std::string_view line) {
  std::istringstream in{std::string(line)};
  StepArgs a;
  in >> a.name;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw PipelineError(a.name + ": expected key=value, got '" + tok + "'");
    a.kv.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  if (a.name == "demosaic") return DemosaicStep{};
  if (a.name == "crop")
    return CropStep{{parse_size(a.get("top"), "top"), parse_size(a.get("left"), "left"),
                     parse_size(a.get("rows"), "rows"), parse_size(a.get("cols"), "cols")}};
  if (a.name == "center-crop") return CenterCropStep{parse_size(a.get("rows"), "rows"), parse_size(a.get("cols"), "cols")};
  if (a.name == "bin") {
    BinStep s;
    s.k = static_cast<int>(parse_size(a.get("k"), "k"));
    if (auto* ph = a.find("phase")) {
      auto [r, c] = parse_pair(*ph, "phase");
      s.phase = {r, c};
    }
    return s;
  }
  if (a.name == "line-skip") {
    LineSkipStep s;
    if (auto* ph = a.find("phase")) {
      auto [r, c] = parse_pair(*ph, "phase");
      s.phase = {r, c};
    }
    return s;
  }
  if (a.name == "scale") {
    ScaleStep s;
    try {
      s.factor = parse_rational(a.get("factor"));
    } catch (const ValidationError& e) {
      throw PipelineError(e.what());
    }
    if (auto* k = a.find("kernel")) {
      if (*k == "bilinear") s.kernel = ScaleKernel::bilinear;
      else if (*k == "box2x2") s.kernel = ScaleKernel::box2x2;
      else throw PipelineError("unknown scale kernel '" + *k + "'");
    }
    return s;
  }
  throw PipelineError("unknown pipeline step '" + a.name + "'");
}

}  // namespace detail

inline Pipeline parse_pipeline(std::string_view text) {
  Pipeline p;
  std::string line;
  auto flush = [&] {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) p.steps.push_back(detail::parse_step(line));
    line.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == ';') flush();
    else line.push_back(c);
  }
  flush();
  validate(p);
  return p;
}

inline std::string to_string(const Step& s) {
  struct V {
    std::string operator()(const CropStep& c) const {
      return "crop top=" + std::to_string(c.window.top) + " left=" + std::to_string(c.window.left) +
             " rows=" + std::to_string(c.window.rows) + " cols=" + std::to_string(c.window.cols);
    }
    std::string operator()(const CenterCropStep& c) const {
      return "center-crop rows=" + std::to_string(c.rows) + " cols=" + std::to_string(c.cols);
    }
    std::string operator()(const BinStep& b) const {
      return "bin k=" + std::to_string(b.k) + " phase=" + std::to_string(b.phase.row) + "," + std::to_string(b.phase.col);
    }
    std::string operator()(const LineSkipStep& l) const {
      return "line-skip phase=" + std::to_string(l.phase.row) + "," + std::to_string(l.phase.col);
    }
    std::string operator()(const DemosaicStep&) const { return "demosaic"; }
    std::string operator()(const ScaleStep& s) const {
      std::string out = "scale factor=" + to_string(s.factor);
      if (s.kernel != ScaleKernel::bilinear) out += " kernel=" + to_string(s.kernel);
      return out;
    }
  };
  return std::visit(V{}, s);
}

inline std::string to_string(const Pipeline& p) {
  std::string out;
  for (const auto& s : p.steps) out += to_string(s) + "\n";
  return out;
}

// Shorthands: "bscale", "bin", "lskip" (half-size), "bscale:K" (1/K with the
// two-tap box kernel), "bin:K".
inline Pipeline named_pipeline(std::string_view name) {
  std::string n(name);
  int k = 2;
  if (auto colon = n.find(':'); colon != std::string::npos) {
    k = static_cast<int>(detail::parse_size(n.substr(colon + 1), "k"));
    n.erase(colon);
  }
  if (n == "bscale")
    return {{DemosaicStep{}, ScaleStep{Rational(1, k), k == 2 ? ScaleKernel::bilinear : ScaleKernel::box2x2}}};
  if (n == "bin") return {{BinStep{k, {}}, DemosaicStep{}}};
  if (n == "lskip") {
    if (k != 2) throw PipelineError("line skipping is defined for half size only");
    return {{LineSkipStep{}, DemosaicStep{}}};
  }
  if (n == "identity") return {{DemosaicStep{}}};
  throw PipelineError("unknown pipeline name '" + std::string(name) + "'");
}

// Accepts either a shorthand name or the full text form.
inline Pipeline pipeline_from_spec(std::string_view spec) {
  if (spec.find_first_of(" =;\n") == std::string_view::npos && spec != "demosaic") return named_pipeline(spec);
  return parse_pipeline(spec);
}

// ---- execution -------------------------------------------------------------

namespace detail {
struct Layout {
  bool rgb = false;
  std::size_t rows = 0, cols = 0;
  BayerPattern pattern = BayerPattern::RGGB;
};
}  // namespace detail

template <typename W = Rational>
WeightMap<W> compose_pipeline(std::size_t rows, std::size_t cols, BayerPattern pattern, const Pipeline& p) {
  validate(p);
  detail::Layout lay{false, rows, cols, pattern};
  LinearMap<W> acc = LinearMap<W>::identity(rows * cols);
  for (const auto& step : p.steps) {
    LinearMap<W> m;
    if (auto* c = std::get_if<CropStep>(&step)) {
      m = crop_map<W>(lay.rows, lay.cols, lay.rgb ? 3 : 1, c->window);
      if (!lay.rgb) lay.pattern = shifted(lay.pattern, c->window.top, c->window.left);
      lay.rows = c->window.rows;
      lay.cols = c->window.cols;
    } else if (auto* cc = std::get_if<CenterCropStep>(&step)) {
      CropWindow w = center_window(lay.rows, lay.cols, cc->rows, cc->cols);
      m = crop_map<W>(lay.rows, lay.cols, lay.rgb ? 3 : 1, w);
      if (!lay.rgb) lay.pattern = shifted(lay.pattern, w.top, w.left);
      lay.rows = w.rows;
      lay.cols = w.cols;
    } else if (auto* b = std::get_if<BinStep>(&step)) {
      m = bin_map<W>(lay.rows, lay.cols, b->k, b->phase);
      lay.rows = detail::binned_length(lay.rows, b->k, b->phase.row);
      lay.cols = detail::binned_length(lay.cols, b->k, b->phase.col);
    } else if (auto* l = std::get_if<LineSkipStep>(&step)) {
      m = line_skip_map<W>(lay.rows, lay.cols, l->phase);
      lay.pattern = shifted(lay.pattern, detail::line_skip_source(0, l->phase.row), detail::line_skip_source(0, l->phase.col));
      lay.rows /= 2;
      lay.cols /= 2;
    } else if (std::holds_alternative<DemosaicStep>(step)) {
      m = demosaic_map<W>(lay.rows, lay.cols, lay.pattern);
      lay.rgb = true;
    } else if (auto* s = std::get_if<ScaleStep>(&step)) {
      m = scale_map<W>(lay.rows, lay.cols, s->factor, s->kernel);
      if (s->factor != Rational(1)) {
        lay.rows = detail::scaled_length(lay.rows, s->factor);
        lay.cols = detail::scaled_length(lay.cols, s->factor);
      }
    }
    acc = compose(m, acc);
  }
  return {rows, cols, lay.rows, lay.cols, std::move(acc)};
}

inline RgbImage run_pipeline(const Mosaic& raw, const Pipeline& p) {
  validate(p);
  Mosaic mosaic = raw;
  RgbImage rgb;
  bool is_rgb = false;
  for (const auto& step : p.steps) {
    if (auto* c = std::get_if<CropStep>(&step)) {
      if (is_rgb) rgb = crop(rgb, c->window);
      else mosaic = crop(mosaic, c->window);
    } else if (auto* cc = std::get_if<CenterCropStep>(&step)) {
      if (is_rgb) rgb = crop(rgb, center_window(rgb.rows(), rgb.cols(), cc->rows, cc->cols));
      else mosaic = crop(mosaic, center_window(mosaic.rows(), mosaic.cols(), cc->rows, cc->cols));
    } else if (auto* b = std::get_if<BinStep>(&step)) {
      mosaic = bin(mosaic, b->k, b->phase);
    } else if (auto* l = std::get_if<LineSkipStep>(&step)) {
      mosaic = line_skip(mosaic, l->phase);
    } else if (std::holds_alternative<DemosaicStep>(step)) {
      rgb = demosaic_bilinear(mosaic);
      is_rgb = true;
    } else if (auto* s = std::get_if<ScaleStep>(&step)) {
      rgb = bilinear_scale(rgb, s->factor, s->kernel);
    }
  }
  return rgb;
}

inline RgbImage run_pipeline(const RawFrame& raw, const Pipeline& p) { return run_pipeline(raw.mosaic(), p); }

}  // namespace prnu
