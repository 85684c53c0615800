#pragma once

// Camera catalog: a line-oriented text file.
//
//   # free comment
//   # sensor: <model>, dims=<W>x<H>|-, boundary=all|some|none,
//   #         match=resizing-only|exhaustive|both|unknown, crop=<min>-<max>|NA
//   <model>, <W>x<H> image, <W>x<H> video, <W>x<H> match, <rf>
//
// (the sensor annotation is a single line). Dimensions are width x height.
// Lines read from a file are written back verbatim; entries added
// programmatically use the canonical ", " separators and a 4-decimal rf.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prnu_mixed/error.hpp"
#include "prnu_mixed/search.hpp"

namespace prnu {

struct Resolution {
  std::size_t width = 0;
  std::size_t height = 0;
  friend bool operator==(const Resolution&, const Resolution&) = default;

  MediaDims dims() const { return MediaDims(height, width); }
  static Resolution of(const MediaDims& d) { return {d.cols, d.rows}; }
};

inline std::string to_string(const Resolution& r) { return std::to_string(r.width) + "x" + std::to_string(r.height); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

template <typename T>
T parse_number(std::string_view s, const std::string& what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw FormatError("catalog: bad " + what + " '" + std::string(s) + "'");
  return v;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc()) throw FormatError("catalog: unformattable number");
  return std::string(buf, p);
}

}  // namespace detail

inline Resolution parse_resolution(std::string_view s) {
  s = detail::trim(s);
  const auto x = s.find('x');
  if (x == std::string_view::npos) throw FormatError("catalog: resolution '" + std::string(s) + "' is not WxH");
  Resolution r{detail::parse_number<std::size_t>(s.substr(0, x), "width"),
               detail::parse_number<std::size_t>(s.substr(x + 1), "height")};
  if (r.width == 0 || r.height == 0) throw FormatError("catalog: zero resolution");
  return r;
}

enum class BoundaryUse { all, some, none };
enum class MatchMode { resizing_only, exhaustive, both, unknown };

inline std::string to_string(BoundaryUse b) {
  switch (b) {
    case BoundaryUse::all: return "all";
    case BoundaryUse::some: return "some";
    case BoundaryUse::none: break;
  }
  return "none";
}

inline std::string to_string(MatchMode m) {
  switch (m) {
    case MatchMode::resizing_only: return "resizing-only";
    case MatchMode::exhaustive: return "exhaustive";
    case MatchMode::both: return "both";
    case MatchMode::unknown: break;
  }
  return "unknown";
}

struct CatalogEntry {
  std::string model;
  Resolution image;
  Resolution video;
  Resolution match;
  double rf = 0.0;
};

struct SensorInfo {
  std::string model;
  std::optional<Resolution> dims;
  BoundaryUse boundary = BoundaryUse::none;
  MatchMode match = MatchMode::unknown;
  std::optional<std::pair<double, double>> crop;
};

inline std::string canonical_line(const CatalogEntry& e) {
  return e.model + ", " + to_string(e.image) + ", " + to_string(e.video) + ", " + to_string(e.match) + ", " +
         detail::format_fixed(e.rf, 4);
}

inline std::string canonical_line(const SensorInfo& s) {
  std::string crop = "NA";
  if (s.crop) crop = detail::format_fixed(s.crop->first, 3) + "-" + detail::format_fixed(s.crop->second, 3);
  return "# sensor: " + s.model + ", dims=" + (s.dims ? to_string(*s.dims) : "-") +
         ", boundary=" + to_string(s.boundary) + ", match=" + to_string(s.match) + ", crop=" + crop;
}

inline CatalogEntry parse_catalog_entry(std::string_view line) {
  const auto f = detail::split_commas(line);
  if (f.size() != 5) throw FormatError("catalog: expected 5 fields in '" + std::string(line) + "'");
  if (f[0].empty()) throw FormatError("catalog: empty model name");
  CatalogEntry e{std::string(f[0]), parse_resolution(f[1]), parse_resolution(f[2]), parse_resolution(f[3]),
                 detail::parse_number<double>(f[4], "rf")};
  if (!(e.rf > 0.0)) throw FormatError("catalog: rf must be positive");
  return e;
}

inline constexpr std::string_view kSensorPrefix = "# sensor:";

inline SensorInfo parse_sensor_line(std::string_view line) {
  const auto f = detail::split_commas(line.substr(kSensorPrefix.size()));
  if (f.size() != 5 || f[0].empty()) throw FormatError("catalog: malformed sensor line '" + std::string(line) + "'");
  SensorInfo s;
  s.model = std::string(f[0]);
  auto value = [&](std::string_view field, std::string_view key) {
    if (field.substr(0, key.size()) != key || field.size() <= key.size() || field[key.size()] != '=')
      throw FormatError("catalog: expected '" + std::string(key) + "=' in sensor line");
    return field.substr(key.size() + 1);
  };
  if (const auto d = value(f[1], "dims"); d != "-") s.dims = parse_resolution(d);
  const auto b = value(f[2], "boundary");
  if (b == "all") s.boundary = BoundaryUse::all;
  else if (b == "some") s.boundary = BoundaryUse::some;
  else if (b == "none") s.boundary = BoundaryUse::none;
  else throw FormatError("catalog: unknown boundary value '" + std::string(b) + "'");
  const auto m = value(f[3], "match");
  if (m == "resizing-only") s.match = MatchMode::resizing_only;
  else if (m == "exhaustive") s.match = MatchMode::exhaustive;
  else if (m == "both") s.match = MatchMode::both;
  else if (m == "unknown") s.match = MatchMode::unknown;
  else throw FormatError("catalog: unknown match value '" + std::string(m) + "'");
  if (const auto c = value(f[4], "crop"); c != "NA") {
    const auto dash = c.find('-');
    if (dash == std::string_view::npos) throw FormatError("catalog: crop must be min-max or NA");
    s.crop = std::make_pair(detail::parse_number<double>(c.substr(0, dash), "crop"),
                            detail::parse_number<double>(c.substr(dash + 1), "crop"));
    if (s.crop->first > s.crop->second) throw FormatError("catalog: crop min above max");
  }
  return s;
}

class CameraCatalog {
 public:
  struct Line {
    std::variant<std::monostate, CatalogEntry, SensorInfo> record;  // monostate: comment or blank
    std::string text;
  };

  static CameraCatalog parse(std::string_view text) {
    CameraCatalog cat;
    std::size_t pos = 0, lineno = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      const bool last = nl == std::string_view::npos;
      if (last) nl = text.size();
      const std::string_view raw = text.substr(pos, nl - pos);
      ++lineno;
      try {
        cat.lines_.push_back(parse_line(raw));
      } catch (const FormatError& e) {
        throw FormatError(std::string(e.what()) + " (line " + std::to_string(lineno) + ")");
      }
      pos = nl + 1;
      cat.final_newline_ = !last;
    }
    return cat;
  }

  static CameraCatalog load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open catalog " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  std::string serialize() const {
    std::string out;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      out += lines_[i].text;
      if (i + 1 < lines_.size() || final_newline_) out += '\n';
    }
    return out;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write catalog " + path.string());
    out << serialize();
  }

  void add(const CatalogEntry& e) {
    if (e.model.find(',') != std::string::npos || e.model.empty()) throw ValidationError("bad model name");
    append({e, canonical_line(e)});
  }
  void add(const SensorInfo& s) {
    if (s.model.find(',') != std::string::npos || s.model.empty()) throw ValidationError("bad model name");
    append({s, canonical_line(s)});
  }

  const std::vector<Line>& lines() const { return lines_; }

  std::vector<CatalogEntry> entries() const {
    std::vector<CatalogEntry> out;
    for (const auto& l : lines_)
      if (const auto* e = std::get_if<CatalogEntry>(&l.record)) out.push_back(*e);
    return out;
  }

  std::optional<SensorInfo> sensor(std::string_view model) const {
    for (const auto& l : lines_)
      if (const auto* s = std::get_if<SensorInfo>(&l.record); s && s->model == model) return *s;
    return std::nullopt;
  }

  std::optional<CatalogEntry> lookup(std::string_view model, const Resolution& image, const Resolution& video) const {
    for (const auto& l : lines_)
      if (const auto* e = std::get_if<CatalogEntry>(&l.record))
        if (e->model == model && e->image == image && e->video == video) return *e;
    return std::nullopt;
  }

 private:
  static Line parse_line(std::string_view raw) {
    const std::string_view t = detail::trim(raw);
    if (t.substr(0, kSensorPrefix.size()) == kSensorPrefix) return {parse_sensor_line(t), std::string(raw)};
    if (t.empty() || t.front() == '#') return {std::monostate{}, std::string(raw)};
    return {parse_catalog_entry(t), std::string(raw)};
  }

  void append(Line l) {
    lines_.push_back(std::move(l));
    final_newline_ = true;
  }

  std::vector<Line> lines_;
  bool final_newline_ = true;
};

using LookupResult = std::variant<CatalogEntry, SearchRange>;

// Catalog hit, or a freshly computed search range. On a miss, a sensor
// annotation with dims supplies the active-image aspect and, for uncropped
// low-resolution images without a known r1, the minimum possible r1.
inline LookupResult lookup_or_search(const CameraCatalog& catalog, std::string_view model, const MediaDims& image,
                                     const MediaDims& video) {
  if (auto hit = catalog.lookup(model, Resolution::of(image), Resolution::of(video))) return *hit;
  MediaDims img = image;
  std::optional<double> aspect;
  if (const auto s = catalog.sensor(model); s && s->dims) {
    const MediaDims full = s->dims->dims();
    aspect = full.aspect();
    if (!img.r1 && same_aspect(img.aspect(), *aspect) && img.rows <= full.rows && img.cols <= full.cols)
      img.r1 = minimum_r1(img, full);
  }
  return search_range(video, img, aspect);
}

}  // namespace prnu
