#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "prnu_mixed/catalog.hpp"
#include "prnu_mixed/error.hpp"

namespace prnu {

// Stills to build fingerprints from. One line per file:
//   <path>, <role>, <camera-id>, <W>x<H>
// role is train-image, test-image or video-frames. Relative paths are
// resolved against the manifest's directory. '#' starts a comment.
enum class ManifestRole { train_image, test_image, video_frames };

inline std::string to_string(ManifestRole r) {
  switch (r) {
    case ManifestRole::train_image: return "train-image";
    case ManifestRole::test_image: return "test-image";
    case ManifestRole::video_frames: break;
  }
  return "video-frames";
}

inline ManifestRole parse_manifest_role(std::string_view s) {
  if (s == "train-image") return ManifestRole::train_image;
  if (s == "test-image") return ManifestRole::test_image;
  if (s == "video-frames") return ManifestRole::video_frames;
  throw FormatError("manifest: unknown role '" + std::string(s) + "'");
}

struct ManifestItem {
  std::filesystem::path path;
  ManifestRole role = ManifestRole::train_image;
  std::string camera;
  Resolution dims;
};

struct ManifestGroup {
  std::string camera;
  ManifestRole role = ManifestRole::train_image;
  Resolution dims;
  std::vector<std::filesystem::path> paths;

  std::string id() const { return camera + "/" + to_string(role) + "/" + to_string(dims); }
};

inline std::vector<ManifestItem> parse_manifest(std::string_view text, const std::filesystem::path& base = {}) {
  std::vector<ManifestItem> out;
  std::set<std::filesystem::path> seen;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    if (detail::trim(line).empty()) continue;
    const std::string where = "manifest line " + std::to_string(lineno) + ": ";
    const auto f = detail::split_commas(line);
    if (f.size() != 4) throw FormatError(where + "expected 4 comma-separated fields");
    ManifestItem item;
    const std::filesystem::path p{std::string(detail::trim(f[0]))};
    item.path = p.is_absolute() || base.empty() ? p : base / p;
    try {
      item.role = parse_manifest_role(detail::trim(f[1]));
      item.camera = std::string(detail::trim(f[2]));
      item.dims = parse_resolution(f[3]);
    } catch (const FormatError& e) {
      throw FormatError(where + e.what());
    }
    if (item.camera.empty()) throw FormatError(where + "empty camera id");
    if (!seen.insert(item.path.lexically_normal()).second)
      throw FormatError(where + "duplicate path " + item.path.string());
    out.push_back(std::move(item));
  }
  return out;
}

// Groups by (camera, role, declared resolution), in first-appearance order.
inline std::vector<ManifestGroup> group_manifest(const std::vector<ManifestItem>& items) {
  std::vector<ManifestGroup> groups;
  std::map<std::tuple<std::string, int, std::size_t, std::size_t>, std::size_t> index;
  for (const auto& it : items) {
    const auto key = std::make_tuple(it.camera, static_cast<int>(it.role), it.dims.width, it.dims.height);
    auto [where, fresh] = index.emplace(key, groups.size());
    if (fresh) groups.push_back({it.camera, it.role, it.dims, {}});
    groups[where->second].paths.push_back(it.path);
  }
  return groups;
}

}  // namespace prnu
