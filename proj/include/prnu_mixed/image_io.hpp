#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prnu_mixed/binary_io.hpp"
#include "prnu_mixed/file_formats.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/demosaic.hpp"

namespace prnu {

namespace detail {

// Netpbm P2/P3/P5/P6, 8 or 16 bit. Grey images are replicated into all
// three channels.
inline RgbImage decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) { return FormatError(name + ": " + why); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&]() -> std::size_t {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw fail("malformed header");
    std::size_t v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P') throw fail("not a PNM file");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') throw fail("unsupported PNM variant");
  pos = 2;
  const std::size_t cols = number(), rows = number(), maxval = number();
  if (rows == 0 || cols == 0 || maxval == 0 || maxval > 65535) throw fail("bad dimensions or maxval");
  const bool color = kind == '3' || kind == '6';
  const bool binary = kind == '5' || kind == '6';
  const std::size_t channels = color ? 3 : 1;
  RgbImage img(rows, cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) ++pos;  // single whitespace byte before the raster
  const std::size_t bps = maxval > 255 ? 2 : 1;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t ch = 0; ch < channels; ++ch) {
        std::size_t v;
        if (binary) {
          if (pos + bps > bytes.size()) throw fail("truncated raster");
          v = bps == 2 ? (static_cast<std::size_t>(bytes[pos]) << 8) | bytes[pos + 1] : bytes[pos];
          pos += bps;
        } else {
          v = number();
        }
        const double x = std::min(1.0, static_cast<double>(v) * scale);
        if (color) {
          img.planes()[ch](r, c) = x;
        } else {
          for (auto& p : img.planes()) p(r, c) = x;
        }
      }
  return img;
}

inline RgbImage decode_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw FormatError(path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;  // stored values, no gamma conversion
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError(path.string() + ": " + image.message);
  }
  RgbImage img(image.height, image.width);
  for (std::size_t r = 0; r < image.height; ++r)
    for (std::size_t c = 0; c < image.width; ++c)
      for (std::size_t ch = 0; ch < 3; ++ch)
        img.planes()[ch](r, c) = buf[(r * image.width + c) * 3 + ch] / 255.0;
  return img;
}

inline std::string lower_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

}  // namespace detail

// Decoded stills: PNG, PGM/PPM, or raw frames (.prw, demosaiced here).
inline RgbImage read_image(const std::filesystem::path& path) {
  const std::string ext = detail::lower_extension(path);
  if (ext == ".png") return detail::decode_png(path);
  if (ext == ".prw") return demosaic_bilinear(read_raw_frame(path));
  return detail::decode_pnm(detail::read_file(path), path.string());
}

// 16-bit binary PPM of an RGB image clipped to [0, 1].
inline void write_ppm16(const std::filesystem::path& path, const RgbImage& img) {
  std::string header = "P6\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n65535\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.rows() * img.cols() * 6);
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c)
      for (const auto& p : img.planes()) {
        const auto v = static_cast<std::uint16_t>(std::clamp(p(r, c), 0.0, 1.0) * 65535.0 + 0.5);
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
      }
  detail::write_file(path, out);
}

}  // namespace prnu
