#pragma once

// Raw frame files (.prw):
//   0  'P' 'R' 'W'
//   3  u8   Bayer pattern (0 RGGB, 1 BGGR, 2 GRBG, 3 GBRG)
//   4  u16  rows
//   6  u16  cols
//   8  u16  boundary top, bottom, left, right (4 x u16)
//   16 f32  rows*cols samples, row-major
//
// Fingerprint files (.fe):
//   0  'P' 'R' 'F' 'P'
//   4  u16  version (1)
//   6  u8   provenance (0 image FE, 1 video FE)
//   7  u8   denoiser id length L
//   8  u32  rows
//   12 u32  cols
//   16 u32  count
//   20 L bytes denoiser id (ASCII)
//   20+L f32 rows*cols values, row-major
//
// All integers and floats little-endian.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "prnu_mixed/binary_io.hpp"
#include "prnu_mixed/frame.hpp"
#include "prnu_mixed/noise.hpp"

namespace prnu {

inline std::vector<std::uint8_t> encode_raw_frame(const RawFrame& f) {
  constexpr auto kMax = std::numeric_limits<std::uint16_t>::max();
  if (f.rows() > kMax || f.cols() > kMax) throw FormatError("raw frame too large for the file format");
  std::vector<std::uint8_t> out = {'P', 'R', 'W', static_cast<std::uint8_t>(f.pattern())};
  detail::put_u16(out, static_cast<std::uint16_t>(f.rows()));
  detail::put_u16(out, static_cast<std::uint16_t>(f.cols()));
  for (std::size_t m : {f.boundary().top, f.boundary().bottom, f.boundary().left, f.boundary().right})
    detail::put_u16(out, static_cast<std::uint16_t>(m));
  out.reserve(out.size() + 4 * f.rows() * f.cols());
  for (double v : f.samples().values()) detail::put_f32(out, static_cast<float>(v));
  return out;
}

inline RawFrame decode_raw_frame(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes, "raw frame");
  if (in.str(3) != "PRW") throw FormatError("raw frame: bad magic");
  const std::uint8_t pat = in.u8();
  if (pat > 3) throw FormatError("raw frame: unknown Bayer pattern id " + std::to_string(pat));
  const std::size_t rows = in.u16(), cols = in.u16();
  Margins m;
  m.top = in.u16();
  m.bottom = in.u16();
  m.left = in.u16();
  m.right = in.u16();
  in.need(4 * rows * cols);
  PlaneD samples(rows, cols);
  for (double& v : samples.values()) v = in.f32();
  if (in.remaining() != 0) throw FormatError("raw frame: trailing bytes");
  try {
    return RawFrame(std::move(samples), static_cast<BayerPattern>(pat), m);
  } catch (const Error& e) {
    throw FormatError(std::string("raw frame: ") + e.what());
  }
}

inline void write_raw_frame(const std::filesystem::path& path, const RawFrame& f) {
  detail::write_file(path, encode_raw_frame(f));
}

inline RawFrame read_raw_frame(const std::filesystem::path& path) { return decode_raw_frame(detail::read_file(path)); }

inline std::vector<std::uint8_t> encode_fingerprint(const Fingerprint& fp) {
  if (fp.denoiser_id.size() > 255) throw FormatError("denoiser id longer than 255 bytes");
  std::vector<std::uint8_t> out = {'P', 'R', 'F', 'P'};
  detail::put_u16(out, 1);
  out.push_back(static_cast<std::uint8_t>(fp.provenance));
  out.push_back(static_cast<std::uint8_t>(fp.denoiser_id.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(fp.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(fp.cols()));
  detail::put_u32(out, static_cast<std::uint32_t>(fp.count));
  out.insert(out.end(), fp.denoiser_id.begin(), fp.denoiser_id.end());
  out.reserve(out.size() + 4 * fp.plane.size());
  for (double v : fp.plane.values()) detail::put_f32(out, static_cast<float>(v));
  return out;
}

inline Fingerprint decode_fingerprint(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader in(bytes, "fingerprint");
  if (in.str(4) != "PRFP") throw FormatError("fingerprint: bad magic");
  if (const auto v = in.u16(); v != 1) throw FormatError("fingerprint: unsupported version " + std::to_string(v));
  const std::uint8_t prov = in.u8();
  if (prov > 1) throw FormatError("fingerprint: unknown provenance " + std::to_string(prov));
  const std::size_t id_len = in.u8();
  const std::size_t rows = in.u32(), cols = in.u32(), count = in.u32();
  if (rows == 0 || cols == 0 || count == 0) throw FormatError("fingerprint: empty dimensions or zero count");
  std::string id = in.str(id_len);
  in.need(4 * rows * cols);
  PlaneD plane(rows, cols);
  for (double& v : plane.values()) {
    v = in.f32();
    if (!std::isfinite(v)) throw FormatError("fingerprint: non-finite value");
  }
  if (in.remaining() != 0) throw FormatError("fingerprint: trailing bytes");
  return {std::move(plane), count, static_cast<Provenance>(prov), std::move(id)};
}

inline void write_fingerprint(const std::filesystem::path& path, const Fingerprint& fp) {
  detail::write_file(path, encode_fingerprint(fp));
}

inline Fingerprint read_fingerprint(const std::filesystem::path& path) {
  return decode_fingerprint(detail::read_file(path));
}

}  // namespace prnu
