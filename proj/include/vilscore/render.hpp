#pragma once

// Colorized frame rendering for inspection. A palette is a list of
// (threshold, RGB) entries with strictly increasing thresholds; each pixel
// takes the color of the highest entry whose threshold <= value. Output is
// binary PPM (P6) or PNG (8-bit RGB, stored-deflate zlib stream).

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core.hpp"
#include "io.hpp"

namespace vilscore {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PaletteEntry {
  std::uint8_t threshold = 0;
  Rgb color;
};

using Palette = std::vector<PaletteEntry>;

// Black below the first precipitation boundary, then a green-to-magenta
// ramp keyed to the default level boundaries.
inline Palette default_palette() {
  return {
      {0, {0, 0, 0}},      {16, {30, 120, 40}},   {74, {60, 200, 60}},
      {133, {255, 230, 0}}, {160, {255, 150, 0}},  {181, {230, 30, 30}},
      {219, {255, 0, 255}},
  };
}

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // RGB triples, row-major

  Rgb at(int x, int y) const {
    std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
};

inline RgbImage render(const RadarFrame& frame, const Palette& palette) {
  if (palette.empty()) {
    throw std::invalid_argument("render: palette must not be empty");
  }
  for (std::size_t i = 1; i < palette.size(); ++i) {
    if (palette[i].threshold <= palette[i - 1].threshold) {
      throw std::invalid_argument("render: palette thresholds must be strictly increasing");
    }
  }
  RgbImage img;
  img.width = frame.width();
  img.height = frame.height();
  img.pixels.resize(frame.pixel_count() * 3);
  std::size_t out = 0;
  for (std::uint8_t v : frame.values()) {
    Rgb c{0, 0, 0};  // values below the first threshold render black
    for (const auto& entry : palette) {
      if (v >= entry.threshold) c = entry.color;
      else break;
    }
    img.pixels[out++] = c.r;
    img.pixels[out++] = c.g;
    img.pixels[out++] = c.b;
  }
  return img;
}

inline void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::string blob = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                     "\n255\n";
  blob.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  detail::write_all_bytes(path, blob.data(), blob.size());
}

namespace detail {

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t n, std::uint32_t crc = 0) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  crc ^= 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

inline std::uint32_t adler32(const std::uint8_t* data, std::size_t n) {
  std::uint32_t a = 1, b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a = (a + data[i]) % 65521u;
    b = (b + a) % 65521u;
  }
  return (b << 16) | a;
}

inline void append_u32_be(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(static_cast<std::uint8_t>(x >> 24));
  v.push_back(static_cast<std::uint8_t>(x >> 16));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
  v.push_back(static_cast<std::uint8_t>(x));
}

inline void append_png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                             const std::vector<std::uint8_t>& payload) {
  append_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  std::uint32_t crc = crc32(out.data() + type_pos, 4 + payload.size());
  append_u32_be(out, crc);
}

}  // namespace detail

// Minimal PNG encoder: one IDAT with stored (uncompressed) deflate blocks.
inline void write_png(const std::filesystem::path& path, const RgbImage& img) {
  // filter byte 0 before each scanline
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (1 + 3 * img.width));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(img.width) * 3);
  }

  // zlib wrapper around stored deflate blocks of at most 65535 bytes
  std::vector<std::uint8_t> z;
  z.push_back(0x78);
  z.push_back(0x01);
  std::size_t pos = 0;
  while (pos < raw.size() || raw.empty()) {
    std::size_t n = std::min<std::size_t>(65535, raw.size() - pos);
    bool final = pos + n == raw.size();
    z.push_back(final ? 1 : 0);
    z.push_back(static_cast<std::uint8_t>(n & 0xFF));
    z.push_back(static_cast<std::uint8_t>(n >> 8));
    z.push_back(static_cast<std::uint8_t>(~n & 0xFF));
    z.push_back(static_cast<std::uint8_t>((~n >> 8) & 0xFF));
    z.insert(z.end(), raw.begin() + pos, raw.begin() + pos + n);
    pos += n;
    if (raw.empty()) break;
  }
  detail::append_u32_be(z, detail::adler32(raw.data(), raw.size()));

  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  detail::append_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
  detail::append_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  detail::append_png_chunk(out, "IHDR", ihdr);
  detail::append_png_chunk(out, "IDAT", z);
  detail::append_png_chunk(out, "IEND", {});
  detail::write_all_bytes(path, out.data(), out.size());
}

inline void write_image(const std::filesystem::path& path, const RgbImage& img) {
  auto ext = path.extension().string();
  if (ext == ".ppm") return write_ppm(path, img);
  if (ext == ".png") return write_png(path, img);
  throw IoError(IoErrorKind::UnknownFormat, path.string() + ": unknown image format " + ext);
}

// Palette file: JSON array of [threshold, [r, g, b]] entries.
inline Palette read_palette(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw IoError(IoErrorKind::MalformedHeader, path.string() + ": palette must be a JSON array");
  }
  Palette p;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[1].is_array() || item[1].size() != 3) {
      throw IoError(IoErrorKind::MalformedHeader,
                    path.string() + ": palette entries are [threshold, [r, g, b]]");
    }
    PaletteEntry e;
    e.threshold = static_cast<std::uint8_t>(item[0].get<int>());
    e.color = {static_cast<std::uint8_t>(item[1][0].get<int>()),
               static_cast<std::uint8_t>(item[1][1].get<int>()),
               static_cast<std::uint8_t>(item[1][2].get<int>())};
    p.push_back(e);
  }
  return p;
}

}  // namespace vilscore
