#pragma once

// PGM (P5) and PNG writers. Foreground is drawn black (0) on white (255).

#include <zlib.h>

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/scada_io.hpp"

namespace wpcclean {

enum class ImageFormat { PGM, PNG };

inline ImageFormat image_format_from_string(std::string_view name) {
  const std::string n = detail::lower(name);
  if (n == "pgm") return ImageFormat::PGM;
  if (n == "png") return ImageFormat::PNG;
  throw Error(ErrorCode::UnsupportedFormat, "unsupported image format '" + std::string(name) + "'");
}

// Format from a file name's extension.
inline ImageFormat image_format_for_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) {
    throw Error(ErrorCode::UnsupportedFormat, "no extension on '" + std::string(path) + "'");
  }
  return image_format_from_string(path.substr(dot + 1));
}

struct Rgb {
  std::uint8_t r = 255, g = 255, b = 255;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Dense 8-bit RGB canvas, used for label overlays.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  RgbImage(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}
  Rgb& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  const Rgb& at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

namespace detail {

inline void put_be32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>((v >> 24) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>(v & 0xff));
}

inline void png_chunk(std::ostream& out, const char type[4], const std::string& data) {
  std::string buf;
  put_be32(buf, static_cast<std::uint32_t>(data.size()));
  buf.append(type, 4);
  buf += data;
  const auto crc = ::crc32(::crc32(0L, Z_NULL, 0),
                           reinterpret_cast<const Bytef*>(buf.data() + 4),
                           static_cast<uInt>(buf.size() - 4));
  put_be32(buf, static_cast<std::uint32_t>(crc));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

// `color_type` 0 = greyscale (1 byte/px), 2 = RGB (3 bytes/px). `raw` holds
// filter-type-prefixed scanlines.
inline void write_png(std::ostream& out, int width, int height, int color_type,
                      const std::vector<std::uint8_t>& raw) {
  static constexpr unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.write(reinterpret_cast<const char*>(kSignature), 8);

  std::string ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(width));
  put_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(static_cast<char>(color_type));
  ihdr.push_back(0);  // deflate
  ihdr.push_back(0);  // adaptive filtering
  ihdr.push_back(0);  // no interlace
  png_chunk(out, "IHDR", ihdr);

  uLongf packed_size = ::compressBound(static_cast<uLong>(raw.size()));
  std::string packed(packed_size, '\0');
  if (::compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size, raw.data(),
                  static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::Io, "zlib compression failed");
  }
  packed.resize(packed_size);
  png_chunk(out, "IDAT", packed);
  png_chunk(out, "IEND", {});
}

}  // namespace detail

inline void write_image(const BinaryImage& img, std::ostream& out, ImageFormat format) {
  const int w = img.width(), h = img.height();
  switch (format) {
    case ImageFormat::PGM: {
      out << "P5\n" << w << ' ' << h << "\n255\n";
      std::vector<char> payload(img.pixel_count());
      for (std::size_t i = 0; i < payload.size(); ++i) {
        payload[i] = img.bits()[i] ? char(0) : char(255);
      }
      out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
      break;
    }
    case ImageFormat::PNG: {
      std::vector<std::uint8_t> raw;
      raw.reserve(std::size_t(h) * (w + 1));
      for (int y = 0; y < h; ++y) {
        raw.push_back(0);
        const auto* row = img.row(y);
        for (int x = 0; x < w; ++x) raw.push_back(row[x] ? 0 : 255);
      }
      detail::write_png(out, w, h, 0, raw);
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedFormat, "unknown image format");
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing image");
}

inline void write_image(const RgbImage& img, std::ostream& out) {
  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(img.height) * (3 * img.width + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    for (int x = 0; x < img.width; ++x) {
      const Rgb& c = img.at(x, y);
      raw.insert(raw.end(), {c.r, c.g, c.b});
    }
  }
  detail::write_png(out, img.width, img.height, 2, raw);
  if (!out) throw Error(ErrorCode::Io, "failed writing image");
}

}  // namespace wpcclean
