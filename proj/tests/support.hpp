#pragma once

// Helpers shared by the test binaries: random images, independent decoders
// for the emitted image formats, and small dataset builders.

#include <zlib.h>

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/scada_io.hpp"

namespace testing_support {

using wpcclean::BinaryImage;

inline BinaryImage random_image(int w, int h, double density, std::mt19937_64& rng) {
  BinaryImage img(w, h);
  std::bernoulli_distribution on(density);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.set(x, y, on(rng));
  }
  return img;
}

// Random union of filled rectangles: blobby shapes with holes and thin bits.
inline BinaryImage random_blobs(int w, int h, int rects, std::mt19937_64& rng) {
  BinaryImage img(w, h);
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), side(1, std::max(2, w / 4));
  for (int r = 0; r < rects; ++r) {
    const int x0 = px(rng), y0 = py(rng), rw = side(rng), rh = side(rng);
    for (int y = y0; y < std::min(h, y0 + rh); ++y) {
      for (int x = x0; x < std::min(w, x0 + rw); ++x) img.set(x, y);
    }
  }
  return img;
}

inline BinaryImage from_rows(const std::vector<std::string>& rows) {
  BinaryImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) img.set(x, y, rows[std::size_t(y)][std::size_t(x)] == '#');
  }
  return img;
}

struct Decoded {
  int width = 0, height = 0, channels = 0;
  std::vector<std::uint8_t> pixels;  // row-major, channels interleaved
};

inline Decoded decode_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || maxval != 255) throw std::runtime_error("not an 8-bit P5 file");
  in.get();  // single whitespace after maxval
  Decoded d{w, h, 1, std::vector<std::uint8_t>(std::size_t(w) * h)};
  in.read(reinterpret_cast<char*>(d.pixels.data()), std::streamsize(d.pixels.size()));
  if (in.gcount() != std::streamsize(d.pixels.size())) throw std::runtime_error("short payload");
  return d;
}

inline std::uint32_t be32(const std::string& s, std::size_t at) {
  return (std::uint32_t(std::uint8_t(s[at])) << 24) | (std::uint32_t(std::uint8_t(s[at + 1])) << 16) |
         (std::uint32_t(std::uint8_t(s[at + 2])) << 8) | std::uint32_t(std::uint8_t(s[at + 3]));
}

// Minimal PNG reader: 8-bit greyscale or RGB, non-interlaced, any filter on
// each scanline. Chunk CRCs are checked.
inline Decoded decode_png(const std::string& bytes) {
  static const std::string sig("\x89PNG\r\n\x1a\n", 8);
  if (bytes.compare(0, 8, sig) != 0) throw std::runtime_error("bad signature");
  Decoded d;
  std::string idat;
  bool ended = false;
  for (std::size_t at = 8; at + 12 <= bytes.size() && !ended;) {
    const std::uint32_t len = be32(bytes, at);
    const std::string type = bytes.substr(at + 4, 4);
    const std::string data = bytes.substr(at + 8, len);
    const std::uint32_t crc = be32(bytes, at + 8 + len);
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + at + 4), uInt(len + 4));
    if (c != crc) throw std::runtime_error("crc mismatch in " + type);
    if (type == "IHDR") {
      d.width = int(be32(data, 0));
      d.height = int(be32(data, 4));
      if (data[8] != 8) throw std::runtime_error("only 8-bit depth");
      d.channels = data[9] == 0 ? 1 : data[9] == 2 ? 3 : 0;
      if (!d.channels || data[12] != 0) throw std::runtime_error("unsupported colour type or interlace");
    } else if (type == "IDAT") {
      idat += data;
    } else if (type == "IEND") {
      ended = true;
    }
    at += 12 + len;
  }
  if (!ended) throw std::runtime_error("missing IEND");
  const std::size_t stride = std::size_t(d.width) * d.channels;
  std::vector<std::uint8_t> raw(d.height * (stride + 1));
  uLongf raw_len = raw.size();
  if (uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()), idat.size()) != Z_OK ||
      raw_len != raw.size()) {
    throw std::runtime_error("bad zlib stream");
  }
  d.pixels.resize(d.height * stride);
  const int bpp = d.channels;
  for (int y = 0; y < d.height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* src = &raw[y * (stride + 1) + 1];
    std::uint8_t* dst = &d.pixels[y * stride];
    const std::uint8_t* up = y ? &d.pixels[(y - 1) * stride] : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= std::size_t(bpp) ? dst[i - bpp] : 0;
      const int b = up ? up[i] : 0;
      const int c = (up && i >= std::size_t(bpp)) ? up[i - bpp] : 0;
      int pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = a; break;
        case 2: pred = b; break;
        case 3: pred = (a + b) / 2; break;
        case 4: {
          const int p = a + b - c, pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          break;
        }
        default: throw std::runtime_error("bad filter");
      }
      dst[i] = std::uint8_t(src[i] + pred);
    }
  }
  return d;
}

inline wpcclean::Dataset make_dataset(const std::vector<std::pair<double, double>>& vp,
                                      wpcclean::TurbineSpec spec = {}) {
  wpcclean::Dataset ds;
  ds.spec = spec;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    ds.points.push_back({std::to_string(i), vp[i].first, vp[i].second, wpcclean::Label::Unlabeled});
  }
  return ds;
}

}  // namespace testing_support
