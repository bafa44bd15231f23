#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "wpcclean/error.hpp"

namespace wpcclean {

struct PixelCoord {
  int x = 0;  // column, wind-speed axis
  int y = 0;  // row, power axis (grows downward)

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
  friend auto operator<=>(const PixelCoord& a, const PixelCoord& b) {
    // raster order: row first, then column
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

// W x H bit grid, row-major, one byte per pixel holding 0 or 1.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidSize, "image dimensions must be >= 1");
    }
    bits_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return bits_.size(); }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  // Zero outside the canvas.
  bool get(int x, int y) const noexcept { return in_bounds(x, y) && at(x, y); }
  void set(int x, int y, bool on = true) noexcept { bits_[index(x, y)] = on ? 1 : 0; }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }
  bool empty_foreground() const noexcept {
    return std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
  }

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::vector<std::uint8_t>& bits() noexcept { return bits_; }

  const std::uint8_t* row(int y) const noexcept {
    return bits_.data() + static_cast<std::size_t>(y) * width_;
  }
  std::uint8_t* row(int y) noexcept { return bits_.data() + static_cast<std::size_t>(y) * width_; }

  bool same_shape(const BinaryImage& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }

  // Every foreground pixel of *this is also foreground in `o`.
  bool subset_of(const BinaryImage& o) const noexcept {
    if (!same_shape(o)) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] && !o.bits_[i]) return false;
    }
    return true;
  }

  BinaryImage complement() const {
    BinaryImage out = *this;
    for (auto& b : out.bits_) b = b ? 0 : 1;
    return out;
  }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace wpcclean
