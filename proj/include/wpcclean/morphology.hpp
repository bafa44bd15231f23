#pragma once

// Binary erosion, dilation and opening with square structuring elements.
// Pixels beyond the canvas are background for erosion and are dropped by
// dilation.

#include <algorithm>
#include <string>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"

namespace wpcclean {

inline constexpr int kDefaultMaxSe = 9;

// n x n all-ones mask; (ox, oy) is the origin's offset inside the mask.
struct StructuringElement {
  int n = 3;
  int ox = 1;
  int oy = 1;

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;
};

inline StructuringElement square_se(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidSize, "structuring element size must be >= 1");
  return {n, (n - 1) / 2, (n - 1) / 2};
}

// Point reflection of the mask about its origin.
inline StructuringElement reflect(const StructuringElement& se) {
  return {se.n, se.n - 1 - se.ox, se.n - 1 - se.oy};
}

namespace detail {

// One separable pass. For every pixel p the window covers coordinates
// [p + lo, p + lo + len - 1] along the chosen axis; out-of-canvas samples
// count as background. With `require_all` the result is 1 when the whole
// window is foreground, otherwise when any sample is.
inline BinaryImage window_pass(const BinaryImage& in, int lo, int len, bool horizontal,
                               bool require_all) {
  const int w = in.width(), h = in.height();
  BinaryImage out(w, h);
  const int extent = horizontal ? w : h;
  const int lines = horizontal ? h : w;
  std::vector<int> prefix(static_cast<std::size_t>(extent) + 1);
  for (int line = 0; line < lines; ++line) {
    prefix[0] = 0;
    for (int i = 0; i < extent; ++i) {
      const bool bit = horizontal ? in.at(i, line) : in.at(line, i);
      prefix[i + 1] = prefix[i] + (bit ? 1 : 0);
    }
    for (int i = 0; i < extent; ++i) {
      int a = i + lo;
      int b = i + lo + len - 1;
      bool on;
      if (require_all) {
        on = a >= 0 && b < extent && prefix[b + 1] - prefix[a] == len;
      } else {
        a = std::max(a, 0);
        b = std::min(b, extent - 1);
        on = a <= b && prefix[b + 1] - prefix[a] > 0;
      }
      if (on) horizontal ? out.set(i, line) : out.set(line, i);
    }
  }
  return out;
}

}  // namespace detail

// Pixel p survives iff A(p + b - origin) is foreground for every b in the mask.
inline BinaryImage erode(const BinaryImage& a, const StructuringElement& se) {
  auto rows = detail::window_pass(a, -se.ox, se.n, true, true);
  return detail::window_pass(rows, -se.oy, se.n, false, true);
}

// Pixel p is set iff A(p - b + origin) is foreground for some b in the mask.
inline BinaryImage dilate(const BinaryImage& a, const StructuringElement& se) {
  auto rows = detail::window_pass(a, se.ox - (se.n - 1), se.n, true, false);
  return detail::window_pass(rows, se.oy - (se.n - 1), se.n, false, false);
}

inline BinaryImage open(const BinaryImage& a, const StructuringElement& se) {
  return dilate(erode(a, se), se);
}

}  // namespace wpcclean
