#pragma once

// Connected components, outer border following (Suzuki-Abe, outer borders
// only), maximum-contour selection and region filling.

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"

namespace wpcclean {

struct ComponentLabels {
  int width = 0;
  int height = 0;
  std::vector<int> labels;            // 0 = background, 1..count
  std::vector<std::size_t> sizes;     // sizes[k] is the size of label k + 1
  std::vector<PixelCoord> first_pixel;  // raster-first pixel of each component

  std::size_t count() const noexcept { return sizes.size(); }
  int at(int x, int y) const noexcept { return labels[std::size_t(y) * width + x]; }
};

inline ComponentLabels connected_components(const BinaryImage& img, int connectivity = 8) {
  if (connectivity != 4 && connectivity != 8) {
    throw Error(ErrorCode::InvalidConfig, "connectivity must be 4 or 8");
  }
  ComponentLabels cc;
  cc.width = img.width();
  cc.height = img.height();
  cc.labels.assign(img.pixel_count(), 0);

  static constexpr std::array<PixelCoord, 8> kNeighbors{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
  const std::size_t n_neighbors = connectivity == 8 ? 8 : 4;

  std::vector<PixelCoord> stack;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y) || cc.labels[std::size_t(y) * cc.width + x]) continue;
      const int label = static_cast<int>(cc.sizes.size()) + 1;
      std::size_t size = 0;
      cc.labels[std::size_t(y) * cc.width + x] = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        ++size;
        for (std::size_t k = 0; k < n_neighbors; ++k) {
          const int nx = p.x + kNeighbors[k].x, ny = p.y + kNeighbors[k].y;
          if (!img.get(nx, ny)) continue;
          int& slot = cc.labels[std::size_t(ny) * cc.width + nx];
          if (slot) continue;
          slot = label;
          stack.push_back({nx, ny});
        }
      }
      cc.sizes.push_back(size);
      cc.first_pixel.push_back({x, y});
    }
  }
  return cc;
}

// One closed outer border, consecutive points 8-adjacent. `area` is the
// pixel count of the filled border (component plus enclosed holes).
struct Contour {
  std::vector<PixelCoord> points;
  std::size_t area = 0;
};

struct RegionMask {
  BinaryImage mask;

  std::size_t area() const noexcept { return mask.count(); }
};

namespace detail {

// Clockwise on screen (y grows downward): E, SE, S, SW, W, NW, N, NE.
inline constexpr std::array<PixelCoord, 8> kChain{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

inline int chain_direction(PixelCoord from, PixelCoord to) {
  const int dx = to.x - from.x, dy = to.y - from.y;
  for (int d = 0; d < 8; ++d) {
    if (kChain[d].x == dx && kChain[d].y == dy) return d;
  }
  return -1;
}

}  // namespace detail

// Traces the outer border of the 8-connected component whose raster-first
// pixel is `start` (its west and northern neighbours are background).
inline std::vector<PixelCoord> trace_outer_border(const BinaryImage& img, PixelCoord start) {
  using detail::kChain;
  auto step = [&](PixelCoord p, int d) { return PixelCoord{p.x + kChain[d].x, p.y + kChain[d].y}; };

  std::vector<PixelCoord> trace;
  // Clockwise search around the start, beginning at its west neighbour.
  PixelCoord first{};
  bool found = false;
  for (int k = 0; k < 8; ++k) {
    const PixelCoord q = step(start, (4 + k) % 8);
    if (img.get(q.x, q.y)) {
      first = q;
      found = true;
      break;
    }
  }
  trace.push_back(start);
  if (!found) return trace;

  PixelCoord prev = first;
  PixelCoord cur = start;
  for (;;) {
    // Counterclockwise search around `cur`, starting just after `prev`.
    const int back = detail::chain_direction(cur, prev);
    PixelCoord next = prev;
    for (int k = 1; k <= 8; ++k) {
      const PixelCoord q = step(cur, (back - k + 16) % 8);
      if (img.get(q.x, q.y)) {
        next = q;
        break;
      }
    }
    if (next == start && cur == first) break;
    prev = cur;
    cur = next;
    trace.push_back(cur);
  }
  return trace;
}

namespace detail {

// Even-odd fill of the closed polygon through the trace's pixel centres,
// plus the trace pixels themselves, written into `out` at an offset.
// Crossings use the half-open rule (edge covers rows [min y, max y)).
inline void fill_trace(const std::vector<PixelCoord>& trace, BinaryImage& out, int off_x = 0,
                       int off_y = 0) {
  if (trace.empty()) return;
  int y_lo = trace.front().y, y_hi = trace.front().y;
  for (const auto& p : trace) {
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  std::vector<std::vector<int>> crossings(static_cast<std::size_t>(y_hi - y_lo + 1));
  const std::size_t n = trace.size();
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const PixelCoord a = trace[i];
    const PixelCoord b = trace[(i + 1) % n];
    if (a.y == b.y) continue;
    // Adjacent pixels differ by one row, so the crossing is the upper endpoint.
    const PixelCoord& top = a.y < b.y ? a : b;
    crossings[std::size_t(top.y - y_lo)].push_back(top.x);
  }
  for (std::size_t r = 0; r < crossings.size(); ++r) {
    auto& xs = crossings[r];
    std::sort(xs.begin(), xs.end());
    const int y = y_lo + static_cast<int>(r) - off_y;
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      for (int x = xs[k]; x <= xs[k + 1]; ++x) out.set(x - off_x, y);
    }
  }
  for (const auto& p : trace) out.set(p.x - off_x, p.y - off_y);
}

inline std::size_t filled_area(const std::vector<PixelCoord>& trace) {
  int x_lo = trace.front().x, x_hi = x_lo, y_lo = trace.front().y, y_hi = y_lo;
  for (const auto& p : trace) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  }
  BinaryImage local(x_hi - x_lo + 1, y_hi - y_lo + 1);
  fill_trace(trace, local, x_lo, y_lo);
  return local.count();
}

}  // namespace detail

inline RegionMask fill_region(const Contour& c, int width, int height) {
  RegionMask region{BinaryImage(width, height)};
  for (const auto& p : c.points) {
    if (!region.mask.in_bounds(p.x, p.y)) {
      throw Error(ErrorCode::OutOfCanvas, "contour point outside the canvas");
    }
  }
  detail::fill_trace(c.points, region.mask);
  return region;
}

// Outer border of the component with the largest filled area; ties go to the
// component whose first pixel comes first in raster order.
inline Contour max_contour(const BinaryImage& img) {
  const auto cc = connected_components(img, 8);
  if (cc.count() == 0) throw Error(ErrorCode::EmptyImage, "image has no foreground");
  Contour best;
  for (std::size_t k = 0; k < cc.count(); ++k) {
    auto trace = trace_outer_border(img, cc.first_pixel[k]);
    // The filled area never exceeds the bounding box.
    if (!best.points.empty()) {
      auto [xl, xh] = std::minmax_element(trace.begin(), trace.end(),
                                          [](auto a, auto b) { return a.x < b.x; });
      auto [yl, yh] = std::minmax_element(trace.begin(), trace.end(),
                                          [](auto a, auto b) { return a.y < b.y; });
      const auto box = std::size_t(xh->x - xl->x + 1) * std::size_t(yh->y - yl->y + 1);
      if (box <= best.area) continue;
    }
    const std::size_t area = detail::filled_area(trace);
    if (best.points.empty() || area > best.area) {
      best.points = std::move(trace);
      best.area = area;
    }
  }
  return best;
}

inline bool contains(const RegionMask& region, PixelCoord p) {
  if (!region.mask.in_bounds(p.x, p.y)) {
    throw Error(ErrorCode::OutOfCanvas, "pixel outside the canvas");
  }
  return region.mask.at(p.x, p.y);
}

}  // namespace wpcclean
