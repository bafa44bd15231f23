#pragma once

// Direct-to-binary rasterization of the wind power scatter and the affine
// point <-> pixel mapping used both to draw and to mark points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/scada_io.hpp"

namespace wpcclean {

inline constexpr int kDefaultWidth = 432;
inline constexpr int kDefaultHeight = 288;
inline constexpr int kDefaultStamp = 2;

// Frozen mapping between (v, P) and canvas pixels. The plotted area is
// [x_min, x_max] x [y_min, y_max]; a point's stamp is anchored at its mapped
// pixel and extends `stamp` pixels right and down.
struct RasterTransform {
  double v_min = 0, v_max = 1;
  double P_min = 0, P_max = 1;
  int x_min = 0, x_max = 0;
  int y_min = 0, y_max = 0;
  double dx = 0;  // pixels per m/s
  double dy = 0;  // pixels per kW
  int stamp = kDefaultStamp;
  int width = kDefaultWidth;
  int height = kDefaultHeight;

  static RasterTransform from_ranges(double v_min, double v_max, double P_min, double P_max,
                                     int width, int height, int stamp) {
    if (stamp < 1 || width < stamp || height < stamp) {
      throw Error(ErrorCode::InvalidSize, "canvas must be at least stamp x stamp, stamp >= 1");
    }
    if (!(v_max > v_min)) throw Error(ErrorCode::DegenerateRange, "wind speed range is empty");
    if (!(P_max > P_min)) throw Error(ErrorCode::DegenerateRange, "power range is empty");
    RasterTransform t;
    t.v_min = v_min;
    t.v_max = v_max;
    t.P_min = P_min;
    t.P_max = P_max;
    t.width = width;
    t.height = height;
    t.stamp = stamp;
    t.x_min = 0;
    t.x_max = width - stamp;
    t.y_min = 0;
    t.y_max = height - stamp;
    t.dx = (t.x_max - t.x_min) / (v_max - v_min);
    t.dy = (t.y_max - t.y_min) / (P_max - P_min);
    return t;
  }

  friend bool operator==(const RasterTransform&, const RasterTransform&) = default;
};

// Ranges come from every point not already labeled Type1.
inline RasterTransform build_transform(std::span<const ScadaPoint> points, int width, int height,
                                       int stamp) {
  double v_lo = std::numeric_limits<double>::infinity(), v_hi = -v_lo;
  double p_lo = v_lo, p_hi = -v_lo;
  bool any = false;
  for (const auto& p : points) {
    if (p.label == Label::Type1) continue;
    any = true;
    v_lo = std::min(v_lo, p.v);
    v_hi = std::max(v_hi, p.v);
    p_lo = std::min(p_lo, p.P);
    p_hi = std::max(p_hi, p.P);
  }
  if (!any) throw Error(ErrorCode::EmptyDataset, "no points left to rasterize");
  return RasterTransform::from_ranges(v_lo, v_hi, p_lo, p_hi, width, height, stamp);
}

inline RasterTransform build_transform(const Dataset& ds, int width = kDefaultWidth,
                                       int height = kDefaultHeight, int stamp = kDefaultStamp) {
  return build_transform(std::span<const ScadaPoint>(ds.points), width, height, stamp);
}

// Nearest integer, ties away from zero, clamped to the plotted area so the
// whole stamp stays on the canvas.
inline PixelCoord map_point(double v, double P, const RasterTransform& t) {
  const double fx = t.x_min + (v - t.v_min) * t.dx;
  const double fy = t.y_max - (P - t.P_min) * t.dy;
  auto to_pixel = [](double f, int lo, int hi) {
    if (std::isnan(f)) return lo;
    if (f <= lo) return lo;
    if (f >= hi) return hi;
    return static_cast<int>(std::lround(f));
  };
  return {to_pixel(fx, t.x_min, t.x_max), to_pixel(fy, t.y_min, t.y_max)};
}

inline PixelCoord map_point(const ScadaPoint& p, const RasterTransform& t) {
  return map_point(p.v, p.P, t);
}

inline void stamp_block(BinaryImage& img, PixelCoord c, int stamp) {
  const int x_end = std::min(c.x + stamp, img.width());
  const int y_end = std::min(c.y + stamp, img.height());
  for (int y = std::max(c.y, 0); y < y_end; ++y) {
    for (int x = std::max(c.x, 0); x < x_end; ++x) img.set(x, y);
  }
}

// True when any pixel of the stamp block anchored at `c` is foreground.
inline bool stamp_intersects(const BinaryImage& img, PixelCoord c, int stamp) {
  for (int y = c.y; y < c.y + stamp; ++y) {
    for (int x = c.x; x < c.x + stamp; ++x) {
      if (img.get(x, y)) return true;
    }
  }
  return false;
}

// Stamps every point that is not labeled Type1.
inline BinaryImage rasterize(std::span<const ScadaPoint> points, const RasterTransform& t) {
  BinaryImage img(t.width, t.height);
  for (const auto& p : points) {
    if (p.label == Label::Type1) continue;
    stamp_block(img, map_point(p, t), t.stamp);
  }
  return img;
}

inline BinaryImage rasterize(const Dataset& ds, const RasterTransform& t) {
  return rasterize(std::span<const ScadaPoint>(ds.points), t);
}

}  // namespace wpcclean
