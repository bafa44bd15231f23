#pragma once

// Central and normalized moments of a binary image, the seven Hu invariants,
// their signed-log transfer, and the max-relative-difference dissimilarity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"

namespace wpcclean {

inline constexpr double kMomentEpsilon = 1e-12;

struct HuVector {
  std::array<double, 7> I{};  // invariants I1..I7
  std::array<double, 7> m{};  // transferred values m1..m7
};

// All central moments up to order three, computed in one pass.
struct CentralMoments {
  double m00 = 0;
  double x_bar = 0, y_bar = 0;
  double mu20 = 0, mu11 = 0, mu02 = 0;
  double mu30 = 0, mu21 = 0, mu12 = 0, mu03 = 0;

  double mu(int p, int q) const {
    if (p == 0 && q == 0) return m00;
    if (p + q == 1) return 0.0;
    if (p == 2 && q == 0) return mu20;
    if (p == 1 && q == 1) return mu11;
    if (p == 0 && q == 2) return mu02;
    if (p == 3 && q == 0) return mu30;
    if (p == 2 && q == 1) return mu21;
    if (p == 1 && q == 2) return mu12;
    if (p == 0 && q == 3) return mu03;
    throw Error(ErrorCode::BadOrder, "only orders up to three are tabulated");
  }

  double eta(int p, int q) const {
    if (p + q < 2) throw Error(ErrorCode::BadOrder, "normalized moments need p + q >= 2");
    const double gamma = 1.0 + (p + q) / 2.0;
    return mu(p, q) / std::pow(m00, gamma);
  }
};

namespace detail {

// Top-left corner of the foreground bounding box. Coordinates are taken
// relative to it so a translated shape sums the very same numbers.
inline PixelCoord moment_origin(const BinaryImage& img) {
  PixelCoord o{img.width(), img.height()};
  for (int y = 0; y < img.height(); ++y) {
    const auto* row = img.row(y);
    for (int x = 0; x < img.width(); ++x) {
      if (!row[x]) continue;
      o.x = std::min(o.x, x);
      o.y = std::min(o.y, y);
    }
  }
  return o;
}

}  // namespace detail

inline CentralMoments compute_moments(const BinaryImage& img) {
  CentralMoments c;
  const PixelCoord o = detail::moment_origin(img);
  double sx = 0, sy = 0;
  for (int y = 0; y < img.height(); ++y) {
    const auto* row = img.row(y);
    for (int x = 0; x < img.width(); ++x) {
      if (!row[x]) continue;
      c.m00 += 1;
      sx += x - o.x;
      sy += y - o.y;
    }
  }
  if (c.m00 == 0) throw Error(ErrorCode::EmptyImage, "moments of an empty image");
  const double xr = sx / c.m00, yr = sy / c.m00;
  c.x_bar = o.x + xr;
  c.y_bar = o.y + yr;
  for (int y = 0; y < img.height(); ++y) {
    const auto* row = img.row(y);
    const double dy = (y - o.y) - yr;
    for (int x = 0; x < img.width(); ++x) {
      if (!row[x]) continue;
      const double dx = (x - o.x) - xr;
      c.mu20 += dx * dx;
      c.mu11 += dx * dy;
      c.mu02 += dy * dy;
      c.mu30 += dx * dx * dx;
      c.mu21 += dx * dx * dy;
      c.mu12 += dx * dy * dy;
      c.mu03 += dy * dy * dy;
    }
  }
  return c;
}

// Arbitrary-order central moment by direct summation about the centroid.
inline double central_moment(const BinaryImage& img, int p, int q) {
  if (p < 0 || q < 0) throw Error(ErrorCode::BadOrder, "moment orders must be non-negative");
  const auto c = compute_moments(img);
  if (p + q <= 3) return c.mu(p, q);
  const PixelCoord o = detail::moment_origin(img);
  const double xr = c.x_bar - o.x, yr = c.y_bar - o.y;
  double sum = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) sum += std::pow((x - o.x) - xr, p) * std::pow((y - o.y) - yr, q);
    }
  }
  return sum;
}

inline double normalized_moment(const BinaryImage& img, int p, int q) {
  if (p < 0 || q < 0 || p + q < 2) {
    throw Error(ErrorCode::BadOrder, "normalized moments need p + q >= 2");
  }
  const auto c = compute_moments(img);
  const double gamma = 1.0 + (p + q) / 2.0;
  return central_moment(img, p, q) / std::pow(c.m00, gamma);
}

// sign(I) * ln|I|, zero when |I| is below the epsilon floor.
inline std::array<double, 7> transfer(const std::array<double, 7>& I) {
  std::array<double, 7> m{};
  for (std::size_t i = 0; i < 7; ++i) {
    const double mag = std::abs(I[i]);
    m[i] = mag < kMomentEpsilon ? 0.0 : std::copysign(1.0, I[i]) * std::log(mag);
  }
  return m;
}

inline std::array<double, 7> hu_invariants(const CentralMoments& c) {
  const double n20 = c.eta(2, 0), n02 = c.eta(0, 2), n11 = c.eta(1, 1);
  const double n30 = c.eta(3, 0), n21 = c.eta(2, 1), n12 = c.eta(1, 2), n03 = c.eta(0, 3);

  const double a = n30 - 3 * n12;  // (η30 − 3η12)
  const double b = 3 * n21 - n03;  // (3η21 − η03)
  const double s = n30 + n12;      // (η30 + η12)
  const double t = n21 + n03;      // (η21 + η03)

  std::array<double, 7> I{};
  I[0] = n20 + n02;
  I[1] = (n20 - n02) * (n20 - n02) + 4 * n11 * n11;
  I[2] = a * a + b * b;
  I[3] = s * s + t * t;
  I[4] = a * s * (s * s - 3 * t * t) + b * t * (3 * s * s - t * t);
  I[5] = (n20 - n02) * (s * s - t * t) + 4 * n11 * s * t;
  I[6] = b * s * (s * s - 3 * t * t) - a * t * (3 * s * s - t * t);
  return I;
}

inline HuVector hu_set(const BinaryImage& img) {
  HuVector h;
  h.I = hu_invariants(compute_moments(img));
  h.m = transfer(h.I);
  return h;
}

inline constexpr double kInfiniteDissimilarity = std::numeric_limits<double>::infinity();

// max_i |m_a,i − m_b,i| / |m_a,i| over indices where |m_a,i| >= epsilon.
// If every index is skipped the result is 0 for equal vectors and +inf
// otherwise. Not symmetric: the denominator always comes from `a`.
inline double dissimilarity(const std::array<double, 7>& ma, const std::array<double, 7>& mb) {
  double d = 0;
  bool any = false;
  for (std::size_t i = 0; i < 7; ++i) {
    if (!(std::abs(ma[i]) >= kMomentEpsilon)) continue;
    any = true;
    d = std::max(d, std::abs(ma[i] - mb[i]) / std::abs(ma[i]));
  }
  if (!any) return ma == mb ? 0.0 : kInfiniteDissimilarity;
  return d;
}

inline double dissimilarity(const HuVector& a, const HuVector& b) {
  return dissimilarity(a.m, b.m);
}

}  // namespace wpcclean
