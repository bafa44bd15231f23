#pragma once

// Synthetic SCADA data with ground-truth labels, and the parametric
// reference power-curve image.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/raster.hpp"
#include "wpcclean/scada_io.hpp"

namespace wpcclean {

// Logistic ramp between cut-in and rated speed, rescaled so it is exactly
// 0 at cut-in and rated_power at rated speed.
inline double ideal_power(double v, const TurbineSpec& spec) {
  if (v < spec.cut_in || v > spec.cut_out) return 0.0;
  if (v >= spec.rated_speed) return spec.rated_power;
  const double mid = 0.5 * (spec.cut_in + spec.rated_speed);
  const double half = 0.5 * (spec.rated_speed - spec.cut_in);
  const double k = std::log(199.0) / half;  // raw logistic is 0.5% / 99.5% at the knots
  auto logistic = [&](double x) { return 1.0 / (1.0 + std::exp(-k * (x - mid))); };
  const double lo = logistic(spec.cut_in), hi = logistic(spec.rated_speed);
  return spec.rated_power * (logistic(v) - lo) / (hi - lo);
}

// Smallest wind speed in [cut_in, rated_speed] whose ideal power reaches `level`.
inline double speed_for_power(double level, const TurbineSpec& spec) {
  double lo = spec.cut_in, hi = spec.rated_speed;
  if (level <= 0) return lo;
  if (level >= spec.rated_power) return hi;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ideal_power(mid, spec) < level ? lo : hi) = mid;
  }
  return hi;
}

struct SynthConfig {
  TurbineSpec spec;
  std::size_t n_points = 30000;
  double noise_sigma = 22.5;  // kW
  double type1_frac = 0.02;
  double type2_frac = 0.05;
  double type3_frac = 0.10;
  std::vector<double> type3_levels{600.0};  // kW
  double type3_jitter = 1.0;                // kW; a held setpoint is nearly flat
  double weibull_shape = 2.0;
  double weibull_scale = 13.0;  // m/s, a windy site so the ramp is densely populated
  std::uint64_t seed = 1;
};

struct SynthResult {
  Dataset dataset;
  std::vector<Label> truth;
};

namespace detail {

inline std::string iso_timestamp(std::int64_t epoch_seconds) {
  const std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  return buf;
}

}  // namespace detail

inline SynthResult generate(const SynthConfig& cfg) {
  const double fracs[3] = {cfg.type1_frac, cfg.type2_frac, cfg.type3_frac};
  double total = 0;
  for (double f : fracs) {
    if (!(f >= 0) || !std::isfinite(f)) {
      throw Error(ErrorCode::InvalidFractions, "fractions must be finite and >= 0");
    }
    total += f;
  }
  if (!(total < 1)) throw Error(ErrorCode::InvalidFractions, "fractions must sum to < 1");
  if (!(cfg.noise_sigma >= 0)) throw Error(ErrorCode::InvalidConfig, "noise_sigma must be >= 0");
  if (cfg.n_points == 0) throw Error(ErrorCode::InvalidConfig, "n_points must be > 0");
  if (cfg.type3_frac > 0 && cfg.type3_levels.empty()) {
    throw Error(ErrorCode::InvalidConfig, "type3 points need at least one level");
  }
  if (auto bad = validate_spec(cfg.spec); !bad.empty()) {
    throw Error(ErrorCode::InvalidSpec, "violated: " + bad.front());
  }

  const auto& spec = cfg.spec;
  const auto n = cfg.n_points;
  const auto n1 = static_cast<std::size_t>(std::llround(cfg.type1_frac * double(n)));
  const auto n2 = static_cast<std::size_t>(std::llround(cfg.type2_frac * double(n)));
  const auto n3 = static_cast<std::size_t>(std::llround(cfg.type3_frac * double(n)));
  if (n1 + n2 + n3 > n) throw Error(ErrorCode::InvalidFractions, "fractions exceed n_points");

  std::mt19937_64 rng(cfg.seed);
  std::weibull_distribution<double> weibull(cfg.weibull_shape, cfg.weibull_scale);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double v_cap = spec.cut_out + 2.0;
  auto wind = [&](double lo) {
    for (;;) {
      const double v = weibull(rng);
      if (v >= lo && v <= v_cap) return v;
    }
  };
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

  struct Sample {
    double v, P;
    Label truth;
  };
  std::vector<Sample> body;
  body.reserve(n - n3);
  // Above cut-in the noise is redrawn until P >= 0, so no normal point meets
  // the negative-power rule that defines Type1.
  for (std::size_t i = 0; i < n - n1 - n2 - n3; ++i) {
    const double v = wind(0.0);
    double P = ideal_power(v, spec) + cfg.noise_sigma * noise(rng);
    while (v > spec.cut_in && P < 0) P = ideal_power(v, spec) + cfg.noise_sigma * noise(rng);
    body.push_back({v, P, Label::Normal});
  }
  for (std::size_t i = 0; i < n1; ++i) {
    double v = wind(0.0);
    while (!(v > spec.cut_in)) v = wind(spec.cut_in);
    body.push_back({v, uniform(-30.0, 0.0), Label::Type1});
  }
  for (std::size_t i = 0; i < n2; ++i) {
    for (;;) {
      const double v = uniform(0.0, spec.cut_out);
      const double P = uniform(0.0, spec.rated_power);
      if (std::abs(P - ideal_power(v, spec)) > 3.0 * cfg.noise_sigma) {
        body.push_back({v, P, Label::Type2});
        break;
      }
    }
  }
  std::shuffle(body.begin(), body.end(), rng);

  // Curtailment: one contiguous block in time, cycling through the levels.
  std::vector<Sample> stacked;
  stacked.reserve(n3);
  for (std::size_t i = 0; i < n3; ++i) {
    const double level = cfg.type3_levels[i % cfg.type3_levels.size()];
    const double v = uniform(speed_for_power(level, spec), spec.rated_speed);
    stacked.push_back({v, level + cfg.type3_jitter * noise(rng), Label::Type3});
  }
  const std::size_t offset =
      body.empty() ? 0 : std::uniform_int_distribution<std::size_t>(0, body.size())(rng);
  body.insert(body.begin() + static_cast<std::ptrdiff_t>(offset), stacked.begin(), stacked.end());

  SynthResult out;
  out.dataset.spec = spec;
  out.dataset.source_id = "synthetic:seed=" + std::to_string(cfg.seed);
  out.dataset.points.reserve(n);
  out.truth.reserve(n);
  constexpr std::int64_t kStart = 1451606400;  // 2016-01-01T00:00:00Z
  for (std::size_t i = 0; i < body.size(); ++i) {
    ScadaPoint p;
    p.timestamp = detail::iso_timestamp(kStart + 600 * std::int64_t(i));
    p.v = body[i].v;
    p.P = body[i].P;
    out.dataset.points.push_back(std::move(p));
    out.truth.push_back(body[i].truth);
  }
  return out;
}

inline constexpr int kReferenceMinThickness = 12;  // pixels, thinnest column run

// Half-height (kW) of the band drawn around the ideal curve: 1.5% of rated
// power, widened when the pixel scale would leave a column run under
// kReferenceMinThickness.
inline double reference_band(const TurbineSpec& spec, const RasterTransform& t) {
  const double needed_px = 0.5 * (kReferenceMinThickness - t.stamp + 1);
  return std::max(0.015 * spec.rated_power, needed_px / t.dy);
}

// Dense noise-free sampling of ideal_power from cut-in to cut-out, drawn as
// vertical bands through an existing transform.
inline BinaryImage reference_image(const TurbineSpec& spec, const RasterTransform& t) {
  BinaryImage img(t.width, t.height);
  const double band = reference_band(spec, t);
  const double step = 0.25 / t.dx;
  for (double v = spec.cut_in;; v += step) {
    v = std::min(v, spec.cut_out);
    const double p = ideal_power(v, spec);
    const PixelCoord top = map_point(v, p + band, t);
    const PixelCoord bottom = map_point(v, p - band, t);
    for (int y = top.y; y <= bottom.y; ++y) stamp_block(img, {top.x, y}, t.stamp);
    if (v >= spec.cut_out) break;
  }
  return img;
}

// Stand-alone reference on a canvas spanning v in [0, cut_out] and P with a
// 5% margin around [0, rated_power].
inline BinaryImage reference_image(const TurbineSpec& spec, int width = kDefaultWidth,
                                   int height = kDefaultHeight, int stamp = kDefaultStamp) {
  const double margin = 0.05 * spec.rated_power;
  const auto t = RasterTransform::from_ranges(0.0, spec.cut_out, -margin,
                                              spec.rated_power + margin, width, height, stamp);
  return reference_image(spec, t);
}

}  // namespace wpcclean
