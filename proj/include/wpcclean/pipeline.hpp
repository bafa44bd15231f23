#pragma once

// Three-stage cleaner: Type I pre-cleaning, normal-region extraction by an
// opening sweep scored against a reference curve, and point marking.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <thread>
#include <vector>

#include "wpcclean/binary_image.hpp"
#include "wpcclean/contour.hpp"
#include "wpcclean/error.hpp"
#include "wpcclean/moments.hpp"
#include "wpcclean/morphology.hpp"
#include "wpcclean/raster.hpp"
#include "wpcclean/scada_io.hpp"
#include "wpcclean/synth.hpp"

namespace wpcclean {

enum class EdgeSource { Raw, Opened };

struct SweepEntry {
  int n = 0;
  double D = kInfiniteDissimilarity;
  BinaryImage opened;
  HuVector hu;                    // of the filled maximum contour, when non-empty
  std::size_t region_area = 0;    // filled maximum-contour area
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // one per n, ascending
  int n_best = 0;
  HuVector reference_hu;

  const SweepEntry& best() const {
    for (const auto& e : entries) {
      if (e.n == n_best) return e;
    }
    throw Error(ErrorCode::AllEmpty, "sweep has no best entry");
  }
};

struct LabelCounts {
  std::size_t normal = 0, type1 = 0, type2 = 0, type3 = 0;

  std::size_t total() const noexcept { return normal + type1 + type2 + type3; }
  std::size_t abnormal() const noexcept { return type1 + type2 + type3; }
};

inline LabelCounts count_labels(const Dataset& ds) {
  LabelCounts c;
  for (const auto& p : ds.points) {
    switch (p.label) {
      case Label::Normal: ++c.normal; break;
      case Label::Type1: ++c.type1; break;
      case Label::Type2: ++c.type2; break;
      case Label::Type3: ++c.type3; break;
      case Label::Unlabeled: break;
    }
  }
  return c;
}

struct StageTimes {
  double preclean = 0;    // seconds
  double extraction = 0;  // rasterization + sweep
  double marking = 0;
  double total = 0;
};

struct CleanReport {
  std::string source_id;
  LabelCounts counts;
  std::size_t total = 0;
  double R = 0;             // percent labeled abnormal
  double R_preclean = 0;    // percent Type1
  double R_extraction = 0;  // percent Type2 + Type3
  double R_marking = 0;     // marking itself removes nothing further
  StageTimes times;
  int n_best = 0;
  std::vector<std::pair<int, double>> d_table;
};

struct PipelineConfig {
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  int stamp = kDefaultStamp;
  int n_max = kDefaultMaxSe;
  EdgeSource edge_source = EdgeSource::Raw;
  // Known-clean points rasterized through the dataset's transform; the
  // parametric curve from the dataset's turbine spec when empty.
  std::optional<std::vector<ScadaPoint>> reference_points;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (stamp < 1) throw Error(ErrorCode::InvalidConfig, "stamp must be >= 1");
    if (width < stamp || height < stamp) {
      throw Error(ErrorCode::InvalidConfig, "canvas must be at least stamp x stamp");
    }
    if (n_max < 2) throw Error(ErrorCode::InvalidConfig, "n_max must be >= 2");
  }
};

// Labels Type1 every unlabeled point with v > cut_in and P < 0.
inline std::size_t preclean(Dataset& ds) {
  std::size_t count = 0;
  for (auto& p : ds.points) {
    if (p.label != Label::Unlabeled) continue;
    if (p.v > ds.spec.cut_in && p.P < 0) {
      p.label = Label::Type1;
      ++count;
    }
  }
  return count;
}

// Filled maximum-contour region of `img`.
inline RegionMask principal_region(const BinaryImage& img) {
  return fill_region(max_contour(img), img.width(), img.height());
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Opens `img` with square SEs n = 2..n_max and scores the filled maximum
// contour of each result against the reference's. n_best is the smallest n
// attaining the minimum dissimilarity; empty openings score +inf.
inline SweepResult extract_normal(const BinaryImage& img, const BinaryImage& reference,
                                  int n_max = kDefaultMaxSe, unsigned threads = 1) {
  if (n_max < 2) throw Error(ErrorCode::InvalidConfig, "n_max must be >= 2");
  if (img.empty_foreground()) throw Error(ErrorCode::AllEmpty, "image has no foreground");
  if (reference.empty_foreground()) {
    throw Error(ErrorCode::EmptyImage, "reference image has no foreground");
  }

  SweepResult result;
  result.reference_hu = hu_set(principal_region(reference).mask);
  result.entries.resize(static_cast<std::size_t>(n_max - 1));

  auto evaluate = [&](std::size_t idx) {
    SweepEntry& e = result.entries[idx];
    e.n = static_cast<int>(idx) + 2;
    e.opened = open(img, square_se(e.n));
    if (e.opened.empty_foreground()) return;
    const auto region = principal_region(e.opened);
    e.region_area = region.area();
    e.hu = hu_set(region.mask);
    e.D = dissimilarity(e.hu, result.reference_hu);
  };

  const std::size_t jobs = result.entries.size();
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(jobs));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs;) {
          try {
            evaluate(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double best = kInfiniteDissimilarity;
  for (const auto& e : result.entries) {
    if (e.D < best) {
      best = e.D;
      result.n_best = e.n;
    }
  }
  if (result.n_best == 0) {
    throw Error(ErrorCode::AllEmpty, "every opening emptied the image");
  }
  return result;
}

// Labels every still-unlabeled point. A point whose stamp misses the filled
// edge region is Type2; one inside the edge whose stamp misses the normal
// image is Type3; the rest are Normal.
inline void mark(Dataset& ds, const RasterTransform& t, const BinaryImage& raw_img,
                 const BinaryImage& normal_img, EdgeSource edge_source = EdgeSource::Raw) {
  if (raw_img.width() != t.width || raw_img.height() != t.height ||
      !raw_img.same_shape(normal_img)) {
    throw Error(ErrorCode::InconsistentInputs, "image dimensions do not match the transform");
  }
  const auto edge = principal_region(edge_source == EdgeSource::Raw ? raw_img : normal_img);
  for (auto& p : ds.points) {
    if (p.label != Label::Unlabeled) continue;
    const PixelCoord c = map_point(p, t);
    if (!stamp_intersects(edge.mask, c, t.stamp)) {
      p.label = Label::Type2;
    } else if (!stamp_intersects(normal_img, c, t.stamp)) {
      p.label = Label::Type3;
    } else {
      p.label = Label::Normal;
    }
  }
}

struct RunResult {
  Dataset labeled;
  CleanReport report;
  SweepResult sweep;
  RasterTransform transform;
  BinaryImage raw;
  BinaryImage reference;
};

inline RunResult run(Dataset dataset, const PipelineConfig& cfg = {}) {
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::duration d) { return std::chrono::duration<double>(d).count(); };

  cfg.validate();
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no points");
  if (auto bad = validate_spec(dataset.spec); !bad.empty()) {
    throw Error(ErrorCode::InvalidSpec, "violated: " + bad.front());
  }
  RunResult out;

  const auto t0 = Clock::now();
  const std::size_t n_type1 = preclean(dataset);
  const auto t1 = Clock::now();

  if (n_type1 == dataset.size()) {
    throw Error(ErrorCode::AllEmpty, "every point was removed by pre-cleaning");
  }
  out.transform = build_transform(dataset, cfg.width, cfg.height, cfg.stamp);
  out.raw = rasterize(dataset, out.transform);
  if (cfg.reference_points) {
    out.reference = rasterize(std::span<const ScadaPoint>(*cfg.reference_points), out.transform);
  } else {
    out.reference = reference_image(dataset.spec, out.transform);
  }
  out.sweep = extract_normal(out.raw, out.reference, cfg.n_max, cfg.threads);
  const auto t2 = Clock::now();

  mark(dataset, out.transform, out.raw, out.sweep.best().opened, cfg.edge_source);
  const auto t3 = Clock::now();

  CleanReport& r = out.report;
  r.source_id = dataset.source_id;
  r.counts = count_labels(dataset);
  r.total = dataset.size();
  const double pct = 100.0 / double(r.total);
  r.R = pct * double(r.counts.abnormal());
  r.R_preclean = pct * double(r.counts.type1);
  r.R_extraction = pct * double(r.counts.type2 + r.counts.type3);
  r.R_marking = 0.0;
  r.times = {seconds(t1 - t0), seconds(t2 - t1), seconds(t3 - t2), seconds(t3 - t0)};
  r.n_best = out.sweep.n_best;
  for (const auto& e : out.sweep.entries) r.d_table.emplace_back(e.n, e.D);

  out.labeled = std::move(dataset);
  return out;
}

}  // namespace wpcclean
