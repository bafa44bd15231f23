#pragma once

// Comparison cleaners: Local Outlier Factor with a fixed removal fraction, and
// k-means with a per-cluster distance threshold. Both work on min-max
// normalized (v, P) and return one abnormal flag per point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "wpcclean/error.hpp"
#include "wpcclean/scada_io.hpp"

namespace wpcclean {

struct BaselineConfig {
  int lof_k = 300;
  double lof_fraction = 0.10;
  int kmeans_k = 13;
  double kmeans_sigma = 2.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // LOF neighbour search; 0 = hardware concurrency

  void validate() const {
    if (lof_k < 1) throw Error(ErrorCode::InvalidConfig, "lof_k must be >= 1");
    if (!(lof_fraction > 0 && lof_fraction < 1)) {
      throw Error(ErrorCode::InvalidConfig, "lof_fraction must be in (0, 1)");
    }
    if (kmeans_k < 1) throw Error(ErrorCode::InvalidConfig, "kmeans_k must be >= 1");
    if (!(kmeans_sigma >= 0)) throw Error(ErrorCode::InvalidConfig, "kmeans_sigma must be >= 0");
  }
};

struct Point2 {
  double x = 0, y = 0;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Each coordinate mapped to [0, 1]; a constant coordinate maps to 0.
inline std::vector<Point2> normalized_features(const Dataset& ds) {
  std::vector<Point2> out;
  out.reserve(ds.size());
  if (ds.empty()) return out;
  double v_lo = ds.points[0].v, v_hi = v_lo, p_lo = ds.points[0].P, p_hi = p_lo;
  for (const auto& p : ds.points) {
    v_lo = std::min(v_lo, p.v);
    v_hi = std::max(v_hi, p.v);
    p_lo = std::min(p_lo, p.P);
    p_hi = std::max(p_hi, p.P);
  }
  const double sv = v_hi > v_lo ? 1.0 / (v_hi - v_lo) : 0.0;
  const double sp = p_hi > p_lo ? 1.0 / (p_hi - p_lo) : 0.0;
  for (const auto& p : ds.points) out.push_back({(p.v - v_lo) * sv, (p.P - p_lo) * sp});
  return out;
}

// Number of points a fraction selects: ceil(fraction * n), ignoring
// floating-point dust just above an integer.
inline std::size_t fraction_count(double fraction, std::size_t n) {
  const double raw = fraction * double(n);
  return std::min(n, static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw))));
}

namespace detail {

template <class Fn>
void parallel_ranges(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

// Exact k nearest neighbours (self excluded) over a uniform grid on the unit
// square. Neighbours come back sorted by (squared distance, index), so ties resolve
// towards earlier input rows.
class GridIndex {
 public:
  explicit GridIndex(const std::vector<Point2>& pts, std::size_t per_cell = 2) : pts_(pts) {
    side_ = std::max<int>(1, int(std::sqrt(double(pts.size()) / double(per_cell))));
    cell_ = 1.0 / side_;
    start_.assign(std::size_t(side_) * side_ + 1, 0);
    for (const auto& p : pts) ++start_[cell_of(p) + 1];
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    items_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[cell_of(pts[i])]++] = std::uint32_t(i);
  }

  void knn(std::size_t query, std::size_t k, std::vector<std::pair<double, std::uint32_t>>& heap) const {
    heap.clear();
    const Point2 q = pts_[query];
    const int cx = coord(q.x), cy = coord(q.y);
    auto worse = [](const auto& a, const auto& b) { return a < b; };  // max-heap on (d, idx)
    for (int r = 0;; ++r) {
      bool any_cell = false;
      for (int y = cy - r; y <= cy + r; ++y) {
        if (y < 0 || y >= side_) continue;
        const bool edge_row = y == cy - r || y == cy + r;
        for (int x = cx - r; x <= cx + r; x += (edge_row || r == 0) ? 1 : 2 * r) {
          if (x < 0 || x >= side_) continue;
          any_cell = true;
          const std::size_t c = std::size_t(y) * side_ + x;
          for (std::size_t j = start_[c]; j < start_[c + 1]; ++j) {
            const std::uint32_t idx = items_[j];
            if (idx == query) continue;
            const double dx = q.x - pts_[idx].x, dy = q.y - pts_[idx].y;
            const std::pair<double, std::uint32_t> cand{dx * dx + dy * dy, idx};
            if (heap.size() < k) {
              heap.push_back(cand);
              std::push_heap(heap.begin(), heap.end(), worse);
            } else if (cand < heap.front()) {
              std::pop_heap(heap.begin(), heap.end(), worse);
              heap.back() = cand;
              std::push_heap(heap.begin(), heap.end(), worse);
            }
          }
        }
      }
      // Anything outside ring r is at least r cells away.
      const double reach = r * cell_;
      if (heap.size() == k && heap.front().first <= reach * reach) break;
      if (!any_cell && r > side_) break;
    }
    std::sort_heap(heap.begin(), heap.end(), worse);
    for (auto& h : heap) h.first = std::sqrt(h.first);
  }

 private:
  int coord(double u) const { return std::clamp(int(u * side_), 0, side_ - 1); }
  std::size_t cell_of(Point2 p) const { return std::size_t(coord(p.y)) * side_ + coord(p.x); }

  const std::vector<Point2>& pts_;
  int side_ = 1;
  double cell_ = 1;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> items_;
};

}  // namespace detail

// Local outlier factor of every point with exactly k neighbours each.
// lrd uses a 1e-10 guard so duplicated points keep finite scores.
inline std::vector<double> lof_scores(const std::vector<Point2>& pts, int k, unsigned threads = 1) {
  const std::size_t n = pts.size();
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (n <= std::size_t(k)) {
    throw Error(ErrorCode::TooFewPoints, "need more than k points for LOF");
  }
  const std::size_t kk = std::size_t(k);
  const detail::GridIndex index(pts);
  std::vector<std::uint32_t> nbr(n * kk);
  std::vector<double> kdist(n);
  detail::parallel_ranges(n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::pair<double, std::uint32_t>> heap;
    heap.reserve(kk);
    for (std::size_t i = lo; i < hi; ++i) {
      index.knn(i, kk, heap);
      for (std::size_t j = 0; j < kk; ++j) nbr[i * kk + j] = heap[j].second;
      kdist[i] = heap.back().first;
    }
  });

  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < kk; ++j) {
      const std::uint32_t o = nbr[i * kk + j];
      sum += std::max(kdist[o], distance(pts[i], pts[o]));
    }
    lrd[i] = 1.0 / (sum / double(kk) + 1e-10);
  }
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < kk; ++j) sum += lrd[nbr[i * kk + j]];
    score[i] = sum / double(kk) / lrd[i];
  }
  return score;
}

// Flags the ceil(lof_fraction * N) highest-scoring points; equal scores keep
// input order.
inline std::vector<bool> lof_clean(const Dataset& ds, const BaselineConfig& cfg = {}) {
  cfg.validate();
  if (ds.size() <= std::size_t(cfg.lof_k)) {
    throw Error(ErrorCode::TooFewPoints, "LOF needs more than lof_k points");
  }
  const auto score = lof_scores(normalized_features(ds), cfg.lof_k, cfg.threads);
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<bool> flags(score.size(), false);
  const std::size_t take = fraction_count(cfg.lof_fraction, score.size());
  for (std::size_t i = 0; i < take; ++i) flags[order[i]] = true;
  return flags;
}

struct KMeansResult {
  std::vector<Point2> centroids;
  std::vector<int> assignment;
  int iterations = 0;
};

// k-means++ seeding then Lloyd iterations until every centroid moves less
// than 1e-6 or 300 rounds pass. An emptied cluster keeps its centroid.
inline KMeansResult kmeans(const std::vector<Point2>& pts, int k, std::uint64_t seed) {
  const std::size_t n = pts.size();
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (n < std::size_t(k)) throw Error(ErrorCode::TooFewPoints, "need at least k points for k-means");

  std::mt19937_64 rng(seed);
  KMeansResult r;
  r.centroids.push_back(pts[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance(pts[i], r.centroids[0]);
    d2[i] = d * d;
  }
  while (r.centroids.size() < std::size_t(k)) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (pick = 0; pick + 1 < n; ++pick) {
        if ((u -= d2[pick]) < 0) break;
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    r.centroids.push_back(pts[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = distance(pts[i], pts[pick]);
      d2[i] = std::min(d2[i], d * d);
    }
  }

  r.assignment.assign(n, 0);
  for (r.iterations = 1; r.iterations <= 300; ++r.iterations) {
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = distance(pts[i], r.centroids[std::size_t(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      r.assignment[i] = best;
    }
    std::vector<Point2> sum(static_cast<std::size_t>(k));
    std::vector<std::size_t> count(std::size_t(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sum[std::size_t(r.assignment[i])];
      s.x += pts[i].x;
      s.y += pts[i].y;
      ++count[std::size_t(r.assignment[i])];
    }
    double shift = 0;
    for (std::size_t c = 0; c < std::size_t(k); ++c) {
      if (!count[c]) continue;
      const Point2 next{sum[c].x / double(count[c]), sum[c].y / double(count[c])};
      shift = std::max(shift, distance(next, r.centroids[c]));
      r.centroids[c] = next;
    }
    if (shift < 1e-6) break;
  }
  r.iterations = std::min(r.iterations, 300);
  return r;
}

// Flags points farther from their centroid than the cluster's mean distance
// plus kmeans_sigma standard deviations.
inline std::vector<bool> kmeans_clean(const Dataset& ds, const BaselineConfig& cfg = {}) {
  cfg.validate();
  if (ds.size() < std::size_t(cfg.kmeans_k)) {
    throw Error(ErrorCode::TooFewPoints, "k-means needs at least kmeans_k points");
  }
  const auto pts = normalized_features(ds);
  const auto km = kmeans(pts, cfg.kmeans_k, cfg.seed);
  const std::size_t k = km.centroids.size();
  std::vector<double> dist(pts.size()), sum(k, 0), sum2(k, 0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = std::size_t(km.assignment[i]);
    dist[i] = distance(pts[i], km.centroids[c]);
    sum[c] += dist[i];
    ++count[c];
  }
  std::vector<double> mean(k, 0), sd(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c]) mean[c] = sum[c] / double(count[c]);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = std::size_t(km.assignment[i]);
    sum2[c] += (dist[i] - mean[c]) * (dist[i] - mean[c]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c]) sd[c] = std::sqrt(sum2[c] / double(count[c]));
  }
  std::vector<bool> flags(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = std::size_t(km.assignment[i]);
    flags[i] = dist[i] > mean[c] + cfg.kmeans_sigma * sd[c];
  }
  return flags;
}

}  // namespace wpcclean
