#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"
#include "wpcclean/baselines.hpp"
#include "wpcclean/synth.hpp"

using namespace wpcclean;
using testing_support::make_dataset;

namespace {

// LOF by its definition with O(N^2) neighbour search; neighbours ordered by
// (squared distance, index).
std::vector<double> lof_oracle(const std::vector<Point2>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  std::vector<double> kdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
      all.emplace_back(dx * dx + dy * dy, j);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t m = 0; m < k; ++m) nbr[i].push_back(all[m].second);
    kdist[i] = std::sqrt(all[k - 1].first);
  }
  auto dist = [&](std::size_t a, std::size_t b) { return std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y); };
  std::vector<double> lrd(n), lof(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (auto o : nbr[i]) s += std::max(kdist[o], dist(i, o));
    lrd[i] = 1.0 / (s / double(k) + 1e-10);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (auto o : nbr[i]) s += lrd[o];
    lof[i] = s / double(k) / lrd[i];
  }
  return lof;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Features, MinMaxNormalized) {
  const auto f = normalized_features(make_dataset({{2, 100}, {4, 300}, {3, 200}}));
  EXPECT_DOUBLE_EQ(f[0].x, 0);
  EXPECT_DOUBLE_EQ(f[0].y, 0);
  EXPECT_DOUBLE_EQ(f[1].x, 1);
  EXPECT_DOUBLE_EQ(f[2].y, 0.5);
  const auto flat = normalized_features(make_dataset({{2, 5}, {2, 5}}));
  EXPECT_EQ(flat[1].x, 0);
}

TEST(Lof, ScoresMatchDefinition) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 1);
  std::vector<Point2> pts;
  for (int i = 0; i < 400; ++i) pts.push_back({0.5 + 0.1 * g(rng), 0.5 + 0.05 * g(rng)});
  for (int i = 0; i < 40; ++i) pts.push_back({std::uniform_real_distribution<double>(0, 1)(rng), std::uniform_real_distribution<double>(0, 1)(rng)});
  for (std::size_t k : {1u, 5u, 30u}) {
    const auto want = lof_oracle(pts, k);
    for (unsigned threads : {1u, 3u}) {
      const auto got = lof_scores(pts, int(k), threads);
      for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9 * want[i]) << i;
    }
  }
}

TEST(Lof, DuplicatesStayFinite) {
  std::vector<Point2> pts(50, Point2{0.2, 0.2});
  pts.push_back({0.9, 0.9});
  const auto s = lof_scores(pts, 5);
  for (double x : s) EXPECT_TRUE(std::isfinite(x));
  EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), 50);
}

TEST(Lof, GridOutlierIsTheSingleFlag) {
  std::vector<std::pair<double, double>> vp;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) vp.emplace_back(i, 10.0 * j);
  }
  vp.emplace_back(30, 300);
  BaselineConfig cfg;
  cfg.lof_k = 5;
  cfg.lof_fraction = 1.0 / double(vp.size());
  const auto flags = lof_clean(make_dataset(vp), cfg);
  EXPECT_EQ(std::count(flags.begin(), flags.end(), true), 1);
  EXPECT_TRUE(flags.back());
}

TEST(Lof, ExactFractionCount) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 20);
  std::vector<std::pair<double, double>> vp;
  for (int i = 0; i < 1000; ++i) vp.emplace_back(u(rng), u(rng) * 70);
  BaselineConfig cfg;
  cfg.lof_k = 20;
  const auto flags = lof_clean(make_dataset(vp), cfg);
  EXPECT_EQ(std::count(flags.begin(), flags.end(), true), 100);
  for (std::size_t n : {7u, 13u, 999u, 30000u, 93000u}) EXPECT_EQ(fraction_count(0.1, n), std::size_t(std::ceil(n / 10.0)));
}

TEST(Lof, TiesKeepInputOrder) {
  // Identical points score identically; the earliest rows are taken.
  std::vector<std::pair<double, double>> vp(20, {1.0, 1.0});
  vp.emplace_back(2.0, 2.0);
  BaselineConfig cfg;
  cfg.lof_k = 3;
  cfg.lof_fraction = 0.1;  // ceil(2.1) = 3 flags
  const auto flags = lof_clean(make_dataset(vp), cfg);
  EXPECT_TRUE(flags[20]);
  EXPECT_TRUE(flags[0]);
  EXPECT_TRUE(flags[1]);
  EXPECT_EQ(std::count(flags.begin(), flags.end(), true), 3);
}

TEST(Lof, TooFewPoints) {
  BaselineConfig cfg;
  cfg.lof_k = 5;
  EXPECT_EQ(code_of([&] { lof_clean(make_dataset({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}}), cfg); }),
            ErrorCode::TooFewPoints);
}

TEST(KMeans, IdenticalPointsNoFlags) {
  BaselineConfig cfg;
  cfg.kmeans_k = 1;
  const auto flags = kmeans_clean(make_dataset(std::vector<std::pair<double, double>>(30, {4, 400})), cfg);
  EXPECT_EQ(std::count(flags.begin(), flags.end(), true), 0);
}

TEST(KMeans, DistantPointFlagged) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 0.2);
  std::vector<std::pair<double, double>> vp;
  for (int i = 0; i < 200; ++i) vp.emplace_back(2 + g(rng), 100 + 50 * g(rng));
  for (int i = 0; i < 200; ++i) vp.emplace_back(12 + g(rng), 1200 + 50 * g(rng));
  vp.emplace_back(5, 500);
  const auto ds = make_dataset(vp);
  BaselineConfig cfg;
  cfg.kmeans_k = 2;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    const auto flags = kmeans_clean(ds, cfg);
    EXPECT_TRUE(flags.back()) << "seed " << seed;
  }
}

TEST(KMeans, FlagsFollowDistanceStatistics) {
  SynthConfig sc;
  sc.n_points = 3000;
  const auto ds = generate(sc).dataset;
  BaselineConfig cfg;
  const auto pts = normalized_features(ds);
  const auto km = kmeans(pts, cfg.kmeans_k, cfg.seed);
  // Assignment is the nearest centroid; flags recomputed from scratch.
  std::vector<std::vector<double>> per(km.centroids.size());
  std::vector<double> d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = 1e300;
    for (const auto& c : km.centroids) best = std::min(best, distance(pts[i], c));
    d[i] = distance(pts[i], km.centroids[std::size_t(km.assignment[i])]);
    EXPECT_NEAR(d[i], best, 1e-12);
    per[std::size_t(km.assignment[i])].push_back(d[i]);
  }
  const auto flags = kmeans_clean(ds, cfg);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& v = per[std::size_t(km.assignment[i])];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / double(v.size()));
    EXPECT_EQ(flags[i], d[i] > mean + 2 * sd) << i;
  }
}

TEST(KMeans, DeterministicAndTooFew) {
  SynthConfig sc;
  sc.n_points = 2000;
  const auto ds = generate(sc).dataset;
  EXPECT_EQ(kmeans_clean(ds), kmeans_clean(ds));
  BaselineConfig cfg;
  EXPECT_EQ(code_of([&] { kmeans_clean(make_dataset({{1, 1}, {2, 2}}), cfg); }), ErrorCode::TooFewPoints);
}

TEST(Config, Validation) {
  BaselineConfig cfg;
  cfg.lof_fraction = 1.0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidConfig);
  cfg = {};
  cfg.lof_k = 0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidConfig);
  cfg = {};
  cfg.kmeans_k = 0;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidConfig);
}
