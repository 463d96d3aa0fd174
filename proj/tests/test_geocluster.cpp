#include <gtest/gtest.h>

#include <random>

#include "meshplace/geocluster.hpp"
#include "oracles.hpp"

namespace mp = meshplace;

TEST(Project, SinglePointAtOrigin) {
  const std::vector<mp::GeoPoint> pts{{41.4, 2.1}};
  const auto out = mp::project(pts);
  ASSERT_EQ(out.size(), 1U);
  EXPECT_DOUBLE_EQ(out[0].x, 0.0);
  EXPECT_DOUBLE_EQ(out[0].y, 0.0);
}

TEST(Project, LongitudeSpacingMatchesHaversine) {
  const std::vector<mp::GeoPoint> pts{{41.4, 2.10}, {41.4, 2.11}};
  const auto out = mp::project(pts);
  const double planar = std::sqrt(mp::squared_distance(out[0], out[1]));
  const double great_circle = oracle::haversine_m(41.4, 2.10, 41.4, 2.11);
  EXPECT_NEAR(great_circle, 834.0, 1.0);
  EXPECT_NEAR(planar, great_circle, 0.01 * great_circle);
}

TEST(Project, CityScaleDistancesTrackHaversine) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(41.37, 41.41), lon(2.09, 2.15);
  std::vector<mp::GeoPoint> pts(30);
  for (auto &p : pts)
    p = {lat(rng), lon(rng)};
  const auto out = mp::project(pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double h = oracle::haversine_m(pts[i].lat, pts[i].lon, pts[j].lat, pts[j].lon);
      EXPECT_NEAR(std::sqrt(mp::squared_distance(out[i], out[j])), h, 0.01 * h);
    }
}

TEST(Project, SymmetricAboutCentroid) {
  const std::vector<mp::GeoPoint> pts{{41.39, 2.10}, {41.41, 2.12}};
  const auto out = mp::project(pts);
  EXPECT_NEAR(out[0].x, -out[1].x, 1e-6);
  EXPECT_NEAR(out[0].y, -out[1].y, 1e-6);
}

TEST(Project, EmptyThrows) {
  EXPECT_THROW(mp::project(std::vector<mp::GeoPoint>{}), std::invalid_argument);
}

TEST(Project, UnprojectInvertsProject) {
  const mp::GeoPoint origin{41.389, 2.113};
  const mp::PlanarPoint p{-732.5, 418.25};
  const auto back = mp::project_about(mp::unproject_about(p, origin), origin);
  EXPECT_NEAR(back.x, p.x, 1e-6);
  EXPECT_NEAR(back.y, p.y, 1e-6);
}

namespace {

std::vector<mp::PlanarPoint> random_points(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> c(0.0, 1000.0);
  std::vector<mp::PlanarPoint> pts(n);
  for (auto &p : pts)
    p = {c(rng), c(rng)};
  return pts;
}

} // namespace

TEST(Kmeans, SingleCluster) {
  std::mt19937_64 rng(1);
  const auto pts = random_points(20, rng);
  const auto part = mp::kmeans(pts, 1, 99);
  double mx = 0, my = 0;
  for (const auto &p : pts) {
    mx += p.x;
    my += p.y;
  }
  for (auto a : part.assignment)
    EXPECT_EQ(a, 0U);
  EXPECT_NEAR(part.centroids[0].x, mx / 20, 1e-9);
  EXPECT_NEAR(part.centroids[0].y, my / 20, 1e-9);
}

TEST(Kmeans, OneClusterPerPoint) {
  std::mt19937_64 rng(2);
  const auto pts = random_points(12, rng);
  const auto part = mp::kmeans(pts, 12, 5);
  std::vector<int> seen(12, 0);
  for (auto a : part.assignment)
    ++seen[a];
  for (int s : seen)
    EXPECT_EQ(s, 1);
  EXPECT_EQ(part.wcss(), 0.0);
}

TEST(Kmeans, SeparatedBlobsRecoveredForEverySeed) {
  // spread 10 m per blob, blob centers 1000 m apart (gap 100x spread)
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> jitter(-5.0, 5.0);
  std::vector<mp::PlanarPoint> pts;
  for (int i = 0; i < 15; ++i)
    pts.push_back({jitter(rng), jitter(rng)});
  for (int i = 0; i < 15; ++i)
    pts.push_back({1000 + jitter(rng), jitter(rng)});
  for (mp::Seed seed = 0; seed < 200; ++seed) {
    const auto part = mp::kmeans(pts, 2, seed);
    for (int i = 1; i < 15; ++i)
      ASSERT_EQ(part.assignment[i], part.assignment[0]) << "seed " << seed;
    for (int i = 16; i < 30; ++i)
      ASSERT_EQ(part.assignment[i], part.assignment[15]) << "seed " << seed;
    ASSERT_NE(part.assignment[0], part.assignment[15]) << "seed " << seed;
  }
}

TEST(Kmeans, InvalidArguments) {
  std::mt19937_64 rng(5);
  const auto pts = random_points(4, rng);
  EXPECT_THROW(mp::kmeans(pts, 0, 1), std::invalid_argument);
  EXPECT_THROW(mp::kmeans(pts, 5, 1), std::invalid_argument);
  EXPECT_THROW(mp::kmeans(pts, 2, 1, 0), std::invalid_argument);
}

TEST(KmeansProperty, WcssNonIncreasingAndClustersNonEmpty) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + trial % 50;
    const std::size_t k = 1 + trial % std::min<std::size_t>(n, 9);
    const auto pts = random_points(n, rng);
    const auto part = mp::kmeans(pts, k, static_cast<mp::Seed>(trial));
    for (std::size_t t = 1; t < part.wcss_trace.size(); ++t)
      ASSERT_LE(part.wcss_trace[t], part.wcss_trace[t - 1] * (1 + 1e-12)) << "trial " << trial;
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : part.assignment)
      ++sizes[a];
    for (auto s : sizes)
      ASSERT_GT(s, 0U);
    ASSERT_NEAR(part.wcss(), mp::within_cluster_ss(pts, part.assignment, part.centroids), 1e-6);
  }
}

TEST(KmeansProperty, DuplicatePointsStillFillEveryCluster) {
  std::vector<mp::PlanarPoint> pts(6, {1.0, 1.0});
  pts.push_back({5, 5});
  for (mp::Seed s = 0; s < 50; ++s) {
    const auto part = mp::kmeans(pts, 4, s);
    std::vector<std::size_t> sizes(4, 0);
    for (auto a : part.assignment)
      ++sizes[a];
    for (auto sz : sizes)
      ASSERT_GT(sz, 0U);
  }
}

TEST(KmeansProperty, DeterministicUnderSeed) {
  std::mt19937_64 rng(8);
  const auto pts = random_points(40, rng);
  const auto a = mp::kmeans(pts, 5, 1234);
  const auto b = mp::kmeans(pts, 5, 1234);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.wcss_trace, b.wcss_trace);
}

TEST(Kmeans, AssignmentIsNearestCentroidAtConvergence) {
  std::mt19937_64 rng(10);
  const auto pts = random_points(60, rng);
  const auto part = mp::kmeans(pts, 4, 3);
  ASSERT_TRUE(part.converged);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double own = mp::squared_distance(pts[i], part.centroids[part.assignment[i]]);
    for (const auto &c : part.centroids)
      EXPECT_LE(own, mp::squared_distance(pts[i], c) + 1e-9);
  }
}
