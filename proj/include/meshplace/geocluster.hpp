#ifndef MESHPLACE_GEOCLUSTER_HPP
#define MESHPLACE_GEOCLUSTER_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "common.hpp"
#include "netgraph.hpp"

namespace meshplace {

/// Local planar coordinates in meters (x east, y north).
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PlanarPoint &) const = default;
};

inline double squared_distance(const PlanarPoint &a, const PlanarPoint &b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline constexpr double earth_radius_m = 6371008.8;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline GeoPoint geo_centroid(std::span<const GeoPoint> points) {
  GeoPoint c;
  for (const auto &p : points) {
    c.lat += p.lat;
    c.lon += p.lon;
  }
  c.lat /= static_cast<double>(points.size());
  c.lon /= static_cast<double>(points.size());
  return c;
}

/// Equirectangular projection about `origin`.
inline PlanarPoint project_about(const GeoPoint &p, const GeoPoint &origin) {
  const double k = earth_radius_m * std::cos(deg2rad(origin.lat));
  return {k * deg2rad(p.lon - origin.lon), earth_radius_m * deg2rad(p.lat - origin.lat)};
}

/// Inverse of project_about.
inline GeoPoint unproject_about(const PlanarPoint &p, const GeoPoint &origin) {
  const double k = earth_radius_m * std::cos(deg2rad(origin.lat));
  return {origin.lat + p.y / earth_radius_m * 180.0 / std::numbers::pi,
          origin.lon + p.x / k * 180.0 / std::numbers::pi};
}

/// Projects positions to meters about their centroid. Adequate for city-scale
/// extents, where it tracks great-circle distance closely.
inline std::vector<PlanarPoint> project(std::span<const GeoPoint> points) {
  if (points.empty())
    throw std::invalid_argument("project: empty point list");
  const GeoPoint origin = geo_centroid(points);
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  for (const auto &p : points)
    out.push_back(project_about(p, origin));
  return out;
}

inline std::vector<PlanarPoint> project(const NetworkGraph &g) {
  std::vector<GeoPoint> pts;
  pts.reserve(g.size());
  for (const auto &nd : g.nodes())
    pts.push_back(nd.pos);
  return project(pts);
}

/// Assignment of every point to one of k clusters.
struct Partition {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;
  std::vector<PlanarPoint> centroids;
  std::size_t iterations = 0;
  bool converged = false;
  /// Within-cluster sum of squares after each Lloyd iteration.
  std::vector<double> wcss_trace;

  std::vector<std::vector<NodeId>> clusters() const {
    std::vector<std::vector<NodeId>> out(k);
    for (std::size_t i = 0; i < assignment.size(); ++i)
      out[assignment[i]].push_back(static_cast<NodeId>(i));
    return out;
  }

  double wcss() const { return wcss_trace.empty() ? 0.0 : wcss_trace.back(); }
};

inline std::vector<PlanarPoint> cluster_means(std::span<const PlanarPoint> points,
                                              std::span<const std::size_t> assignment, std::size_t k) {
  std::vector<PlanarPoint> sum(k);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum[assignment[i]].x += points[i].x;
    sum[assignment[i]].y += points[i].y;
    ++count[assignment[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] > 0) {
      sum[c].x /= static_cast<double>(count[c]);
      sum[c].y /= static_cast<double>(count[c]);
    }
  }
  return sum;
}

inline double within_cluster_ss(std::span<const PlanarPoint> points, std::span<const std::size_t> assignment,
                                std::span<const PlanarPoint> centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    total += squared_distance(points[i], centroids[assignment[i]]);
  return total;
}

/// Draws k distinct indices out of n, uniformly, in draw order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64 &rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

inline constexpr std::size_t default_kmeans_max_iter = 100;

/// Lloyd's k-means with k randomly chosen points as initial centroids.
///
/// Distance ties go to the lowest cluster index. A cluster left empty after an
/// assignment step takes over the point farthest from its current centroid
/// (taken only from clusters with more than one member). Stops when no
/// assignment changes or after max_iter iterations.
inline Partition kmeans(std::span<const PlanarPoint> points, std::size_t k, Seed seed,
                        std::size_t max_iter = default_kmeans_max_iter) {
  const std::size_t n = points.size();
  if (k == 0)
    throw std::invalid_argument("kmeans: k must be at least 1");
  if (k > n)
    throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));
  if (max_iter == 0)
    throw std::invalid_argument("kmeans: max_iter must be at least 1");

  std::mt19937_64 rng(seed);
  Partition part;
  part.k = k;
  for (std::size_t idx : sample_without_replacement(n, k, rng))
    part.centroids.push_back(points[idx]);

  constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();
  part.assignment.assign(n, unassigned);
  std::vector<std::size_t> next(n);
  std::vector<std::size_t> sizes(k);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(points[i], part.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = squared_distance(points[i], part.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next[i] = best;
      ++sizes[best];
    }

    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0)
        continue;
      std::size_t donor = unassigned;
      double far = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[next[i]] < 2)
          continue;
        const double d = squared_distance(points[i], part.centroids[next[i]]);
        if (d > far) {
          far = d;
          donor = i;
        }
      }
      --sizes[next[donor]];
      next[donor] = c;
      sizes[c] = 1;
      part.centroids[c] = points[donor];
    }

    const bool changed = next != part.assignment;
    part.assignment = next;
    part.centroids = cluster_means(points, part.assignment, k);
    part.wcss_trace.push_back(within_cluster_ss(points, part.assignment, part.centroids));
    part.iterations = iter + 1;
    if (!changed) {
      part.converged = true;
      break;
    }
  }
  return part;
}

inline json partition_to_json(const Partition &p) {
  json centroids = json::array();
  for (const auto &c : p.centroids)
    centroids.push_back({c.x, c.y});
  return {{"k", p.k},
          {"assignment", p.assignment},
          {"centroids_m", std::move(centroids)},
          {"iterations", p.iterations},
          {"converged", p.converged},
          {"wcss", p.wcss()}};
}

} // namespace meshplace

#endif // MESHPLACE_GEOCLUSTER_HPP
