#ifndef MESHPLACE_SYNTHGEN_HPP
#define MESHPLACE_SYNTHGEN_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include "common.hpp"
#include "geocluster.hpp"
#include "netgraph.hpp"

namespace meshplace {

/// Parameters of a synthetic community mesh. Defaults follow a measured
/// community mesh: 54 live nodes, exponential link throughput with mean
/// 21.8 Mbps, 56% of node pairs linked in one direction only.
struct TopologyProfile {
  std::size_t n = 54;
  double area_m = 2000.0;
  Mbps bw_mean = 21.8;
  double unidirectional_share = 0.56;
  double target_mean_degree = 5.0;
  Seed seed = 1;
  /// Geographic center of the generated square.
  GeoPoint origin{41.3890, 2.1130};
};

inline void check_profile(const TopologyProfile &p) {
  if (p.n < 2)
    throw std::invalid_argument("profile: n must be at least 2");
  if (!(p.area_m > 0.0))
    throw std::invalid_argument("profile: area must be positive");
  if (!(p.bw_mean > 0.0))
    throw std::invalid_argument("profile: bandwidth mean must be positive");
  if (!(p.unidirectional_share >= 0.0 && p.unidirectional_share <= 1.0))
    throw std::invalid_argument("profile: unidirectional share must lie in [0, 1]");
  if (!(p.target_mean_degree > 0.0))
    throw std::invalid_argument("profile: target mean degree must be positive");
  if (!(p.origin.lat >= -80.0 && p.origin.lat <= 80.0 && p.origin.lon >= -170.0 && p.origin.lon <= 170.0))
    throw std::invalid_argument("profile: origin too close to a pole or the antimeridian");
}

inline json profile_to_json(const TopologyProfile &p) {
  return {{"n", p.n},
          {"area_m", p.area_m},
          {"bw_mean_mbps", p.bw_mean},
          {"unidirectional_share", p.unidirectional_share},
          {"target_mean_degree", p.target_mean_degree},
          {"seed", p.seed},
          {"origin", {{"lat", p.origin.lat}, {"lon", p.origin.lon}}}};
}

/// Reads a profile document; absent keys keep their defaults.
inline TopologyProfile profile_from_json(const json &j) {
  TopologyProfile p;
  try {
    p.n = j.value("n", p.n);
    p.area_m = j.value("area_m", p.area_m);
    p.bw_mean = j.value("bw_mean_mbps", p.bw_mean);
    p.unidirectional_share = j.value("unidirectional_share", p.unidirectional_share);
    p.target_mean_degree = j.value("target_mean_degree", p.target_mean_degree);
    p.seed = j.value("seed", p.seed);
    if (j.contains("origin")) {
      p.origin.lat = j.at("origin").value("lat", p.origin.lat);
      p.origin.lon = j.at("origin").value("lon", p.origin.lon);
    }
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("malformed profile: ") + e.what());
  }
  return p;
}

struct GeneratedTopology {
  NetworkGraph graph;
  /// Connection radius that yields the target edge count.
  double radius_m = 0.0;
  /// Node pairs added beyond the radius to make the graph weakly connected.
  std::vector<std::pair<NodeId, NodeId>> bridges;

  json metadata(const TopologyProfile &profile) const {
    json b = json::array();
    for (const auto &[u, v] : bridges)
      b.push_back({u, v});
    return {{"generator", "geometric"}, {"profile", profile_to_json(profile)}, {"radius_m", radius_m}, {"bridges", b}};
  }
};

namespace detail {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

} // namespace detail

inline bool weakly_connected(const NetworkGraph &g) {
  if (g.size() == 0)
    return true;
  detail::DisjointSets ds(g.size());
  std::size_t components = g.size();
  for (const Link &l : g.links())
    if (l.src < g.size() && l.dst < g.size() && ds.unite(l.src, l.dst))
      --components;
  return components == 1;
}

/// Random geometric mesh. Nodes are uniform in the square; the closest
/// round(n * degree / 2) pairs become links (capped at all pairs), then the
/// shortest pairs joining separate components are added as bridges. Each
/// linked pair is one-way with probability unidirectional_share, and every
/// directed link draws its bandwidth from exponential(bw_mean).
inline GeneratedTopology generate(const TopologyProfile &profile) {
  check_profile(profile);
  const std::size_t n = profile.n;
  std::mt19937_64 rng(profile.seed);
  std::uniform_real_distribution<double> coord(-profile.area_m / 2.0, profile.area_m / 2.0);
  std::vector<PlanarPoint> pos(n);
  for (auto &p : pos) {
    p.x = coord(rng);
    p.y = coord(rng);
  }

  std::vector<std::tuple<double, NodeId, NodeId>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      pairs.emplace_back(squared_distance(pos[i], pos[j]), i, j);
  std::sort(pairs.begin(), pairs.end());

  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * profile.target_mean_degree / 2.0));
  const std::size_t accepted = std::clamp<std::size_t>(target, 1, pairs.size());

  GeneratedTopology out;
  out.radius_m = std::sqrt(std::get<0>(pairs[accepted - 1]));
  std::vector<std::pair<NodeId, NodeId>> chosen;
  detail::DisjointSets ds(n);
  std::size_t components = n;
  for (std::size_t e = 0; e < accepted; ++e) {
    const auto [d, u, v] = pairs[e];
    chosen.emplace_back(u, v);
    if (ds.unite(u, v))
      --components;
  }
  for (std::size_t e = accepted; e < pairs.size() && components > 1; ++e) {
    const auto [d, u, v] = pairs[e];
    if (ds.unite(u, v)) {
      --components;
      chosen.emplace_back(u, v);
      out.bridges.emplace_back(u, v);
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::exponential_distribution<double> bandwidth(1.0 / profile.bw_mean);
  std::vector<Link> links;
  for (const auto &[u, v] : chosen) {
    if (unit(rng) < profile.unidirectional_share) {
      if (coin(rng))
        links.push_back({u, v, bandwidth(rng)});
      else
        links.push_back({v, u, bandwidth(rng)});
    } else {
      links.push_back({u, v, bandwidth(rng)});
      links.push_back({v, u, bandwidth(rng)});
    }
  }

  std::vector<Node> nodes(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].pos = unproject_about(pos[i], profile.origin);
  }
  out.graph = NetworkGraph(std::move(nodes), std::move(links));
  if (!weakly_connected(out.graph))
    throw RuntimeFailure("generator failed to produce a weakly connected graph");
  return out;
}

} // namespace meshplace

#endif // MESHPLACE_SYNTHGEN_HPP
