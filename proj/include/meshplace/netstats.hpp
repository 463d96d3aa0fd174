#ifndef MESHPLACE_NETSTATS_HPP
#define MESHPLACE_NETSTATS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "netgraph.hpp"
#include "placement.hpp"

namespace meshplace {

struct ClusterCentrality {
  NodeId head = 0;
  std::size_t size = 0;
  std::size_t head_degree = 0;
  double head_neighborhood_connectivity = 0.0;
  /// Longest shortest hop path inside the cluster's induced undirected
  /// subgraph, over the pairs that are connected there.
  std::size_t diameter = 0;
  bool connected = true;
};

struct CentralityReport {
  /// Undirected-view link count per node.
  std::vector<std::size_t> degree;
  /// Mean degree of each node's neighbors (0 for isolated nodes).
  std::vector<double> neighborhood_connectivity;
  std::vector<ClusterCentrality> clusters;
};

namespace detail {

/// Hop distances from `source` restricted to nodes with in_set true.
inline std::vector<std::size_t> bfs_hops(const std::vector<std::vector<NodeId>> &adj, NodeId source,
                                         const std::vector<char> &in_set) {
  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(adj.size(), unreached);
  std::queue<NodeId> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : adj[u]) {
      if (in_set[v] && dist[v] == unreached) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

} // namespace detail

/// Head degree, head neighborhood connectivity and cluster diameter for every
/// cluster of a placement, plus the per-node figures they derive from.
inline CentralityReport centrality(const NetworkGraph &g, const Placement &p) {
  check_placement(g.size(), p);
  const auto adj = g.undirected_adjacency();
  const std::size_t n = g.size();
  CentralityReport r;
  r.degree.resize(n);
  r.neighborhood_connectivity.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.degree[i] = adj[i].size();
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].empty())
      continue;
    double sum = 0.0;
    for (NodeId v : adj[i])
      sum += static_cast<double>(r.degree[v]);
    r.neighborhood_connectivity[i] = sum / static_cast<double>(adj[i].size());
  }

  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < p.k(); ++c) {
    ClusterCentrality cc;
    cc.head = p.heads[c];
    cc.head_degree = r.degree[cc.head];
    cc.head_neighborhood_connectivity = r.neighborhood_connectivity[cc.head];
    std::vector<char> in_set(n, 0);
    std::vector<NodeId> members;
    for (std::size_t j = 0; j < n; ++j) {
      if (p.assignment[j] == c) {
        in_set[j] = 1;
        members.push_back(static_cast<NodeId>(j));
      }
    }
    cc.size = members.size();
    for (NodeId s : members) {
      const auto dist = detail::bfs_hops(adj, s, in_set);
      for (NodeId t : members) {
        if (dist[t] == unreached)
          cc.connected = false;
        else
          cc.diameter = std::max(cc.diameter, dist[t]);
      }
    }
    r.clusters.push_back(cc);
  }
  return r;
}

inline std::string centrality_to_csv(const CentralityReport &r) {
  std::ostringstream out;
  out.precision(17);
  out << "cluster,head,size,head_degree,head_neighborhood_connectivity,diameter,connected\n";
  for (std::size_t c = 0; c < r.clusters.size(); ++c) {
    const auto &cc = r.clusters[c];
    out << c << ',' << cc.head << ',' << cc.size << ',' << cc.head_degree << ',' << cc.head_neighborhood_connectivity
        << ',' << cc.diameter << ',' << (cc.connected ? 1 : 0) << '\n';
  }
  return out.str();
}

inline json centrality_to_json(const CentralityReport &r) {
  json clusters = json::array();
  for (const auto &cc : r.clusters)
    clusters.push_back({{"head", cc.head},
                        {"size", cc.size},
                        {"head_degree", cc.head_degree},
                        {"head_neighborhood_connectivity", cc.head_neighborhood_connectivity},
                        {"diameter", cc.diameter},
                        {"connected", cc.connected}});
  return {{"clusters", std::move(clusters)},
          {"degree", r.degree},
          {"neighborhood_connectivity", r.neighborhood_connectivity}};
}

/// Right-continuous empirical CDF: fraction[i] = P(X <= value[i]).
struct EcdfTable {
  std::vector<double> values;
  std::vector<double> fractions;

  double operator()(double x) const {
    const auto it = std::upper_bound(values.begin(), values.end(), x);
    if (it == values.begin())
      return 0.0;
    return fractions[static_cast<std::size_t>(it - values.begin()) - 1];
  }
};

inline EcdfTable ecdf(std::span<const double> samples) {
  if (samples.empty())
    throw std::invalid_argument("ecdf: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  EcdfTable t;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
      continue;
    t.values.push_back(sorted[i]);
    t.fractions.push_back(i + 1 == sorted.size() ? 1.0 : static_cast<double>(i + 1) / n);
  }
  return t;
}

inline std::string ecdf_to_csv(const EcdfTable &t) {
  std::ostringstream out;
  out.precision(17);
  out << "value,fraction\n";
  for (std::size_t i = 0; i < t.values.size(); ++i)
    out << t.values[i] << ',' << t.fractions[i] << '\n';
  return out.str();
}

/// Maximum-likelihood mean of an exponential distribution, i.e. the sample mean.
inline double fit_exponential(std::span<const double> samples) {
  if (samples.empty())
    throw std::invalid_argument("fit_exponential: empty sample");
  double sum = 0.0;
  for (double x : samples) {
    if (!(x > 0.0))
      throw std::invalid_argument("fit_exponential: samples must be positive");
    sum += x;
  }
  return sum / static_cast<double>(samples.size());
}

/// Kolmogorov distribution survival function Q(lambda) = P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0)
    return 1.0;
  if (lambda < 1.18) {
    // small-lambda form converges faster
    const double pi = std::numbers::pi;
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double cdf = 0.0;
    for (int j = 1; j <= 50; j += 2)
      cdf += std::pow(y, j * j);
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    if (term < 1e-17)
      break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against exponential(mean), with the
/// usual finite-sample correction on the asymptotic p-value.
inline KsResult ks_test_exponential(std::span<const double> samples, double mean) {
  if (samples.empty())
    throw std::invalid_argument("ks_test_exponential: empty sample");
  if (!(mean > 0.0))
    throw std::invalid_argument("ks_test_exponential: mean must be positive");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = sorted[i] > 0.0 ? 1.0 - std::exp(-sorted[i] / mean) : 0.0;
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

struct AsymmetryReport {
  std::size_t bidirectional_pairs = 0;
  std::size_t unidirectional_pairs = 0;
  std::size_t exceeding_pairs = 0;
  /// Share of bidirectional pairs whose deviation exceeds the threshold.
  double fraction_exceeding = 0.0;
  /// Share of linked pairs that carry a link in one direction only.
  double unidirectional_share = 0.0;
};

/// Deviation of a bidirectional pair is |ab - ba| / max(ab, ba).
inline AsymmetryReport link_asymmetry(const NetworkGraph &g, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("link_asymmetry: threshold must lie in (0, 1)");
  std::map<std::pair<NodeId, NodeId>, Mbps> directed;
  for (const Link &l : g.links())
    if (l.src != l.dst)
      directed[{l.src, l.dst}] = l.bandwidth;
  AsymmetryReport r;
  for (const auto &[key, ab] : directed) {
    const auto [a, b] = key;
    const auto rev = directed.find({b, a});
    if (rev == directed.end()) {
      ++r.unidirectional_pairs;
      continue;
    }
    if (a > b)
      continue;
    ++r.bidirectional_pairs;
    const double hi = std::max(ab, rev->second);
    const double dev = hi > 0.0 ? std::abs(ab - rev->second) / hi : 0.0;
    if (dev > threshold)
      ++r.exceeding_pairs;
  }
  if (r.bidirectional_pairs > 0)
    r.fraction_exceeding = static_cast<double>(r.exceeding_pairs) / static_cast<double>(r.bidirectional_pairs);
  const std::size_t pairs = r.bidirectional_pairs + r.unidirectional_pairs;
  if (pairs > 0)
    r.unidirectional_share = static_cast<double>(r.unidirectional_pairs) / static_cast<double>(pairs);
  return r;
}

inline std::vector<double> link_bandwidths(const NetworkGraph &g) {
  std::vector<double> out;
  out.reserve(g.links().size());
  for (const Link &l : g.links())
    out.push_back(l.bandwidth);
  return out;
}

} // namespace meshplace

#endif // MESHPLACE_NETSTATS_HPP
