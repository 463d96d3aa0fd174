#ifndef MESHPLACE_NETGRAPH_HPP
#define MESHPLACE_NETGRAPH_HPP

#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace meshplace {

/// Geographic position in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint &) const = default;
};

struct Node {
  NodeId id = 0;
  GeoPoint pos;
  std::string name; // empty when absent

  bool operator==(const Node &) const = default;
};

/// Directed wireless link. A link measured in both directions is stored as
/// two Link records with independent bandwidths.
struct Link {
  NodeId src = 0;
  NodeId dst = 0;
  Mbps bandwidth = 0.0;

  bool operator==(const Link &) const = default;
};

struct Violation {
  std::string rule;
  std::string message;
};

/// Immutable underlay graph: routers with positions and directed,
/// bandwidth-weighted links.
///
/// The graph accepts any node/link lists; validate() reports broken
/// invariants. Links whose endpoints are out of range are ignored by the
/// bandwidth computations.
class NetworkGraph {
public:
  struct Arc {
    NodeId to;
    Mbps bandwidth;
  };

  NetworkGraph() = default;

  NetworkGraph(std::vector<Node> nodes, std::vector<Link> links)
      : nodes_(std::move(nodes)), links_(std::move(links)), out_(nodes_.size()) {
    for (const Link &l : links_) {
      if (l.src < nodes_.size() && l.dst < nodes_.size() && l.src != l.dst)
        out_[l.src].push_back({l.dst, l.bandwidth});
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node> &nodes() const { return nodes_; }
  const std::vector<Link> &links() const { return links_; }
  const Node &node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Arc> &out_arcs(NodeId id) const { return out_.at(id); }

  bool contains(NodeId id) const { return id < nodes_.size(); }

  /// Neighbor sets of the undirected view: u and v are adjacent when a link
  /// exists in either direction. Sorted, without self-loops.
  std::vector<std::vector<NodeId>> undirected_adjacency() const {
    std::vector<std::set<NodeId>> sets(nodes_.size());
    for (const Link &l : links_) {
      if (l.src < nodes_.size() && l.dst < nodes_.size() && l.src != l.dst) {
        sets[l.src].insert(l.dst);
        sets[l.dst].insert(l.src);
      }
    }
    std::vector<std::vector<NodeId>> adj(nodes_.size());
    for (std::size_t i = 0; i < sets.size(); ++i)
      adj[i].assign(sets[i].begin(), sets[i].end());
    return adj;
  }

private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<Arc>> out_;
};

/// n x n matrix of widest-path bandwidths; entry (i, j) is the bandwidth of
/// the best route from i to j.
class BandwidthMatrix {
public:
  /// Diagonal marker. Never part of any objective sum.
  static constexpr Mbps self = std::numeric_limits<Mbps>::infinity();

  BandwidthMatrix() = default;
  explicit BandwidthMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      data_[i * n + i] = self;
  }

  std::size_t size() const { return n_; }
  Mbps operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  Mbps &operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  bool operator==(const BandwidthMatrix &) const = default;

private:
  std::size_t n_ = 0;
  std::vector<Mbps> data_;
};

namespace detail {

inline void check_node(const NetworkGraph &g, NodeId id) {
  if (!g.contains(id))
    throw std::invalid_argument("unknown node id " + std::to_string(id) + " (graph has " +
                                std::to_string(g.size()) + " nodes)");
}

/// Widest-path widths from one source: best-first label setting on the
/// bottleneck value. Links with zero bandwidth carry nothing and never make a
/// node reachable.
inline std::vector<Mbps> widest_from(const NetworkGraph &g, NodeId source) {
  std::vector<Mbps> width(g.size(), 0.0);
  std::vector<char> settled(g.size(), 0);
  width[source] = BandwidthMatrix::self;
  using Entry = std::pair<Mbps, NodeId>;
  // max width first, then lowest id
  auto cmp = [](const Entry &a, const Entry &b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> frontier(cmp);
  frontier.push({width[source], source});
  while (!frontier.empty()) {
    const auto [w, u] = frontier.top();
    frontier.pop();
    if (settled[u])
      continue;
    settled[u] = 1;
    for (const auto &arc : g.out_arcs(u)) {
      const Mbps through = std::min(w, arc.bandwidth);
      if (!settled[arc.to] && through > width[arc.to]) {
        width[arc.to] = through;
        frontier.push({through, arc.to});
      }
    }
  }
  return width;
}

} // namespace detail

/// Maximum over all i->j routes of the minimum link bandwidth on the route.
/// Returns 0 when j is unreachable and BandwidthMatrix::self when i == j.
inline Mbps path_bandwidth(const NetworkGraph &g, NodeId i, NodeId j) {
  detail::check_node(g, i);
  detail::check_node(g, j);
  if (i == j)
    return BandwidthMatrix::self;
  return detail::widest_from(g, i)[j];
}

/// Batch form of path_bandwidth. Sources are processed in parallel; each row
/// is computed independently so the result does not depend on thread count.
inline BandwidthMatrix all_pairs_bandwidth(const NetworkGraph &g) {
  const std::size_t n = g.size();
  BandwidthMatrix m(n);
  parallel_for(n, [&](std::size_t i) {
    const auto row = detail::widest_from(g, static_cast<NodeId>(i));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        m(i, j) = row[j];
  });
  return m;
}

/// Checks every graph invariant; an empty result means the graph is sound.
inline std::vector<Violation> validate(const NetworkGraph &g) {
  std::vector<Violation> out;
  auto add = [&out](std::string rule, std::string message) {
    out.push_back({std::move(rule), std::move(message)});
  };
  const auto &nodes = g.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node &nd = nodes[i];
    if (nd.id != i)
      add("dense-ids", "node at position " + std::to_string(i) + " has id " + std::to_string(nd.id) +
                           ", expected " + std::to_string(i));
    if (!(nd.pos.lat >= -90.0 && nd.pos.lat <= 90.0))
      add("latitude-range", "node " + std::to_string(nd.id) + " latitude out of [-90, 90]");
    if (!(nd.pos.lon >= -180.0 && nd.pos.lon <= 180.0))
      add("longitude-range", "node " + std::to_string(nd.id) + " longitude out of [-180, 180]");
  }
  std::map<NodeId, std::size_t> id_count;
  for (const Node &nd : nodes)
    ++id_count[nd.id];
  for (const auto &[id, count] : id_count)
    if (count > 1)
      add("unique-ids", "node id " + std::to_string(id) + " appears " + std::to_string(count) + " times");

  std::set<NodeId> present;
  for (const Node &nd : nodes)
    present.insert(nd.id);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Link &l : g.links()) {
    const std::string pair = "(" + std::to_string(l.src) + "," + std::to_string(l.dst) + ")";
    if (!present.count(l.src))
      add("link-endpoint", "link " + pair + " references absent node " + std::to_string(l.src));
    if (!present.count(l.dst))
      add("link-endpoint", "link " + pair + " references absent node " + std::to_string(l.dst));
    if (l.src == l.dst)
      add("self-loop", "link " + pair + " is a self-loop");
    if (!(l.bandwidth >= 0.0) || std::isinf(l.bandwidth))
      add("bandwidth", "link " + pair + " has invalid bandwidth");
    if (!seen.insert({l.src, l.dst}).second)
      add("duplicate-link", "duplicate link " + pair);
  }
  return out;
}

} // namespace meshplace

#endif // MESHPLACE_NETGRAPH_HPP
