#ifndef MESHPLACE_PLACEMENT_HPP
#define MESHPLACE_PLACEMENT_HPP

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "geocluster.hpp"
#include "netgraph.hpp"

namespace meshplace {

/// k service locations (cluster heads) and the cluster of every node.
struct Placement {
  std::vector<NodeId> heads;
  /// assignment[node] indexes into heads.
  std::vector<std::size_t> assignment;

  std::size_t k() const { return heads.size(); }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(heads.size(), 0);
    for (auto c : assignment)
      ++sizes[c];
    return sizes;
  }

  bool operator==(const Placement &) const = default;
};

/// Throws std::invalid_argument unless p is a well-formed placement over n nodes.
inline void check_placement(std::size_t n, const Placement &p) {
  if (p.heads.empty())
    throw std::invalid_argument("placement has no heads");
  if (p.assignment.size() != n)
    throw std::invalid_argument("placement assigns " + std::to_string(p.assignment.size()) + " nodes, graph has " +
                                std::to_string(n));
  std::set<NodeId> distinct;
  for (NodeId h : p.heads) {
    if (h >= n)
      throw std::invalid_argument("head " + std::to_string(h) + " is not a node");
    if (!distinct.insert(h).second)
      throw std::invalid_argument("duplicate head " + std::to_string(h));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (p.assignment[j] >= p.heads.size())
      throw std::invalid_argument("node " + std::to_string(j) + " assigned to missing cluster");
  for (std::size_t c = 0; c < p.heads.size(); ++c)
    if (p.assignment[p.heads[c]] != c)
      throw std::invalid_argument("head " + std::to_string(p.heads[c]) + " is not in its own cluster");
}

/// Sum over clusters of the bandwidth from the head to every other member.
inline Mbps objective(const BandwidthMatrix &bw, const Placement &p) {
  check_placement(bw.size(), p);
  Mbps total = 0.0;
  for (std::size_t j = 0; j < p.assignment.size(); ++j) {
    const NodeId head = p.heads[p.assignment[j]];
    if (head != j)
      total += bw(head, j);
  }
  return total;
}

inline Mbps objective(const NetworkGraph &g, const Placement &p) {
  check_placement(g.size(), p);
  std::vector<std::vector<Mbps>> rows;
  rows.reserve(p.heads.size());
  for (NodeId h : p.heads)
    rows.push_back(detail::widest_from(g, h));
  Mbps total = 0.0;
  for (std::size_t j = 0; j < p.assignment.size(); ++j) {
    const std::size_t c = p.assignment[j];
    if (p.heads[c] != j)
      total += rows[c][j];
  }
  return total;
}

/// Phase two: in every cluster, the member with the largest total bandwidth
/// towards the other members. Ties go to the lowest node id.
inline std::vector<NodeId> find_cluster_heads(const BandwidthMatrix &bw,
                                              const std::vector<std::vector<NodeId>> &clusters) {
  std::vector<NodeId> heads;
  heads.reserve(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto &members = clusters[c];
    if (members.empty())
      throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
    NodeId best = members.front();
    Mbps best_score = -1.0;
    for (NodeId i : members) {
      Mbps score = 0.0;
      for (NodeId j : members)
        if (j != i)
          score += bw(i, j);
      if (score > best_score || (score == best_score && i < best)) {
        best_score = score;
        best = i;
      }
    }
    heads.push_back(best);
  }
  return heads;
}

inline std::vector<NodeId> find_cluster_heads(const NetworkGraph &g, const Partition &part) {
  return find_cluster_heads(all_pairs_bandwidth(g), part.clusters());
}

/// Phase three: every non-head node joins the head with the highest bandwidth
/// towards it (lowest head index on ties); heads keep their own cluster.
inline Placement recompute_clusters(const BandwidthMatrix &bw, const std::vector<NodeId> &heads) {
  const std::size_t n = bw.size();
  if (heads.empty())
    throw std::invalid_argument("recompute_clusters: no heads");
  std::vector<std::size_t> head_index(n, heads.size());
  for (std::size_t c = 0; c < heads.size(); ++c) {
    if (heads[c] >= n)
      throw std::invalid_argument("head " + std::to_string(heads[c]) + " is not a node");
    if (head_index[heads[c]] != heads.size())
      throw std::invalid_argument("duplicate head " + std::to_string(heads[c]));
    head_index[heads[c]] = c;
  }
  Placement p;
  p.heads = heads;
  p.assignment.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (head_index[j] != heads.size()) {
      p.assignment[j] = head_index[j];
      continue;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < heads.size(); ++c)
      if (bw(heads[c], j) > bw(heads[best], j))
        best = c;
    p.assignment[j] = best;
  }
  return p;
}

inline Placement recompute_clusters(const NetworkGraph &g, const std::vector<NodeId> &heads) {
  return recompute_clusters(all_pairs_bandwidth(g), heads);
}

/// Result of one placement strategy on one graph.
struct PlacementReport {
  std::string strategy;
  Seed seed = 0;
  Placement placement;
  Mbps objective = 0.0;
  /// objective / (number of non-head nodes).
  Mbps mean_bw_to_head = 0.0;
  /// Per cluster: head-to-member bandwidth averaged over non-head members.
  std::vector<Mbps> per_cluster_mean;
  double runtime_s = 0.0;
  /// Score of every repetition (objective, or WCSS for bandwidth-blind
  /// strategies) and which one was kept.
  std::vector<double> repetition_scores;
  /// Objective reached by every repetition.
  std::vector<Mbps> repetition_objectives;
  std::string score_name = "objective";
  std::size_t best_repetition = 0;
  /// Head sets examined (exhaustive oracle only).
  std::uint64_t combinations = 0;
  std::optional<Partition> partition;
};

/// Fills objective and the mean figures from scratch.
inline PlacementReport make_report(const BandwidthMatrix &bw, Placement p, std::string strategy, Seed seed) {
  PlacementReport r;
  r.objective = objective(bw, p);
  const std::size_t n = p.assignment.size();
  const std::size_t k = p.heads.size();
  r.mean_bw_to_head = n > k ? r.objective / static_cast<double>(n - k) : 0.0;
  std::vector<Mbps> sums(k, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const NodeId head = p.heads[p.assignment[j]];
    if (head != j)
      sums[p.assignment[j]] += bw(head, j);
  }
  const auto sizes = p.cluster_sizes();
  for (std::size_t c = 0; c < k; ++c)
    r.per_cluster_mean.push_back(sizes[c] > 1 ? sums[c] / static_cast<double>(sizes[c] - 1) : 0.0);
  r.placement = std::move(p);
  r.strategy = std::move(strategy);
  r.seed = seed;
  return r;
}

inline json report_to_json(const PlacementReport &r, bool include_timing = false) {
  json j;
  j["strategy"] = r.strategy;
  j["seed"] = r.seed;
  j["k"] = r.placement.k();
  j["heads"] = r.placement.heads;
  j["assignment"] = r.placement.assignment;
  j["cluster_sizes"] = r.placement.cluster_sizes();
  j["objective_mbps"] = r.objective;
  j["mean_bw_to_head_mbps"] = r.mean_bw_to_head;
  j["per_cluster_mean_mbps"] = r.per_cluster_mean;
  j["repetitions"] = r.repetition_scores.size();
  j["repetition_score"] = r.score_name;
  j["repetition_scores"] = r.repetition_scores;
  j["repetition_objectives_mbps"] = r.repetition_objectives;
  j["best_repetition"] = r.best_repetition;
  if (r.combinations != 0)
    j["combinations"] = r.combinations;
  if (include_timing)
    j["runtime_s"] = r.runtime_s;
  return j;
}

/// Reads heads and assignment back from a report (or any object carrying
/// those two fields).
inline Placement placement_from_json(const json &j) {
  try {
    Placement p;
    p.heads = j.at("heads").get<std::vector<NodeId>>();
    p.assignment = j.at("assignment").get<std::vector<std::size_t>>();
    return p;
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("malformed placement document: ") + e.what());
  }
}

/// One BASP chain from a given geographic partition: heads by bandwidth
/// inside each cluster, then reassignment by bandwidth.
inline Placement basp_from_partition(const BandwidthMatrix &bw, const Partition &part) {
  return recompute_clusters(bw, find_cluster_heads(bw, part.clusters()));
}

namespace detail {

struct ChainResult {
  Partition partition;
  Placement placement;
  double score = 0.0;
  Mbps objective = 0.0;
};

inline void check_k(std::size_t n, std::size_t k, std::size_t repetitions) {
  if (k == 0 || k > n)
    throw std::invalid_argument("k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  if (repetitions == 0)
    throw std::invalid_argument("repetitions must be at least 1");
}

/// Picks the repetition with the highest score (lowest index on ties) when
/// maximize, lowest score otherwise.
inline std::size_t pick_best(const std::vector<ChainResult> &chains, bool maximize) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < chains.size(); ++r) {
    const bool better = maximize ? chains[r].score > chains[best].score : chains[r].score < chains[best].score;
    if (better)
      best = r;
  }
  return best;
}

} // namespace detail

/// Sub-seed for repetition `rep` of a multi-repetition strategy. Shared by
/// BASP and the naive baseline so both see the same initial partitions.
inline Seed repetition_seed(Seed seed, std::size_t rep) { return derive_seed(seed, rep); }

/// Bandwidth-aware service placement with a precomputed bandwidth matrix and
/// projected positions. Keeps the best of `repetitions` independent chains.
inline PlacementReport basp(const BandwidthMatrix &bw, std::span<const PlanarPoint> points, std::size_t k, Seed seed,
                            std::size_t repetitions, std::size_t max_iter = default_kmeans_max_iter) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_k(bw.size(), k, repetitions);
  std::vector<detail::ChainResult> chains(repetitions);
  parallel_for(repetitions, [&](std::size_t rep) {
    auto &chain = chains[rep];
    chain.partition = kmeans(points, k, repetition_seed(seed, rep), max_iter);
    chain.placement = basp_from_partition(bw, chain.partition);
    chain.objective = objective(bw, chain.placement);
    chain.score = chain.objective;
  });
  const std::size_t best = detail::pick_best(chains, true);
  PlacementReport r = make_report(bw, chains[best].placement, "basp", seed);
  for (const auto &c : chains) {
    r.repetition_scores.push_back(c.score);
    r.repetition_objectives.push_back(c.objective);
  }
  r.best_repetition = best;
  r.partition = chains[best].partition;
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// End-to-end BASP on a graph; runtime covers the bandwidth matrix too.
inline PlacementReport basp(const NetworkGraph &g, std::size_t k, Seed seed, std::size_t repetitions,
                            std::size_t max_iter = default_kmeans_max_iter) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_k(g.size(), k, repetitions);
  const auto bw = all_pairs_bandwidth(g);
  const auto points = project(g);
  PlacementReport r = basp(bw, points, k, seed, repetitions, max_iter);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace meshplace

#endif // MESHPLACE_PLACEMENT_HPP
