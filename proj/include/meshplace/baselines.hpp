#ifndef MESHPLACE_BASELINES_HPP
#define MESHPLACE_BASELINES_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "geocluster.hpp"
#include "netgraph.hpp"
#include "placement.hpp"

namespace meshplace {

using BigInt = boost::multiprecision::cpp_int;

/// Number of partitions of an n-set into k non-empty blocks.
inline BigInt stirling2(unsigned n, unsigned k) {
  // row[j] holds S(i, j) for the current i
  std::vector<BigInt> row(k + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i) {
    for (unsigned j = std::min(i, k); j >= 1; --j)
      row[j] = BigInt(j) * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

/// Naive baseline head choice: the member nearest to its cluster centroid
/// (lowest node id on ties); the k-means assignment is kept as is.
inline Placement naive_from_partition(std::span<const PlanarPoint> points, const Partition &part) {
  Placement p;
  const auto clusters = part.clusters();
  for (std::size_t c = 0; c < part.k; ++c) {
    if (clusters[c].empty())
      throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
    NodeId best = clusters[c].front();
    double best_d = squared_distance(points[best], part.centroids[c]);
    for (NodeId i : clusters[c]) {
      const double d = squared_distance(points[i], part.centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    p.heads.push_back(best);
  }
  p.assignment = part.assignment;
  return p;
}

/// Bandwidth-blind k-means placement; keeps the repetition with the lowest
/// within-cluster sum of squares. Repetition seeds match basp().
inline PlacementReport naive_kmeans_placement(const BandwidthMatrix &bw, std::span<const PlanarPoint> points,
                                              std::size_t k, Seed seed, std::size_t repetitions,
                                              std::size_t max_iter = default_kmeans_max_iter) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_k(bw.size(), k, repetitions);
  std::vector<detail::ChainResult> chains(repetitions);
  parallel_for(repetitions, [&](std::size_t rep) {
    auto &chain = chains[rep];
    chain.partition = kmeans(points, k, repetition_seed(seed, rep), max_iter);
    chain.placement = naive_from_partition(points, chain.partition);
    chain.score = chain.partition.wcss();
    chain.objective = objective(bw, chain.placement);
  });
  const std::size_t best = detail::pick_best(chains, false);
  PlacementReport r = make_report(bw, chains[best].placement, "naive", seed);
  for (const auto &c : chains) {
    r.repetition_scores.push_back(c.score);
    r.repetition_objectives.push_back(c.objective);
  }
  r.score_name = "wcss_m2";
  r.best_repetition = best;
  r.partition = chains[best].partition;
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline PlacementReport naive_kmeans_placement(const NetworkGraph &g, std::size_t k, Seed seed,
                                              std::size_t repetitions) {
  detail::check_k(g.size(), k, repetitions);
  return naive_kmeans_placement(all_pairs_bandwidth(g), project(g), k, seed, repetitions);
}

/// How the random baseline attaches nodes to its randomly drawn heads.
enum class RandomAssignment {
  bandwidth,  // head with the best bandwidth towards the node
  nearest_geo // geographically nearest head
};

/// k heads drawn uniformly without replacement.
inline PlacementReport random_placement(const BandwidthMatrix &bw, std::span<const PlanarPoint> points,
                                        std::size_t k, Seed seed,
                                        RandomAssignment mode = RandomAssignment::bandwidth) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = bw.size();
  detail::check_k(n, k, 1);
  std::mt19937_64 rng(seed);
  std::vector<NodeId> heads;
  for (auto idx : sample_without_replacement(n, k, rng))
    heads.push_back(static_cast<NodeId>(idx));

  Placement p;
  if (mode == RandomAssignment::bandwidth) {
    p = recompute_clusters(bw, heads);
  } else {
    p.heads = heads;
    p.assignment.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c)
        if (squared_distance(points[heads[c]], points[j]) < squared_distance(points[heads[best]], points[j]))
          best = c;
      p.assignment[j] = best;
    }
    for (std::size_t c = 0; c < k; ++c)
      p.assignment[heads[c]] = c;
  }
  PlacementReport r = make_report(bw, std::move(p), "random", seed);
  r.repetition_scores = {r.objective};
  r.repetition_objectives = {r.objective};
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline PlacementReport random_placement(const NetworkGraph &g, std::size_t k, Seed seed,
                                        RandomAssignment mode = RandomAssignment::bandwidth) {
  detail::check_k(g.size(), k, 1);
  return random_placement(all_pairs_bandwidth(g), project(g), k, seed, mode);
}

/// Limits for the exhaustive oracle.
struct OracleBudget {
  std::uint64_t max_combinations = 10'000'000;
  double max_seconds = 600.0;
};

/// The oracle refused or abandoned the enumeration.
class BudgetExceeded : public RuntimeFailure {
public:
  using RuntimeFailure::RuntimeFailure;
};

namespace detail {

/// Advances `comb` (strictly increasing values in [lo, n)) to the next
/// combination in lexicographic order; false after the last one.
inline bool next_combination(std::vector<NodeId> &comb, std::size_t first, NodeId n) {
  const std::size_t m = comb.size();
  std::size_t i = m;
  while (i > first) {
    --i;
    if (comb[i] < n - (m - i)) {
      ++comb[i];
      for (std::size_t j = i + 1; j < m; ++j)
        comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

/// Objective of the best assignment for a fixed head set: every non-head
/// node takes its best head independently.
inline Mbps best_assignment_value(const BandwidthMatrix &bw, const std::vector<NodeId> &heads,
                                  std::vector<char> &is_head) {
  for (NodeId h : heads)
    is_head[h] = 1;
  Mbps total = 0.0;
  for (std::size_t j = 0; j < bw.size(); ++j) {
    if (is_head[j])
      continue;
    Mbps best = 0.0;
    for (NodeId h : heads)
      best = std::max(best, bw(h, j));
    total += best;
  }
  for (NodeId h : heads)
    is_head[h] = 0;
  return total;
}

} // namespace detail

/// Exact optimum by enumerating all C(n, k) head sets. Ties go to the
/// lexicographically smallest head set. Throws BudgetExceeded when C(n, k)
/// exceeds the budget or the time limit runs out.
inline PlacementReport brute_force_optimal(const BandwidthMatrix &bw, std::size_t k, const OracleBudget &budget = {}) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = bw.size();
  detail::check_k(n, k, 1);
  if (budget.max_combinations == 0 || !(budget.max_seconds > 0.0))
    throw std::invalid_argument("oracle budget must be positive");
  const BigInt total = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k));
  if (total > budget.max_combinations)
    throw BudgetExceeded("C(" + std::to_string(n) + "," + std::to_string(k) + ") = " + total.str() +
                         " head sets exceeds the budget of " + std::to_string(budget.max_combinations));

  // One task per first head; tasks in order of first head keep the
  // enumeration lexicographic when reduced in index order.
  const std::size_t tasks = n - k + 1;
  struct Best {
    std::vector<NodeId> heads;
    Mbps value = -1.0;
  };
  std::vector<Best> best(tasks);
  std::atomic<bool> out_of_time{false};
  parallel_for(tasks, [&](std::size_t a) {
    std::vector<NodeId> comb(k);
    for (std::size_t i = 0; i < k; ++i)
      comb[i] = static_cast<NodeId>(a + i);
    std::vector<char> is_head(n, 0);
    std::uint64_t counter = 0;
    do {
      if ((++counter & 0xfff) == 0) {
        if (out_of_time.load())
          return;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > budget.max_seconds) {
          out_of_time = true;
          return;
        }
      }
      const Mbps v = detail::best_assignment_value(bw, comb, is_head);
      if (v > best[a].value) {
        best[a].value = v;
        best[a].heads = comb;
      }
    } while (detail::next_combination(comb, 1, static_cast<NodeId>(n)));
  });
  if (out_of_time)
    throw BudgetExceeded("oracle exceeded its time budget of " + std::to_string(budget.max_seconds) + " s");

  std::size_t winner = 0;
  for (std::size_t a = 1; a < tasks; ++a)
    if (best[a].value > best[winner].value)
      winner = a;
  PlacementReport r = make_report(bw, recompute_clusters(bw, best[winner].heads), "optimal", 0);
  r.repetition_scores = {r.objective};
  r.repetition_objectives = {r.objective};
  r.combinations = static_cast<std::uint64_t>(total);
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline PlacementReport brute_force_optimal(const NetworkGraph &g, std::size_t k, const OracleBudget &budget = {}) {
  detail::check_k(g.size(), k, 1);
  return brute_force_optimal(all_pairs_bandwidth(g), k, budget);
}

} // namespace meshplace

#endif // MESHPLACE_BASELINES_HPP
