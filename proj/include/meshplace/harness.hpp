#ifndef MESHPLACE_HARNESS_HPP
#define MESHPLACE_HARNESS_HPP

#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "common.hpp"
#include "geocluster.hpp"
#include "netgraph.hpp"
#include "placement.hpp"

namespace meshplace {

enum class Strategy { basp, naive, random, optimal };

inline std::string to_string(Strategy s) {
  switch (s) {
  case Strategy::basp:
    return "basp";
  case Strategy::naive:
    return "naive";
  case Strategy::random:
    return "random";
  case Strategy::optimal:
    return "optimal";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string &name) {
  if (name == "basp")
    return Strategy::basp;
  if (name == "naive")
    return Strategy::naive;
  if (name == "random")
    return Strategy::random;
  if (name == "optimal")
    return Strategy::optimal;
  throw std::invalid_argument("unknown strategy '" + name + "' (expected basp, naive, random or optimal)");
}

struct ExperimentSpec {
  std::vector<std::size_t> ks;
  std::vector<Strategy> strategies;
  std::size_t runs = 5;
  std::size_t repetitions = 15;
  Seed base_seed = 42;
  OracleBudget budget;
  /// A run slower than this counts as unsuccessful.
  double run_timeout_s = 300.0;
  RandomAssignment random_assignment = RandomAssignment::bandwidth;
};

inline void check_spec(const ExperimentSpec &spec, std::size_t n) {
  if (spec.runs == 0)
    throw std::invalid_argument("runs must be at least 1");
  if (spec.repetitions == 0)
    throw std::invalid_argument("repetitions must be at least 1");
  if (spec.ks.empty())
    throw std::invalid_argument("no k values given");
  if (spec.strategies.empty())
    throw std::invalid_argument("no strategies given");
  for (auto k : spec.ks)
    if (k == 0 || k > n)
      throw std::invalid_argument("k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

/// Seed of run `run` for a given k. Every strategy sees the same seed, so
/// BASP and the naive baseline start from identical k-means partitions.
inline Seed run_seed(Seed base, std::size_t k, std::size_t run) { return derive_seed(derive_seed(base, k), run); }

struct RunRecord {
  std::size_t run = 0;
  Seed seed = 0;
  bool ok = false;
  std::string error;
  PlacementReport report;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

/// Mean and sample standard deviation (0 for a single value).
inline Summary summarize(const std::vector<double> &xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty())
    return s;
  for (double x : xs)
    s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs)
      ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct Cell {
  Strategy strategy = Strategy::basp;
  std::size_t k = 0;
  std::vector<RunRecord> runs;
  std::size_t successful = 0;
  std::size_t failed = 0;
  /// Over successful runs (best repetition of each).
  Summary objective;
  Summary mean_bw;
  double mean_runtime_s = 0.0;
  /// Over every repetition of every successful run.
  Summary repetition_mean_bw;

  bool present() const { return successful > 0; }
};

struct ComparisonTable {
  std::size_t n = 0;
  ExperimentSpec spec;
  std::vector<Cell> cells;

  const Cell *find(Strategy s, std::size_t k) const {
    for (const auto &c : cells)
      if (c.strategy == s && c.k == k)
        return &c;
    return nullptr;
  }
};

/// Recomputes every aggregate of a cell from its retained run records.
inline void aggregate(Cell &cell, std::size_t n) {
  std::vector<double> obj, bw, rep_bw;
  double runtime = 0.0;
  cell.successful = cell.failed = 0;
  const double non_heads = n > cell.k ? static_cast<double>(n - cell.k) : 0.0;
  for (const auto &r : cell.runs) {
    if (!r.ok) {
      ++cell.failed;
      continue;
    }
    ++cell.successful;
    obj.push_back(r.report.objective);
    bw.push_back(r.report.mean_bw_to_head);
    runtime += r.report.runtime_s;
    for (double o : r.report.repetition_objectives)
      rep_bw.push_back(non_heads > 0 ? o / non_heads : 0.0);
  }
  cell.objective = summarize(obj);
  cell.mean_bw = summarize(bw);
  cell.repetition_mean_bw = summarize(rep_bw);
  cell.mean_runtime_s = cell.successful ? runtime / static_cast<double>(cell.successful) : 0.0;
}

/// Runs every (strategy, k) cell `runs` times. Failed or timed-out runs are
/// kept in the table but excluded from the aggregates.
inline ComparisonTable run_experiment(const NetworkGraph &g, const ExperimentSpec &spec) {
  check_spec(spec, g.size());
  const auto bw = all_pairs_bandwidth(g);
  const auto points = project(g);

  ComparisonTable table;
  table.n = g.size();
  table.spec = spec;
  for (auto s : spec.strategies) {
    for (auto k : spec.ks) {
      Cell c;
      c.strategy = s;
      c.k = k;
      c.runs.resize(spec.runs);
      table.cells.push_back(std::move(c));
    }
  }

  OracleBudget budget = spec.budget;
  budget.max_seconds = std::min(budget.max_seconds, spec.run_timeout_s);
  const std::size_t tasks = table.cells.size() * spec.runs;
  parallel_for(tasks, [&](std::size_t t) {
    Cell &cell = table.cells[t / spec.runs];
    RunRecord &rec = cell.runs[t % spec.runs];
    rec.run = t % spec.runs;
    rec.seed = run_seed(spec.base_seed, cell.k, rec.run);
    try {
      switch (cell.strategy) {
      case Strategy::basp:
        rec.report = basp(bw, points, cell.k, rec.seed, spec.repetitions);
        break;
      case Strategy::naive:
        rec.report = naive_kmeans_placement(bw, points, cell.k, rec.seed, spec.repetitions);
        break;
      case Strategy::random:
        rec.report = random_placement(bw, points, cell.k, rec.seed, spec.random_assignment);
        break;
      case Strategy::optimal:
        rec.report = brute_force_optimal(bw, cell.k, budget);
        break;
      }
      rec.ok = rec.report.runtime_s <= spec.run_timeout_s;
      if (!rec.ok)
        rec.error = "run exceeded timeout";
    } catch (const std::exception &e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });
  for (auto &c : table.cells)
    aggregate(c, table.n);
  return table;
}

/// Percentage gain of target over base in mean bandwidth to head, per k of
/// the table. Absent where either cell is absent or the base mean is 0.
inline std::vector<std::optional<double>> improvement(const ComparisonTable &table, Strategy base, Strategy target) {
  auto has = [&](Strategy s) {
    for (auto x : table.spec.strategies)
      if (x == s)
        return true;
    return false;
  };
  if (!has(base) || !has(target))
    throw std::invalid_argument("improvement: strategy missing from table");
  std::vector<std::optional<double>> out;
  for (auto k : table.spec.ks) {
    const Cell *b = table.find(base, k);
    const Cell *t = table.find(target, k);
    if (!b || !t || !b->present() || !t->present() || b->mean_bw.mean == 0.0)
      out.emplace_back();
    else
      out.emplace_back(100.0 * (t->mean_bw.mean - b->mean_bw.mean) / b->mean_bw.mean);
  }
  return out;
}

inline double percent_change(double base, double target) { return 100.0 * (target - base) / base; }

/// Percentile bootstrap confidence interval for the mean.
inline std::pair<double, double> bootstrap_mean_ci(const std::vector<double> &xs, std::size_t resamples, Seed seed,
                                                   double confidence = 0.95) {
  if (xs.empty())
    throw std::invalid_argument("bootstrap_mean_ci: empty sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> means(resamples);
  for (auto &m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      sum += xs[pick(rng)];
    m = sum / static_cast<double>(xs.size());
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - confidence) / 2.0;
  auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1) + 0.5));
    return means[std::min(idx, resamples - 1)];
  };
  return {at(tail), at(1.0 - tail)};
}

inline json summary_to_json(const Summary &s) { return {{"mean", s.mean}, {"std", s.stddev}, {"count", s.count}}; }

inline json table_to_json(const ComparisonTable &t, bool include_timing = false) {
  json strategies = json::array();
  for (auto s : t.spec.strategies)
    strategies.push_back(to_string(s));
  json cells = json::array();
  for (const auto &c : t.cells) {
    json runs = json::array();
    for (const auto &r : c.runs) {
      json jr = {{"run", r.run}, {"seed", r.seed}, {"ok", r.ok}};
      if (r.ok)
        jr["report"] = report_to_json(r.report, include_timing);
      else
        jr["error"] = r.error;
      runs.push_back(std::move(jr));
    }
    json jc = {{"strategy", to_string(c.strategy)},
               {"k", c.k},
               {"present", c.present()},
               {"successful_runs", c.successful},
               {"failed_runs", c.failed},
               {"objective_mbps", summary_to_json(c.objective)},
               {"mean_bw_to_head_mbps", summary_to_json(c.mean_bw)},
               {"repetition_mean_bw_to_head_mbps", summary_to_json(c.repetition_mean_bw)},
               {"runs", std::move(runs)}};
    if (include_timing)
      jc["mean_runtime_s"] = c.mean_runtime_s;
    cells.push_back(std::move(jc));
  }
  return {{"n", t.n},
          {"k", t.spec.ks},
          {"strategies", std::move(strategies)},
          {"runs", t.spec.runs},
          {"repetitions", t.spec.repetitions},
          {"base_seed", t.spec.base_seed},
          {"cells", std::move(cells)}};
}

/// Aligned plain-text table, one row per cell.
inline std::string table_to_text(const ComparisonTable &t, bool include_timing = false) {
  std::ostringstream out;
  out << std::left << std::setw(9) << "strategy" << std::right << std::setw(4) << "k" << std::setw(6) << "ok"
      << std::setw(6) << "fail" << std::setw(14) << "objective" << std::setw(10) << "+-" << std::setw(12)
      << "mean_bw" << std::setw(9) << "+-";
  if (include_timing)
    out << std::setw(11) << "runtime_s";
  out << '\n';
  out << std::fixed;
  for (const auto &c : t.cells) {
    out << std::left << std::setw(9) << to_string(c.strategy) << std::right << std::setw(4) << c.k << std::setw(6)
        << c.successful << std::setw(6) << c.failed;
    if (c.present())
      out << std::setprecision(2) << std::setw(14) << c.objective.mean << std::setw(10) << c.objective.stddev
          << std::setprecision(3) << std::setw(12) << c.mean_bw.mean << std::setw(9) << c.mean_bw.stddev;
    else
      out << std::setw(14) << "absent" << std::setw(10) << "-" << std::setw(12) << "-" << std::setw(9) << "-";
    if (include_timing)
      out << std::setprecision(4) << std::setw(11) << c.mean_runtime_s;
    out << '\n';
  }
  return out.str();
}

/// One row per k, one mean-bandwidth column per strategy (empty when absent).
inline std::string table_to_csv(const ComparisonTable &t) {
  std::ostringstream out;
  out.precision(17);
  out << "k";
  for (auto s : t.spec.strategies)
    out << ',' << to_string(s) << "_mean_bw_mbps," << to_string(s) << "_std_mbps";
  out << '\n';
  for (auto k : t.spec.ks) {
    out << k;
    for (auto s : t.spec.strategies) {
      const Cell *c = t.find(s, k);
      if (c && c->present())
        out << ',' << c->mean_bw.mean << ',' << c->mean_bw.stddev;
      else
        out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

} // namespace meshplace

#endif // MESHPLACE_HARNESS_HPP
