// meshplace: command-line front end for the service placement library.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "meshplace/meshplace.hpp"

namespace mp = meshplace;
using mp::json;

namespace {

/// Bad flag values detected after parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string &text, const std::string &out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << text << std::flush;
  else
    mp::write_file_atomic(out_path, text);
}

struct GraphSource {
  std::string path;
  std::string nodes_csv;

  void add_to(CLI::App &cmd, bool required = true) {
    auto *opt = cmd.add_option("graph", path, "Graph file (canonical JSON, or CSV edge list with --nodes)");
    if (required)
      opt->required();
    cmd.add_option("--nodes", nodes_csv, "Node CSV (id,lat,lon[,name]); makes GRAPH a src,dst,bw_mbps edge list");
  }

  mp::NetworkGraph load() const {
    mp::NetworkGraph g = nodes_csv.empty() ? mp::load_graph_json(path) : mp::load_graph_csv(path, nodes_csv);
    const auto violations = mp::validate(g);
    if (!violations.empty()) {
      std::string msg = path + ": graph has " + std::to_string(violations.size()) + " violation(s)";
      for (const auto &v : violations)
        msg += "\n  [" + v.rule + "] " + v.message;
      throw mp::FormatError(msg);
    }
    return g;
  }
};

mp::RandomAssignment parse_assignment(const std::string &s) {
  if (s == "bandwidth")
    return mp::RandomAssignment::bandwidth;
  if (s == "geo")
    return mp::RandomAssignment::nearest_geo;
  throw UsageError("--random-assignment must be bandwidth or geo");
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::string profile_path;
  std::optional<std::size_t> n;
  std::optional<double> area, bw_mean, uni_share, degree, lat, lon;
  std::optional<mp::Seed> seed;
  std::string out;
};

mp::TopologyProfile resolve_profile(const GenOptions &o) {
  mp::TopologyProfile p = o.profile_path.empty() ? mp::TopologyProfile{}
                                                 : mp::profile_from_json(mp::read_json_file(o.profile_path));
  if (o.n)
    p.n = *o.n;
  if (o.area)
    p.area_m = *o.area;
  if (o.bw_mean)
    p.bw_mean = *o.bw_mean;
  if (o.uni_share)
    p.unidirectional_share = *o.uni_share;
  if (o.degree)
    p.target_mean_degree = *o.degree;
  if (o.seed)
    p.seed = *o.seed;
  if (o.lat)
    p.origin.lat = *o.lat;
  if (o.lon)
    p.origin.lon = *o.lon;
  try {
    mp::check_profile(p);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  return p;
}

int run_gen(const GenOptions &o) {
  const auto profile = resolve_profile(o);
  const auto topo = mp::generate(profile);
  json doc = mp::graph_to_json(topo.graph);
  doc["meta"] = topo.metadata(profile);
  emit(doc.dump(2) + "\n", o.out);

  const auto bws = mp::link_bandwidths(topo.graph);
  const auto asym = mp::link_asymmetry(topo.graph, 0.3);
  auto &log = (o.out.empty() || o.out == "-") ? std::cerr : std::cout;
  log << "n=" << topo.graph.size() << " links=" << bws.size()
      << " unidirectional_share=" << asym.unidirectional_share
      << " mean_bw_mbps=" << mp::fit_exponential(bws) << " bridges=" << topo.bridges.size() << '\n';
  return 0;
}

// ---------------------------------------------------------------- validate

int run_validate(const GraphSource &src, const std::string &format) {
  const mp::NetworkGraph g = src.nodes_csv.empty() ? mp::load_graph_json(src.path)
                                                   : mp::load_graph_csv(src.path, src.nodes_csv);
  const auto violations = mp::validate(g);
  if (format == "json") {
    json arr = json::array();
    for (const auto &v : violations)
      arr.push_back({{"rule", v.rule}, {"message", v.message}});
    std::cout << json{{"nodes", g.size()}, {"links", g.links().size()}, {"violations", arr}}.dump(2) << '\n';
  } else {
    for (const auto &v : violations)
      std::cout << "[" << v.rule << "] " << v.message << '\n';
    if (violations.empty())
      std::cout << "ok: " << g.size() << " nodes, " << g.links().size() << " links\n";
  }
  return violations.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- place

struct PlaceOptions {
  GraphSource src;
  std::string algo = "basp";
  std::size_t k = 0;
  mp::Seed seed = 1;
  std::size_t reps = 15;
  std::size_t max_iter = mp::default_kmeans_max_iter;
  std::string random_assignment = "bandwidth";
  std::uint64_t max_combinations = mp::OracleBudget{}.max_combinations;
  double max_seconds = mp::OracleBudget{}.max_seconds;
  std::string dump_partition;
  std::string format = "json";
  bool timing = false;
  std::string out;
};

std::string report_table(const mp::PlacementReport &r, bool timing) {
  std::ostringstream s;
  s << "strategy " << r.strategy << "  k=" << r.placement.k() << "  seed=" << r.seed << '\n';
  s << "objective_mbps " << r.objective << "\nmean_bw_to_head_mbps " << r.mean_bw_to_head << '\n';
  if (timing)
    s << "runtime_s " << r.runtime_s << '\n';
  s << std::left << std::setw(8) << "cluster" << std::setw(8) << "head" << std::setw(8) << "size"
    << "mean_bw_mbps\n";
  const auto sizes = r.placement.cluster_sizes();
  for (std::size_t c = 0; c < r.placement.k(); ++c)
    s << std::setw(8) << c << std::setw(8) << r.placement.heads[c] << std::setw(8) << sizes[c]
      << r.per_cluster_mean[c] << '\n';
  return s.str();
}

int run_place(const PlaceOptions &o) {
  if (o.format != "json" && o.format != "table")
    throw UsageError("place --format must be json or table");
  const auto mode = parse_assignment(o.random_assignment);
  const auto g = o.src.load();
  if (o.k == 0 || o.k > g.size())
    throw UsageError("--k " + std::to_string(o.k) + " outside [1, " + std::to_string(g.size()) + "]");
  const auto start = std::chrono::steady_clock::now();
  const auto bw = mp::all_pairs_bandwidth(g);
  const auto points = mp::project(g);
  mp::PlacementReport r;
  if (o.algo == "basp")
    r = mp::basp(bw, points, o.k, o.seed, o.reps, o.max_iter);
  else if (o.algo == "naive")
    r = mp::naive_kmeans_placement(bw, points, o.k, o.seed, o.reps, o.max_iter);
  else if (o.algo == "random")
    r = mp::random_placement(bw, points, o.k, o.seed, mode);
  else if (o.algo == "optimal")
    r = mp::brute_force_optimal(bw, o.k, {o.max_combinations, o.max_seconds});
  else
    throw UsageError("unknown --algo '" + o.algo + "'");
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!o.dump_partition.empty()) {
    if (!r.partition)
      throw UsageError("--dump-partition needs a k-means based algorithm (basp or naive)");
    mp::write_file_atomic(o.dump_partition, mp::partition_to_json(*r.partition).dump(2) + "\n");
  }
  emit(o.format == "json" ? mp::report_to_json(r, o.timing).dump(2) + "\n" : report_table(r, o.timing), o.out);
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
  GraphSource src;
  std::string profile_path;
  std::vector<std::size_t> ks;
  std::vector<std::string> strategies{"basp", "naive", "random"};
  std::size_t runs = 5;
  std::size_t reps = 15;
  mp::Seed seed = 42;
  double timeout = 300.0;
  std::uint64_t max_combinations = mp::OracleBudget{}.max_combinations;
  std::string random_assignment = "bandwidth";
  std::string format = "table";
  bool timing = false;
  std::string out;
};

int run_compare(const CompareOptions &o) {
  if (o.src.path.empty() == o.profile_path.empty())
    throw UsageError("compare needs exactly one graph source: GRAPH or --profile");
  if (o.format != "json" && o.format != "csv" && o.format != "table")
    throw UsageError("compare --format must be json, csv or table");
  mp::ExperimentSpec spec;
  spec.ks = o.ks;
  for (const auto &s : o.strategies) {
    try {
      spec.strategies.push_back(mp::parse_strategy(s));
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
  }
  spec.runs = o.runs;
  spec.repetitions = o.reps;
  spec.base_seed = o.seed;
  spec.run_timeout_s = o.timeout;
  spec.budget.max_combinations = o.max_combinations;
  spec.random_assignment = parse_assignment(o.random_assignment);

  mp::NetworkGraph g;
  if (!o.profile_path.empty()) {
    const auto profile = mp::profile_from_json(mp::read_json_file(o.profile_path));
    mp::check_profile(profile);
    g = mp::generate(profile).graph;
  } else {
    g = o.src.load();
  }
  try {
    mp::check_spec(spec, g.size());
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }

  const auto table = mp::run_experiment(g, spec);
  std::size_t present = 0;
  for (const auto &c : table.cells) {
    if (c.present()) {
      ++present;
    } else {
      std::string why = c.runs.empty() ? "" : c.runs.front().error;
      std::cerr << "warning: cell " << mp::to_string(c.strategy) << " k=" << c.k << " absent: " << why << '\n';
    }
  }
  if (present == 0)
    throw mp::RuntimeFailure("no strategy produced a successful run");

  std::string text;
  if (o.format == "json")
    text = mp::table_to_json(table, o.timing).dump(2) + "\n";
  else if (o.format == "csv")
    text = mp::table_to_csv(table);
  else
    text = mp::table_to_text(table, o.timing);
  emit(text, o.out);
  return 0;
}

// ---------------------------------------------------------------- stats

struct StatsOptions {
  GraphSource src;
  std::string metric;
  double threshold = 0.3;
  std::string field = "bw";
  std::string samples_csv;
  std::string column;
  std::string placement;
  std::string format = "auto";
  std::string out;
};

std::vector<double> stats_samples(const StatsOptions &o, const mp::NetworkGraph *g) {
  if (!o.samples_csv.empty()) {
    if (o.column.empty())
      throw UsageError("--samples needs --column");
    std::istringstream in(mp::read_file(o.samples_csv));
    std::string line;
    if (!std::getline(in, line))
      throw mp::FormatError(o.samples_csv + ": empty file");
    const auto header = mp::detail::split_csv_line(line);
    const auto it = std::find(header.begin(), header.end(), o.column);
    if (it == header.end())
      throw UsageError("column '" + o.column + "' not found in " + o.samples_csv);
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::vector<double> xs;
    while (std::getline(in, line)) {
      const auto cells = mp::detail::split_csv_line(line);
      double v = 0;
      if (col < cells.size() && mp::detail::parse_double(cells[col], v))
        xs.push_back(v);
    }
    return xs;
  }
  if (o.field == "bw")
    return mp::link_bandwidths(*g);
  if (o.field == "degree") {
    std::vector<double> xs;
    for (const auto &nb : g->undirected_adjacency())
      xs.push_back(static_cast<double>(nb.size()));
    return xs;
  }
  if (o.field == "path_bw") {
    const auto m = mp::all_pairs_bandwidth(*g);
    std::vector<double> xs;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (i != j)
          xs.push_back(m(i, j));
    return xs;
  }
  throw UsageError("unknown --field '" + o.field + "' (expected bw, degree or path_bw)");
}

int run_stats(const StatsOptions &o) {
  static const std::vector<std::string> metrics{"asymmetry", "ecdf", "fit", "centrality"};
  if (std::find(metrics.begin(), metrics.end(), o.metric) == metrics.end())
    throw UsageError("unknown --metric '" + o.metric + "' (expected asymmetry, ecdf, fit or centrality)");
  const bool needs_graph = o.samples_csv.empty() || o.metric == "asymmetry" || o.metric == "centrality";
  std::optional<mp::NetworkGraph> g;
  if (needs_graph) {
    if (o.src.path.empty())
      throw UsageError("stats --metric " + o.metric + " needs a GRAPH");
    g = o.src.load();
  }
  std::string format = o.format;
  if (format == "auto")
    format = (o.metric == "ecdf" || o.metric == "centrality") ? "csv" : "json";
  if (format != "json" && format != "csv")
    throw UsageError("stats --format must be json or csv");

  std::string text;
  if (o.metric == "asymmetry") {
    if (!(o.threshold > 0.0 && o.threshold < 1.0))
      throw UsageError("--threshold must lie in (0, 1)");
    const auto a = mp::link_asymmetry(*g, o.threshold);
    if (format == "json") {
      text = json{{"threshold", o.threshold},
                  {"fraction_exceeding", a.fraction_exceeding},
                  {"bidirectional_pairs", a.bidirectional_pairs},
                  {"exceeding_pairs", a.exceeding_pairs},
                  {"unidirectional_pairs", a.unidirectional_pairs},
                  {"unidirectional_share", a.unidirectional_share}}
                 .dump(2) +
             "\n";
    } else {
      std::ostringstream s;
      s.precision(17);
      s << "threshold,fraction_exceeding,bidirectional_pairs,exceeding_pairs,unidirectional_pairs,"
           "unidirectional_share\n"
        << o.threshold << ',' << a.fraction_exceeding << ',' << a.bidirectional_pairs << ',' << a.exceeding_pairs
        << ',' << a.unidirectional_pairs << ',' << a.unidirectional_share << '\n';
      text = s.str();
    }
  } else if (o.metric == "ecdf") {
    const auto t = mp::ecdf(stats_samples(o, g ? &*g : nullptr));
    text = format == "csv" ? mp::ecdf_to_csv(t) : json{{"values", t.values}, {"fractions", t.fractions}}.dump(2) + "\n";
  } else if (o.metric == "fit") {
    auto xs = stats_samples(o, g ? &*g : nullptr);
    std::erase_if(xs, [](double x) { return !(x > 0.0); });
    if (xs.empty())
      throw mp::RuntimeFailure("no positive samples to fit");
    const double mean = mp::fit_exponential(xs);
    const auto ks = mp::ks_test_exponential(xs, mean);
    if (format == "json") {
      text = json{{"samples", xs.size()}, {"exponential_mean", mean}, {"ks_statistic", ks.statistic},
                  {"ks_p_value", ks.p_value}}
                 .dump(2) +
             "\n";
    } else {
      std::ostringstream s;
      s.precision(17);
      s << "samples,exponential_mean,ks_statistic,ks_p_value\n"
        << xs.size() << ',' << mean << ',' << ks.statistic << ',' << ks.p_value << '\n';
      text = s.str();
    }
  } else {
    if (o.placement.empty())
      throw UsageError("--metric centrality needs --placement");
    const auto p = mp::placement_from_json(mp::read_json_file(o.placement));
    const auto r = mp::centrality(*g, p);
    text = format == "csv" ? mp::centrality_to_csv(r) : mp::centrality_to_json(r).dump(2) + "\n";
  }
  emit(text, o.out);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bandwidth-aware service placement for wireless community mesh networks.\n"
               "Environment: MESHPLACE_THREADS caps the worker count (0 or unset = all cores)."};
  app.require_subcommand(1);

  GenOptions gen;
  auto *gen_cmd = app.add_subcommand("gen", "Generate a synthetic mesh topology (canonical graph JSON)");
  gen_cmd->add_option("--profile", gen.profile_path, "JSON profile file; flags override its fields");
  gen_cmd->add_option("--n", gen.n, "Node count (default 54, at least 2)");
  gen_cmd->add_option("--area", gen.area, "Square side in meters (default 2000)");
  gen_cmd->add_option("--bw-mean", gen.bw_mean, "Mean link bandwidth in Mbps (default 21.8)");
  gen_cmd->add_option("--uni-share", gen.uni_share, "Share of one-way node pairs (default 0.56)");
  gen_cmd->add_option("--degree", gen.degree, "Target mean degree (default 5)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed (default 1)");
  gen_cmd->add_option("--lat", gen.lat, "Latitude of the area center");
  gen_cmd->add_option("--lon", gen.lon, "Longitude of the area center");
  gen_cmd->add_option("-o,--output", gen.out, "Output file (default stdout)");

  GraphSource validate_src;
  std::string validate_format = "table";
  auto *validate_cmd = app.add_subcommand("validate", "Check graph invariants; exit 1 when violated");
  validate_src.add_to(*validate_cmd);
  validate_cmd->add_option("--format", validate_format, "table or json");

  PlaceOptions place;
  auto *place_cmd = app.add_subcommand("place", "Run one placement strategy and print its report");
  place.src.add_to(*place_cmd);
  place_cmd->add_option("--algo", place.algo, "basp, naive, random or optimal")
      ->check(CLI::IsMember({"basp", "naive", "random", "optimal"}));
  place_cmd->add_option("--k", place.k, "Number of services (clusters)")->required();
  place_cmd->add_option("--seed", place.seed, "Random seed (default 1)");
  place_cmd->add_option("--reps", place.reps, "Repetitions kept best-of (basp, naive; default 15)")
      ->check(CLI::PositiveNumber);
  place_cmd->add_option("--max-iter", place.max_iter, "k-means iteration cap (default 100)")
      ->check(CLI::PositiveNumber);
  place_cmd->add_option("--random-assignment", place.random_assignment, "random baseline: bandwidth or geo");
  place_cmd->add_option("--max-combinations", place.max_combinations, "Oracle head-set budget (default 1e7)");
  place_cmd->add_option("--max-seconds", place.max_seconds, "Oracle time budget (default 600)");
  place_cmd->add_option("--dump-partition", place.dump_partition, "Write the k-means partition as JSON");
  place_cmd->add_option("--format", place.format, "json or table");
  place_cmd->add_flag("--timing", place.timing, "Include wall-clock runtime in the output");
  place_cmd->add_option("-o,--output", place.out, "Output file (default stdout)");

  CompareOptions cmp;
  auto *cmp_cmd = app.add_subcommand("compare", "Compare strategies over several runs and k values");
  cmp.src.add_to(*cmp_cmd, false);
  cmp_cmd->add_option("--profile", cmp.profile_path, "Generate the graph from a JSON profile instead");
  cmp_cmd->add_option("--k", cmp.ks, "Comma-separated k values")->required()->delimiter(',');
  cmp_cmd->add_option("--strategies", cmp.strategies, "Comma-separated subset of basp,naive,random,optimal")
      ->delimiter(',');
  cmp_cmd->add_option("--runs", cmp.runs, "Independent runs per cell (default 5)")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--reps", cmp.reps, "Repetitions per run (default 15)")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--seed", cmp.seed, "Base seed (default 42)");
  cmp_cmd->add_option("--timeout", cmp.timeout, "Per-run timeout in seconds (default 300)");
  cmp_cmd->add_option("--max-combinations", cmp.max_combinations, "Oracle head-set budget (default 1e7)");
  cmp_cmd->add_option("--random-assignment", cmp.random_assignment, "random baseline: bandwidth or geo");
  cmp_cmd->add_option("--format", cmp.format, "table, json or csv (csv: k rows, mean bandwidth per strategy)");
  cmp_cmd->add_flag("--timing", cmp.timing, "Include runtimes in the output");
  cmp_cmd->add_option("-o,--output", cmp.out, "Output file (default stdout)");

  StatsOptions st;
  auto *stats_cmd = app.add_subcommand(
      "stats", "Graph statistics.\n"
               "  asymmetry  json/csv: threshold, fraction_exceeding, bidirectional_pairs, exceeding_pairs,\n"
               "             unidirectional_pairs, unidirectional_share\n"
               "  ecdf       csv: value,fraction (right-continuous, last fraction is 1)\n"
               "  fit        json/csv: samples, exponential_mean, ks_statistic, ks_p_value\n"
               "  centrality csv: cluster,head,size,head_degree,head_neighborhood_connectivity,diameter,connected");
  st.src.add_to(*stats_cmd, false);
  stats_cmd->add_option("--metric", st.metric, "asymmetry, ecdf, fit or centrality")->required();
  stats_cmd->add_option("--threshold", st.threshold, "Asymmetry deviation threshold (default 0.3)");
  stats_cmd->add_option("--field", st.field, "Sample source for ecdf/fit: bw, degree or path_bw");
  stats_cmd->add_option("--samples", st.samples_csv, "CSV file with a header row as ecdf/fit sample source");
  stats_cmd->add_option("--column", st.column, "Column of --samples to use");
  stats_cmd->add_option("--placement", st.placement, "Placement report JSON (for centrality)");
  stats_cmd->add_option("--format", st.format, "json or csv (default depends on metric)");
  stats_cmd->add_option("-o,--output", st.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd)
      return run_gen(gen);
    if (*validate_cmd)
      return run_validate(validate_src, validate_format);
    if (*place_cmd)
      return run_place(place);
    if (*cmp_cmd)
      return run_compare(cmp);
    if (*stats_cmd)
      return run_stats(st);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
