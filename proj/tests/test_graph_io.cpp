#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "meshplace/graph_io.hpp"
#include "meshplace/synthgen.hpp"

namespace mp = meshplace;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const auto dir = fs::temp_directory_path() / "meshplace_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path &p, const std::string &text) { std::ofstream(p) << text; }

} // namespace

TEST(GraphJson, RoundTrip) {
  mp::TopologyProfile prof;
  prof.n = 20;
  const auto g = mp::generate(prof).graph;
  const auto path = scratch("round.json");
  mp::save_graph_json(g, path, {{"note", "x"}});
  const auto h = mp::load_graph_json(path);
  EXPECT_EQ(mp::graph_to_json(g), mp::graph_to_json(h));
  EXPECT_EQ(mp::all_pairs_bandwidth(g), mp::all_pairs_bandwidth(h));
  EXPECT_FALSE(fs::exists(path.string() + ".tmp." + std::to_string(::getpid())));
}

TEST(GraphJson, NamesPreserved) {
  const mp::NetworkGraph g({{0, {41.4, 2.1}, "alpha"}, {1, {41.5, 2.2}, ""}}, {{0, 1, 2.5}});
  const auto doc = mp::graph_to_json(g);
  EXPECT_EQ(doc["nodes"][0]["name"], "alpha");
  EXPECT_FALSE(doc["nodes"][1].contains("name"));
  EXPECT_EQ(mp::graph_from_json(doc).node(0).name, "alpha");
}

TEST(GraphJson, MalformedDocuments) {
  EXPECT_THROW(mp::graph_from_json(mp::json::array()), mp::FormatError);
  EXPECT_THROW(mp::graph_from_json({{"version", 2}, {"nodes", mp::json::array()}, {"links", mp::json::array()}}),
               mp::FormatError);
  EXPECT_THROW(mp::graph_from_json({{"version", 1}, {"nodes", {{{"id", 0}}}}, {"links", mp::json::array()}}),
               mp::FormatError);
  const auto bad = scratch("bad.json");
  write(bad, "{ not json");
  EXPECT_THROW(mp::load_graph_json(bad), mp::FormatError);
  EXPECT_THROW(mp::load_graph_json(scratch("missing.json")), mp::FormatError);
}

TEST(GraphJson, StructuralProblemsSurfaceInValidate) {
  const auto g = mp::graph_from_json(
      {{"version", 1},
       {"nodes", {{{"id", 0}, {"lat", 41.4}, {"lon", 2.1}}, {{"id", 1}, {"lat", 41.4}, {"lon", 2.2}}}},
       {"links", {{{"src", 0}, {"dst", 9}, {"bw_mbps", 3.0}}}}});
  const auto v = mp::validate(g);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0].rule, "link-endpoint");
}

TEST(GraphCsv, ImportsWithStringIdsAndHeaders) {
  const auto nodes = scratch("nodes.csv");
  const auto edges = scratch("edges.csv");
  write(nodes, "id,lat,lon,name\nrouterA,41.40,2.10,\nrouterB,41.41,2.11,roof\nrouterC,41.42,2.12,\n");
  write(edges, "src,dst,bw_mbps\nrouterA,routerB,10\nrouterB,routerC,4.5\nrouterC,routerA,2\n");
  const auto g = mp::load_graph_csv(edges, nodes);
  ASSERT_EQ(g.size(), 3U);
  EXPECT_EQ(g.node(0).name, "routerA");
  EXPECT_EQ(g.node(1).name, "roof");
  EXPECT_TRUE(mp::validate(g).empty());
  EXPECT_EQ(mp::path_bandwidth(g, 0, 2), 4.5);
}

TEST(GraphCsv, HeaderlessNumericIds) {
  const auto nodes = scratch("nodes2.csv");
  const auto edges = scratch("edges2.csv");
  write(nodes, "7,41.40,2.10\n3,41.41,2.11\n");
  write(edges, "7,3,8\n");
  const auto g = mp::load_graph_csv(edges, nodes);
  EXPECT_EQ(g.size(), 2U);
  EXPECT_EQ(g.node(0).name, "7");
  EXPECT_EQ(mp::path_bandwidth(g, 0, 1), 8.0);
}

TEST(GraphCsv, Errors) {
  const auto nodes = scratch("nodes3.csv");
  const auto edges = scratch("edges3.csv");
  write(nodes, "a,41.40,2.10\nb,41.41,2.11\n");
  write(edges, "a,z,8\n");
  EXPECT_THROW(mp::load_graph_csv(edges, nodes), mp::FormatError);
  write(edges, "a,b,3\na,b,fast\n");
  EXPECT_THROW(mp::load_graph_csv(edges, nodes), mp::FormatError);
  write(edges, "a,b\n");
  EXPECT_THROW(mp::load_graph_csv(edges, nodes), mp::FormatError);
  write(nodes, "a,41.40,2.10\na,41.41,2.11\n");
  write(edges, "a,a,1\n");
  EXPECT_THROW(mp::load_graph_csv(edges, nodes), mp::FormatError);
}

TEST(AtomicWrite, ReplacesExisting) {
  const auto p = scratch("atomic.txt");
  mp::write_file_atomic(p, "first");
  mp::write_file_atomic(p, "second");
  EXPECT_EQ(mp::read_file(p), "second");
  EXPECT_THROW(mp::write_file_atomic(scratch("no_such_dir") / "x.txt", "y"), std::runtime_error);
}
