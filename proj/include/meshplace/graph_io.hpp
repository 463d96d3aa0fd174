#ifndef MESHPLACE_GRAPH_IO_HPP
#define MESHPLACE_GRAPH_IO_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "netgraph.hpp"

namespace meshplace {

/// Malformed input file.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr int graph_format_version = 1;

/// Canonical graph document:
/// {"version":1,"nodes":[{"id","name"?,"lat","lon"}],"links":[{"src","dst","bw_mbps"}]}
inline json graph_to_json(const NetworkGraph &g) {
  json nodes = json::array();
  for (const Node &nd : g.nodes()) {
    json j;
    j["id"] = nd.id;
    if (!nd.name.empty())
      j["name"] = nd.name;
    j["lat"] = nd.pos.lat;
    j["lon"] = nd.pos.lon;
    nodes.push_back(std::move(j));
  }
  json links = json::array();
  for (const Link &l : g.links())
    links.push_back({{"src", l.src}, {"dst", l.dst}, {"bw_mbps", l.bandwidth}});
  return {{"version", graph_format_version}, {"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

inline NetworkGraph graph_from_json(const json &doc) {
  try {
    if (!doc.is_object())
      throw FormatError("graph document must be a JSON object");
    if (!doc.contains("version") || doc.at("version").get<int>() != graph_format_version)
      throw FormatError("unsupported graph format version (expected 1)");
    std::vector<Node> nodes;
    for (const json &j : doc.at("nodes")) {
      Node nd;
      nd.id = j.at("id").get<NodeId>();
      nd.pos = {j.at("lat").get<double>(), j.at("lon").get<double>()};
      if (j.contains("name") && !j.at("name").is_null())
        nd.name = j.at("name").get<std::string>();
      nodes.push_back(std::move(nd));
    }
    std::vector<Link> links;
    for (const json &j : doc.at("links"))
      links.push_back({j.at("src").get<NodeId>(), j.at("dst").get<NodeId>(), j.at("bw_mbps").get<double>()});
    return NetworkGraph(std::move(nodes), std::move(links));
  } catch (const json::exception &e) {
    throw FormatError(std::string("malformed graph document: ") + e.what());
  }
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::filesystem::path &path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline NetworkGraph load_graph_json(const std::filesystem::path &path) {
  return graph_from_json(read_json_file(path));
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a truncated file.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline void save_graph_json(const NetworkGraph &g, const std::filesystem::path &path, const json &meta = {}) {
  json doc = graph_to_json(g);
  if (!meta.is_null())
    doc["meta"] = meta;
  write_file_atomic(path, doc.dump(2) + "\n");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  for (auto &c : cells) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

inline bool parse_double(const std::string &s, double &out) {
  if (s.empty())
    return false;
  char *end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

/// Reads data rows; a first row whose last required cell is not numeric is a header.
inline std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path &path, std::size_t min_cols) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    auto cells = split_csv_line(line);
    double probe = 0;
    if (rows.empty() && lineno == 1 && cells.size() >= min_cols && !parse_double(cells[min_cols - 1], probe))
      continue;
    if (cells.size() < min_cols)
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected at least " +
                        std::to_string(min_cols) + " columns");
    rows.push_back(std::move(cells));
  }
  return rows;
}

} // namespace detail

/// Imports a measurement dump: node file `id,lat,lon[,name]` and edge list
/// `src,dst,bw_mbps`. Identifiers are remapped to dense ids in node-file
/// order; the original identifier becomes the node name when none is given.
inline NetworkGraph load_graph_csv(const std::filesystem::path &edges_path, const std::filesystem::path &nodes_path) {
  std::map<std::string, NodeId> index;
  std::vector<Node> nodes;
  for (const auto &row : detail::read_csv_rows(nodes_path, 3)) {
    Node nd;
    nd.id = static_cast<NodeId>(nodes.size());
    if (!detail::parse_double(row[1], nd.pos.lat) || !detail::parse_double(row[2], nd.pos.lon))
      throw FormatError(nodes_path.string() + ": bad coordinates for node " + row[0]);
    nd.name = row.size() > 3 && !row[3].empty() ? row[3] : row[0];
    if (!index.emplace(row[0], nd.id).second)
      throw FormatError(nodes_path.string() + ": duplicate node id " + row[0]);
    nodes.push_back(std::move(nd));
  }
  std::vector<Link> links;
  for (const auto &row : detail::read_csv_rows(edges_path, 3)) {
    const auto s = index.find(row[0]);
    const auto d = index.find(row[1]);
    if (s == index.end() || d == index.end())
      throw FormatError(edges_path.string() + ": link (" + row[0] + "," + row[1] + ") references absent node " +
                        (s == index.end() ? row[0] : row[1]));
    double bw = 0;
    if (!detail::parse_double(row[2], bw))
      throw FormatError(edges_path.string() + ": bad bandwidth '" + row[2] + "'");
    links.push_back({s->second, d->second, bw});
  }
  return NetworkGraph(std::move(nodes), std::move(links));
}

} // namespace meshplace

#endif // MESHPLACE_GRAPH_IO_HPP
