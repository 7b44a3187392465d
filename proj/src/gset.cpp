#include "bcdc/io/gset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <utility>

namespace bcdc {

GsetGraph parse_gset(std::istream& in) {
  std::string line;
  long line_no = 0;
  long n_vertices = -1, n_edges = -1;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream header(line);
    if (!(header >> n_vertices >> n_edges) || n_vertices < 1 || n_edges < 0)
      throw ParseError(line_no, "expected header 'num_vertices num_edges'");
    break;
  }
  if (n_vertices < 0) throw ParseError(line_no, "missing header line");

  GsetGraph graph;
  std::map<std::pair<long, long>, double> entries;
  long read_edges = 0;
  bool duplicates = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long u = 0, v = 0;
    double w = 0.0;
    if (!(fields >> u >> v >> w)) throw ParseError(line_no, "expected 'u v w' edge triple");
    std::string rest;
    if (fields >> rest) throw ParseError(line_no, "trailing token '" + rest + "'");
    if (u < 1 || u > n_vertices || v < 1 || v > n_vertices)
      throw ParseError(line_no, "vertex index out of range");
    ++read_edges;
    const long lo = std::min(u, v) - 1;
    const long hi = std::max(u, v) - 1;
    auto [it, inserted] = entries.emplace(std::make_pair(lo, hi), w);
    if (!inserted) {
      it->second += w;
      duplicates = true;
    }
  }

  if (duplicates) graph.warnings.push_back("duplicate edges summed");
  if (read_edges != n_edges)
    graph.warnings.push_back("edge count mismatch: header says " + std::to_string(n_edges) +
                             ", file has " + std::to_string(read_edges));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size() * 2);
  for (const auto& [key, w] : entries) {
    triplets.emplace_back(key.first, key.second, w);
    if (key.first != key.second) triplets.emplace_back(key.second, key.first, w);
  }
  graph.adjacency.resize(n_vertices, n_vertices);
  graph.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  graph.adjacency.makeCompressed();
  return graph;
}

GsetGraph load_gset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  return parse_gset(in);
}

}  // namespace bcdc
