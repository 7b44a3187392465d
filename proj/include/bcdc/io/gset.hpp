#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bcdc/types.hpp"

namespace bcdc {

struct GsetGraph {
  SparseMatrix adjacency;  // symmetric; duplicates summed
  std::vector<std::string> warnings;
};

// `num_vertices num_edges` header, then one `u v w` triple per line with
// 1-based vertices and any run of spaces/tabs between fields. Self-loops
// land on the diagonal. Duplicate edges are summed and an edge-count
// mismatch is reported, both as warnings rather than errors.
GsetGraph parse_gset(std::istream& in);
GsetGraph load_gset(const std::string& path);

}  // namespace bcdc
