#pragma once

#include <iosfwd>
#include <optional>

#include "bcdc/types.hpp"

namespace bcdc {

struct LibsvmData {
  SparseMatrix features;
  Vector labels;  // mapped to {-1,+1}
};

// Parses `label idx:val idx:val ...` lines with 1-based ascending indices.
// Blank lines and `#` comments are skipped. Label sets {-1,+1}, {0,1} and
// {1,2} are accepted; {0,1} maps 0 -> -1, and {1,2} maps 2 -> -1. The matrix
// width is the largest index seen unless `dimension_override` widens it
// (needed when trailing features are absent from the file).
LibsvmData parse_libsvm(std::istream& in, std::optional<Index> dimension_override = std::nullopt);
LibsvmData load_libsvm(const std::string& path, std::optional<Index> dimension_override = std::nullopt);

void write_libsvm(std::ostream& out, const SparseMatrix& features, const Vector& labels);

}  // namespace bcdc
