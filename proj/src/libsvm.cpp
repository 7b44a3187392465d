#include "bcdc/io/libsvm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace bcdc {

namespace {

double parse_double(const std::string& token, long line) {
  try {
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw ParseError(line, "non-numeric token '" + token + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError(line, "non-numeric token '" + token + "'");
  }
}

long parse_index(const std::string& token, long line) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "non-numeric index '" + token + "'");
  return value;
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in, std::optional<Index> dimension_override) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> raw_labels;
  Index max_index = 0;
  long line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream tokens(line);
    std::string token;
    tokens >> token;
    const double label = parse_double(token, line_no);

    Index previous = 0;
    const Index row = static_cast<Index>(raw_labels.size());
    while (tokens >> token) {
      if (!token.empty() && token[0] == '#') break;
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected idx:val, got '" + token + "'");
      const long idx = parse_index(token.substr(0, colon), line_no);
      const double value = parse_double(token.substr(colon + 1), line_no);
      if (idx < 1) throw ParseError(line_no, "feature index must be >= 1");
      if (idx <= previous) throw ParseError(line_no, "feature indices must be strictly ascending");
      previous = idx;
      triplets.emplace_back(row, static_cast<Index>(idx - 1), value);  // 1-based -> 0-based here only
      max_index = std::max<Index>(max_index, static_cast<Index>(idx));
    }
    raw_labels.push_back(label);
  }

  Index cols = dimension_override.value_or(max_index);
  if (cols < max_index) throw ParseError(0, "dimension override below the largest feature index");

  LibsvmData data;
  data.features.resize(static_cast<Index>(raw_labels.size()), cols);
  data.features.setFromTriplets(triplets.begin(), triplets.end());
  data.features.makeCompressed();

  std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  data.labels.resize(static_cast<Index>(raw_labels.size()));
  const bool zero_one = distinct == std::set<double>{0.0, 1.0} || distinct == std::set<double>{0.0} ||
                        distinct == std::set<double>{1.0};
  const bool one_two = distinct == std::set<double>{1.0, 2.0} || distinct == std::set<double>{2.0};
  for (size_t i = 0; i < raw_labels.size(); ++i) {
    const double raw = raw_labels[i];
    double mapped;
    if (raw == 1.0 || raw == -1.0) {
      mapped = zero_one ? 1.0 : (raw == 1.0 ? 1.0 : -1.0);
    } else if (raw == 0.0 && zero_one) {
      mapped = -1.0;
    } else if (raw == 2.0 && one_two) {
      mapped = -1.0;
    } else {
      throw ParseError(0, "unsupported label value " + std::to_string(raw));
    }
    data.labels[static_cast<Index>(i)] = mapped;
  }
  return data;
}

LibsvmData load_libsvm(const std::string& path, std::optional<Index> dimension_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  return parse_libsvm(in, dimension_override);
}

void write_libsvm(std::ostream& out, const SparseMatrix& features, const Vector& labels) {
  char buffer[64];
  for (Index i = 0; i < features.rows(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", labels[i]);
    out << buffer;
    for (SparseMatrix::InnerIterator it(features, i); it; ++it) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", it.value());
      out << ' ' << (it.col() + 1) << ':' << buffer;
    }
    out << '\n';
  }
}

}  // namespace bcdc
