#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace bcdc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

// Compressed row storage. In compressed mode Eigen exposes exactly the
// (row_offsets, column_indices, values) triplet via outerIndexPtr /
// innerIndexPtr / valuePtr, with column indices sorted within each row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// A point handed to an oracle or produced by a solver: all entries finite.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a subproblem solver breaks a descent guarantee or returns an
// infeasible point; carries the iteration at which the run failed.
struct SolverFault : std::runtime_error {
  SolverFault(Index iteration, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
        iteration(iteration) {}
  Index iteration;
};

struct ParseError : std::runtime_error {
  ParseError(long line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  long line;
};

inline bool all_finite(const Vector& x) { return x.allFinite(); }

// Relative slack used by every descent / gap-sign assertion:
// double-precision accumulation across O(m) sums.
inline double descent_slack(double objective_value) {
  return 1e-10 * (1.0 + std::abs(objective_value));
}

}  // namespace bcdc
