#pragma once

#include <iosfwd>
#include <string>

#include "bcdc/solvers.hpp"

namespace bcdc {

// CSV columns: iteration, epoch, objective, block, block_gap, gap. Row 0
// carries the initial objective. Doubles use 17 significant digits so the
// file round-trips bit for bit; unevaluated gap cells are empty. Output is
// byte-stable for identical records.
void write_run_record_csv(std::ostream& out, const RunRecord& record);

// JSON sidecar: solver, seed, config echo, objectives, epoch count, and an
// FNV-1a digest of the final point's raw bytes. Deliberately excludes wall
// time so reruns are byte-identical.
void write_run_record_json(std::ostream& out, const RunRecord& record, const SolverConfig& config);

// Writes `<path>.csv` and `<path>.json`.
void write_run_record(const RunRecord& record, const SolverConfig& config, const std::string& path);

// Reads a CSV produced by write_run_record_csv back into a record (solver
// name, final point and wall time are not stored in the CSV and stay empty).
RunRecord parse_run_record_csv(std::istream& in);

std::string point_digest(const Vector& x);

std::string format_double(double value);  // %.17g

}  // namespace bcdc
