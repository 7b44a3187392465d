#include "bcdc/io/run_record_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace bcdc {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string point_digest(const Vector& x) {
  // FNV-1a over the little-endian bytes of the doubles.
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(double));
    std::memcpy(&bits, &x[i], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffu;
      hash *= 0x100000001b3ull;
    }
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, hash);
  return buffer;
}

void write_run_record_csv(std::ostream& out, const RunRecord& record) {
  out << "iteration,epoch,objective,block,block_gap,gap\n";

  size_t gap_pos = 0;
  auto gap_cell = [&](Index iteration) -> std::string {
    if (gap_pos < record.gap_trace.size() && record.gap_trace[gap_pos].iteration == iteration) {
      return format_double(record.gap_trace[gap_pos++].gap_value);
    }
    return "";
  };

  out << "0,0," << format_double(record.initial_objective) << ",-1,," << gap_cell(1) << "\n";
  for (size_t k = 0; k < record.iterations.size(); ++k) {
    const auto& it = record.iterations[k];
    const Index iteration = static_cast<Index>(k) + 1;
    out << iteration << ',' << format_double(it.epoch) << ',' << format_double(it.objective) << ','
        << it.selected_block << ',' << (std::isnan(it.block_gap) ? "" : format_double(it.block_gap))
        << ',' << gap_cell(iteration + 1) << "\n";
  }
}

void write_run_record_json(std::ostream& out, const RunRecord& record, const SolverConfig& config) {
  nlohmann::ordered_json j;
  j["solver"] = record.solver;
  j["seed"] = record.seed;
  j["config"]["max_iterations"] = config.max_iterations;
  j["config"]["gap_tolerance"] = config.gap_tolerance;
  j["config"]["gap_check_period"] = config.gap_check_period ? nlohmann::ordered_json(*config.gap_check_period)
                                                            : nlohmann::ordered_json(nullptr);
  j["config"]["block_size"] = config.block_size;
  j["config"]["init"] = config.init == SolverConfig::Init::ZeroProjected ? "zero"
                        : config.init == SolverConfig::Init::Gaussian    ? "gaussian"
                                                                         : "given";
  j["initial_objective"] = format_double(record.initial_objective);
  j["final_objective"] = format_double(record.final_objective());
  j["iterations"] = record.iterations_run();
  j["epochs"] = format_double(record.epochs);
  j["terminated_by_gap"] = record.terminated_by_gap;
  j["min_recorded_gap"] = format_double(record.min_recorded_gap());
  j["final_point_digest"] = point_digest(record.final_point);
  j["flags"] = record.flags;
  out << j.dump(2) << '\n';
}

void write_run_record(const RunRecord& record, const SolverConfig& config, const std::string& path) {
  {
    std::ofstream csv(path + ".csv", std::ios::binary);
    if (!csv) throw ConfigError("cannot write " + path + ".csv");
    write_run_record_csv(csv, record);
  }
  {
    std::ofstream json(path + ".json", std::ios::binary);
    if (!json) throw ConfigError("cannot write " + path + ".json");
    write_run_record_json(json, record, config);
  }
}

RunRecord parse_run_record_csv(std::istream& in) {
  RunRecord record;
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0)
    throw ParseError(1, "missing run record header");

  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    cells.resize(6);
    const long iteration = std::stol(cells[0]);
    if (iteration == 0) {
      record.initial_objective = std::stod(cells[2]);
    } else {
      IterationEntry entry{};
      entry.epoch = std::stod(cells[1]);
      entry.objective = std::stod(cells[2]);
      entry.selected_block = std::stol(cells[3]);
      entry.block_gap =
          cells[4].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cells[4]);
      entry.phi_decrease = 0.0;
      record.iterations.push_back(entry);
    }
    if (!cells[5].empty())
      record.gap_trace.push_back({static_cast<Index>(iteration) + 1, std::stod(cells[5])});
    (void)line_no;
  }

  // Reconstruct the decreases from consecutive objectives.
  double prev = record.initial_objective;
  for (auto& it : record.iterations) {
    it.phi_decrease = prev - it.objective;
    prev = it.objective;
  }
  record.epochs = record.iterations.empty() ? 0.0 : record.iterations.back().epoch;
  return record;
}

}  // namespace bcdc
