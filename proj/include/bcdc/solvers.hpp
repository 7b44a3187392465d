#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcdc/gap.hpp"
#include "bcdc/rng.hpp"

namespace bcdc {

struct SolverConfig {
  Index max_iterations = 1000;
  double gap_tolerance = 1e-6;  // stopping rule used by the QP experiments
  // Full gap evaluated every `gap_check_period` iterations; empty = once per
  // epoch (every n iterations; every iteration for full DCA).
  std::optional<Index> gap_check_period;
  std::uint64_t rng_seed = 0;
  // Used by problem builders that auto-partition contiguously.
  Index block_size = 1;
  // Keep every iterate in the record (equivalence tests; memory-heavy).
  bool record_iterates = false;

  enum class Init { ZeroProjected, Gaussian, Given };
  Init init = Init::ZeroProjected;
  Vector start;  // when init == Given

  void validate() const;
};

struct IterationEntry {
  double objective;      // phi(x^{k+1})
  Index selected_block;  // -1 for full (DCA) iterations
  double block_gap;      // block maximand max at (x^k, i_k); full gap for DCA, NaN if unevaluated
  double phi_decrease;   // phi(x^k) - phi(x^{k+1})
  double epoch;          // cumulative updated coordinates / m
};

struct GapEntry {
  Index iteration;  // 1-based iteration whose pre-update point was measured
  double gap_value;
};

// Per-iteration descent ledger of one solver run.
struct RunRecord {
  std::string solver;
  std::uint64_t seed = 0;
  double initial_objective = 0.0;
  std::vector<IterationEntry> iterations;
  std::vector<GapEntry> gap_trace;
  Vector final_point;
  double epochs = 0.0;  // final cumulative epoch count
  double wall_time_seconds = 0.0;
  bool terminated_by_gap = false;
  std::vector<Vector> iterate_trace;  // filled only when record_iterates
  std::vector<std::string> flags;

  Index iterations_run() const { return static_cast<Index>(iterations.size()); }
  double best_objective() const;
  double final_objective() const;
  double min_recorded_gap() const;
};

// BDCA: per iteration draw a subgradient v^k of h at x^k, pick a block
// uniformly, solve the block subproblem globally, update only that block.
// Deterministic given the seed. Throws SolverFault when the stepper returns
// an infeasible point or breaks descent beyond slack.
RunRecord solve_bdca(const DcProblem& problem, const SolverConfig& config);

// RCSD: the block prox-gradient update
//   x_i <- prox_{(1/L) g_i + I_{M_i}}( x_i - (grad_i f(x) - v_i)/L )
// with the same uniform block sampling contract as solve_bdca.
RunRecord solve_rcsd(const DcProblem& problem, const SolverConfig& config);

// Full-dimensional surrogate minimizer: out = argmin_{x in M} f(x) + g(x) - <v, x>.
using FullSurrogateSolver =
    std::function<void(const DcProblem&, const Vector& x, const Vector& v, Vector& out)>;

// Exact when f is the L-quadratic envelope: the surrogate argmin separates
// and equals one prox-gradient step applied to every block simultaneously.
FullSurrogateSolver prox_full_surrogate();

// Block-coordinate minimization of the surrogate by repeated sweeps; a
// comparator for problems whose exact full subproblem is intractable. Each
// sweep is monotone in the surrogate, so DCA descent is preserved, but the
// sweep limit need not be the global surrogate minimizer.
FullSurrogateSolver coordinate_sweep_surrogate(Index max_sweeps = 100, double tol = 1e-12);

// Classic DCA: minimize the full surrogate each iteration. One iteration is
// one epoch. The full gap is evaluated every gap_check_period iterations
// (default: every iteration) and recorded as that iteration's block_gap.
RunRecord solve_dca(const DcProblem& problem, const SolverConfig& config,
                    const FullSurrogateSolver& full_solver);
// Uses prox_full_surrogate(); requires quadratic-envelope f.
RunRecord solve_dca(const DcProblem& problem, const SolverConfig& config);

// Post-hoc certificate over a finished run:
//  * bound     — (n/K)(phi(x^1) - phi_best), the sampling-rate bound that the
//                expected best recorded gap must satisfy,
//  * min_gap   — best recorded gap,
//  * violations — count of iterations whose recorded block maximand exceeded
//                the realized objective decrease beyond slack (a deterministic
//                inequality; any violation means a broken subproblem solver).
struct RateCertificate {
  double min_gap = 0.0;
  double bound = 0.0;
  Index violations = 0;
  bool ok() const { return violations == 0; }
};

RateCertificate rate_certificate(const RunRecord& record, Index n_blocks);

// Initial point for a run; consumes RNG draws only for Gaussian init.
Vector initial_point(const DcProblem& problem, const SolverConfig& config, SplitMix64& rng);

}  // namespace bcdc
