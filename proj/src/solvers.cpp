#include "bcdc/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace bcdc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (gap_check_period && *gap_check_period < 1) throw ConfigError("gap_check_period must be >= 1");
  if (block_size < 1) throw ConfigError("block_size must be >= 1");
  if (gap_tolerance < 0.0) throw ConfigError("gap_tolerance must be nonnegative");
  if (init == Init::Given && start.size() == 0) throw ConfigError("init == Given requires a start point");
}

double RunRecord::best_objective() const {
  double best = initial_objective;
  for (const auto& it : iterations) best = std::min(best, it.objective);
  return best;
}

double RunRecord::final_objective() const {
  return iterations.empty() ? initial_objective : iterations.back().objective;
}

double RunRecord::min_recorded_gap() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : gap_trace) best = std::min(best, g.gap_value);
  return best;
}

Vector initial_point(const DcProblem& problem, const SolverConfig& config, SplitMix64& rng) {
  Vector x;
  switch (config.init) {
    case SolverConfig::Init::ZeroProjected:
      x = Vector::Zero(problem.dimension());
      break;
    case SolverConfig::Init::Gaussian:
      x.resize(problem.dimension());
      for (Index j = 0; j < x.size(); ++j) x[j] = rng.gaussian();
      break;
    case SolverConfig::Init::Given:
      if (config.start.size() != problem.dimension())
        throw ConfigError("start point has wrong dimension");
      x = config.start;
      break;
  }
  problem.project(x);
  if (!all_finite(x)) throw DomainError("initial point is not finite");
  return x;
}

namespace {

enum class StepKind { BlockSurrogate, ProxGradient };

// Shared BDCA / RCSD engine. The two methods differ only in how the selected
// block is updated; everything else (PRNG consumption, gap schedule, descent
// ledger) is identical, which is what makes the envelope-vs-RCSD equivalence
// reproducible bit for bit.
RunRecord run_block_solver(const DcProblem& problem, const SolverConfig& config, StepKind kind,
                           const char* name) {
  config.validate();
  const auto t0 = Clock::now();
  const auto& part = problem.partition();
  const Index n = part.count();
  const Index m = part.dimension();
  const Index period = config.gap_check_period.value_or(n);

  SplitMix64 rng(config.rng_seed);
  Vector x = initial_point(problem, config, rng);

  RunRecord record;
  record.solver = name;
  record.seed = config.rng_seed;
  record.initial_objective = objective(problem, x);
  if (config.record_iterates) record.iterate_trace.push_back(x);

  std::unique_ptr<BlockStepper> stepper;
  if (kind == StepKind::BlockSurrogate) {
    stepper = problem.make_stepper();
    stepper->reset(x);
  }

  double phi = record.initial_objective;
  double epoch = 0.0;
  Vector v_full, v_blk, z_old, z_new;
  bool gap_evaluated_at_final = false;

  Index k = 1;
  for (; k <= config.max_iterations; ++k) {
    if ((k - 1) % period == 0) {
      problem.h_subgradient(x, v_full);
      const GapReport gr = evaluate_gap(problem, x, v_full);
      record.gap_trace.push_back({k, gr.gap_value});
      if (gr.gap_value <= config.gap_tolerance) {
        record.terminated_by_gap = true;
        gap_evaluated_at_final = true;
        break;
      }
    }

    const Index i = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n)));
    problem.h_block_subgradient(x, i, v_blk);
    const double bg = block_gap(problem, x, v_blk, i);

    part.gather(x, i, z_old);
    if (kind == StepKind::BlockSurrogate) {
      stepper->solve(x, i, v_blk, z_new);
    } else {
      detail::prox_gradient_block_step(problem, x, i, v_blk, z_new);
    }
    if (!problem.block_feasible(z_new, i, 1e-9))
      throw SolverFault(k, "block subproblem returned an infeasible point");

    part.scatter(z_new, i, x);
    double phi_new = problem.objective_after_block_update(x, phi, i, z_old);
    if (phi_new > phi + descent_slack(phi))
      throw SolverFault(k, "non-descent step (broken block subproblem solver)");

    epoch += static_cast<double>(part.block_size(i)) / static_cast<double>(m);
    record.iterations.push_back({phi_new, i, bg, phi - phi_new, epoch});
    if (stepper) stepper->committed(x, i, z_old);
    if (config.record_iterates) record.iterate_trace.push_back(x);
    phi = phi_new;

    // Bound incremental-objective drift: one full evaluation per epoch.
    if (k % n == 0) phi = objective(problem, x);
  }

  if (!gap_evaluated_at_final) {
    problem.h_subgradient(x, v_full);
    const GapReport gr = evaluate_gap(problem, x, v_full);
    record.gap_trace.push_back({std::min(k, config.max_iterations + 1), gr.gap_value});
    if (gr.gap_value <= config.gap_tolerance) record.terminated_by_gap = true;
  }

  record.final_point = std::move(x);
  record.epochs = epoch;
  record.wall_time_seconds = seconds_since(t0);
  return record;
}

}  // namespace

RunRecord solve_bdca(const DcProblem& problem, const SolverConfig& config) {
  return run_block_solver(problem, config, StepKind::BlockSurrogate, "bdca");
}

RunRecord solve_rcsd(const DcProblem& problem, const SolverConfig& config) {
  return run_block_solver(problem, config, StepKind::ProxGradient, "rcsd");
}

FullSurrogateSolver prox_full_surrogate() {
  return [](const DcProblem& p, const Vector& x, const Vector& v, Vector& out) {
    if (!p.quadratic_envelope_f())
      throw ConfigError("prox_full_surrogate is exact only for quadratic-envelope f");
    out.resize(p.dimension());
    Vector v_blk, z;
    for (Index i = 0; i < p.partition().count(); ++i) {
      p.partition().gather(v, i, v_blk);
      detail::prox_gradient_block_step(p, x, i, v_blk, z);
      p.partition().scatter(z, i, out);
    }
  };
}

FullSurrogateSolver coordinate_sweep_surrogate(Index max_sweeps, double tol) {
  return [max_sweeps, tol](const DcProblem& p, const Vector& x, const Vector& v, Vector& out) {
    out = x;
    auto stepper = p.make_stepper();
    stepper->reset(out);
    Vector v_blk, z_old, z_new;
    for (Index sweep = 0; sweep < max_sweeps; ++sweep) {
      double change = 0.0;
      for (Index i = 0; i < p.partition().count(); ++i) {
        p.partition().gather(v, i, v_blk);
        p.partition().gather(out, i, z_old);
        stepper->solve(out, i, v_blk, z_new);
        p.partition().scatter(z_new, i, out);
        stepper->committed(out, i, z_old);
        change = std::max(change, (z_new - z_old).lpNorm<Eigen::Infinity>());
      }
      if (change <= tol * (1.0 + out.lpNorm<Eigen::Infinity>())) break;
    }
  };
}

RunRecord solve_dca(const DcProblem& problem, const SolverConfig& config,
                    const FullSurrogateSolver& full_solver) {
  config.validate();
  const auto t0 = Clock::now();
  const Index period = config.gap_check_period.value_or(1);

  SplitMix64 rng(config.rng_seed);
  Vector x = initial_point(problem, config, rng);

  RunRecord record;
  record.solver = "dca";
  record.seed = config.rng_seed;
  record.initial_objective = objective(problem, x);
  if (config.record_iterates) record.iterate_trace.push_back(x);

  double phi = record.initial_objective;
  Vector v, x_new;
  bool gap_evaluated_at_final = false;

  Index k = 1;
  for (; k <= config.max_iterations; ++k) {
    problem.h_subgradient(x, v);
    double gap_here = kNaN;
    if ((k - 1) % period == 0) {
      const GapReport gr = evaluate_gap(problem, x, v);
      record.gap_trace.push_back({k, gr.gap_value});
      gap_here = gr.gap_value;
      if (gr.gap_value <= config.gap_tolerance) {
        record.terminated_by_gap = true;
        gap_evaluated_at_final = true;
        break;
      }
    }

    full_solver(problem, x, v, x_new);
    if (!problem.feasible(x_new))
      throw SolverFault(k, "full subproblem returned an infeasible point");
    const double phi_new = objective(problem, x_new);
    if (phi_new > phi + descent_slack(phi))
      throw SolverFault(k, "non-descent step (broken full subproblem solver)");

    record.iterations.push_back({phi_new, -1, gap_here, phi - phi_new, static_cast<double>(k)});
    x = x_new;
    if (config.record_iterates) record.iterate_trace.push_back(x);
    phi = phi_new;
  }

  if (!gap_evaluated_at_final) {
    problem.h_subgradient(x, v);
    const GapReport gr = evaluate_gap(problem, x, v);
    record.gap_trace.push_back({std::min(k, config.max_iterations + 1), gr.gap_value});
    if (gr.gap_value <= config.gap_tolerance) record.terminated_by_gap = true;
  }

  record.final_point = std::move(x);
  record.epochs = static_cast<double>(record.iterations.size());
  record.wall_time_seconds = seconds_since(t0);
  return record;
}

RunRecord solve_dca(const DcProblem& problem, const SolverConfig& config) {
  return solve_dca(problem, config, prox_full_surrogate());
}

RateCertificate rate_certificate(const RunRecord& record, Index n_blocks) {
  if (record.gap_trace.empty()) throw ConfigError("rate_certificate: empty gap trace");
  if (record.iterations.empty()) throw ConfigError("rate_certificate: empty iteration trace");

  RateCertificate cert;
  cert.min_gap = record.min_recorded_gap();
  const double k_total = static_cast<double>(record.iterations.size());
  cert.bound = static_cast<double>(n_blocks) / k_total *
               (record.initial_objective - record.best_objective());

  for (const auto& it : record.iterations) {
    if (std::isnan(it.block_gap)) continue;
    const double phi_before = it.objective + it.phi_decrease;
    if (it.block_gap > it.phi_decrease + descent_slack(phi_before)) ++cert.violations;
  }
  return cert;
}

}  // namespace bcdc
