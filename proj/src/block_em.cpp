#include "bcdc/problems/block_em.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace bcdc {

void LatentModel::block_m_step_regularized(const Vector& expected, const Vector& theta, Index block,
                                           double lambda, Vector& out_block) const {
  (void)expected;
  (void)theta;
  (void)block;
  (void)lambda;
  (void)out_block;
  throw ConfigError("model does not support regularized M-steps");
}

double LatentModel::regularizer_block_value(const Vector& theta_block, Index block) const {
  (void)theta_block;
  (void)block;
  throw ConfigError("model does not define a regularizer");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Inexact inner M-steps leave a little slack before the MM descent check.
double em_slack(double objective_value) { return 1e-8 * (1.0 + std::abs(objective_value)); }

RunRecord run_em_loop(const LatentModel& model, const SolverConfig& config, bool regularized,
                      double lambda) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto& part = model.partition();
  const Index n = part.count();
  const Index m = part.dimension();

  SplitMix64 rng(config.rng_seed);
  Vector theta;
  switch (config.init) {
    case SolverConfig::Init::ZeroProjected:
      theta = Vector::Zero(m);
      break;
    case SolverConfig::Init::Gaussian:
      theta.resize(m);
      for (Index j = 0; j < m; ++j) theta[j] = rng.gaussian();
      break;
    case SolverConfig::Init::Given:
      if (config.start.size() != m) throw ConfigError("start point has wrong dimension");
      theta = config.start;
      break;
  }

  auto penalty = [&](const Vector& t) {
    if (!regularized) return 0.0;
    double sum = 0.0;
    Vector blk;
    for (Index i = 0; i < n; ++i) {
      part.gather(t, i, blk);
      sum += model.regularizer_block_value(blk, i);
    }
    return lambda * sum;
  };

  RunRecord record;
  record.solver = regularized ? "block-rem" : "block-em";
  record.seed = config.rng_seed;
  double objective = model.neg_log_likelihood(theta) + penalty(theta);
  record.initial_objective = objective;
  if (config.record_iterates) record.iterate_trace.push_back(theta);

  Vector expected(model.expected_size());
  Vector new_block;
  double epoch = 0.0;
  for (Index k = 1; k <= config.max_iterations; ++k) {
    const Index i = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n)));
    model.e_step(theta, expected);
    if (regularized) {
      model.block_m_step_regularized(expected, theta, i, lambda, new_block);
    } else {
      model.block_m_step(expected, theta, i, new_block);
    }
    part.scatter(new_block, i, theta);

    const double updated = model.neg_log_likelihood(theta) + penalty(theta);
    if (updated > objective + em_slack(objective))
      throw SolverFault(k, "M-step increased the likelihood surrogate");

    epoch += static_cast<double>(part.block_size(i)) / static_cast<double>(m);
    record.iterations.push_back({updated, i, kNaN, objective - updated, epoch});
    if (config.record_iterates) record.iterate_trace.push_back(theta);
    objective = updated;
  }

  record.final_point = std::move(theta);
  record.epochs = epoch;
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

}  // namespace

RunRecord run_block_em(const LatentModel& model, const SolverConfig& config) {
  return run_em_loop(model, config, false, 0.0);
}

RunRecord run_block_rem(const LatentModel& model, double lambda, const SolverConfig& config) {
  if (lambda < 0.0) throw ConfigError("regularization weight must be nonnegative");
  return run_em_loop(model, config, true, lambda);
}

}  // namespace bcdc
