#pragma once

#include <memory>

#include "bcdc/block_partition.hpp"
#include "bcdc/solvers.hpp"

namespace bcdc {

// Latent-variable model driven by the block EM loop: the E-step turns the
// current parameters into expected complete-data quantities, the block
// M-step minimizes the expected complete-data negative log-likelihood over
// one parameter block with the others fixed.
class LatentModel {
 public:
  virtual ~LatentModel() = default;

  const BlockPartition& partition() const { return partition_; }
  Index parameter_dimension() const { return partition_.dimension(); }

  virtual Index expected_size() const = 0;
  virtual void e_step(const Vector& theta, Vector& expected) const = 0;
  // Writes the updated block only; must leave every other block untouched.
  virtual void block_m_step(const Vector& expected, const Vector& theta, Index block,
                            Vector& out_block) const = 0;
  virtual double neg_log_likelihood(const Vector& theta) const = 0;
  virtual void project_block(Vector& block_values, Index block) const {
    (void)block_values;
    (void)block;
  }

  // M-step with the objective augmented by lambda * R_block; models that
  // support regularized runs override.
  virtual void block_m_step_regularized(const Vector& expected, const Vector& theta, Index block,
                                        double lambda, Vector& out_block) const;
  // R_i evaluated on a block; pairs with block_m_step_regularized.
  virtual double regularizer_block_value(const Vector& theta_block, Index block) const;

 protected:
  explicit LatentModel(BlockPartition partition) : partition_(std::move(partition)) {}
  BlockPartition partition_;
};

// Block EM: per iteration pick a block uniformly, refresh the posterior
// expectations at the current parameters, minimize the surrogate over that
// block. The recorded objective is the negative log-likelihood, which is
// nonincreasing (an M-step that increases it beyond slack is a fault).
RunRecord run_block_em(const LatentModel& model, const SolverConfig& config);

// Same loop with the M-step objective augmented by lambda * R_i; the record
// tracks the penalized negative log-likelihood.
RunRecord run_block_rem(const LatentModel& model, double lambda, const SolverConfig& config);

}  // namespace bcdc
