#pragma once

#include <memory>
#include <optional>

#include "bcdc/dc_problem.hpp"

namespace bcdc {

// min_{||x||_inf <= 1} x^T Q x - lambda ||x||_1 with symmetric Q; the
// negative l1 term promotes binary solutions.
struct QpInstance {
  SparseMatrix cost;          // symmetric m x m
  double lambda = 0.0;
  double spectral_norm = 0.0;   // inflated power-iteration estimate of ||Q||
  double frobenius_norm = 0.0;

  Index dimension() const { return cost.rows(); }
};

// Symmetrizes the matrix exactly ((Q + Q^T)/2), estimates norms (200 power
// iterations, 1.01 inflation) and defaults lambda to ||Q||_F / sqrt(m).
QpInstance make_qp_instance(SparseMatrix cost, std::optional<double> lambda = std::nullopt);

// Seeded random symmetric matrix with zero diagonal (graph-like costs).
enum class QpWeights { Unit, Gaussian };
QpInstance make_synthetic_qp(Index m, double density, QpWeights weights, std::uint64_t seed,
                             std::optional<double> lambda = std::nullopt);

// Global minimizer of a z^2 + b z on [lower, upper]:
// a > 0 clamps the vertex, a == 0 picks the endpoint by sign of b (lower on
// tie), a < 0 picks the endpoint with the smaller value (lower on exact tie).
double scalar_quadratic_minimize(double a, double b, double lower, double upper);

// f = x^T Q x (grad 2Qx, L = 2||Q||), g = 0, h = lambda ||x||_1,
// M = [-1,1]^m with per-coordinate blocks. Block subproblems are the exact
// scalar quadratics a = q_ii, b = 2 q_i^T xbar_i - v_i; the stepper keeps a
// running Qx that is updated per coordinate change and refreshed every m
// steps.
class QpPrimalProblem final : public DcProblem {
 public:
  explicit QpPrimalProblem(QpInstance instance);

  const QpInstance& instance() const { return instance_; }

  double f_value(const Vector& x) const override;
  void f_gradient(const Vector& x, Vector& grad) const override;
  void f_block_gradient(const Vector& x, Index block, Vector& out) const override;
  void block_prox(const Vector& u_block, Index block, double t, Vector& out) const override;
  double h_value(const Vector& x) const override;
  void h_subgradient(const Vector& x, Vector& v) const override;
  void h_block_subgradient(const Vector& x, Index block, Vector& out) const override;
  std::unique_ptr<BlockStepper> make_stepper() const override;
  double objective_after_block_update(const Vector& x_new, double phi_old, Index block,
                                      const Vector& old_block) const override;

  double row_dot(Index i, const Vector& x) const;  // (Qx)_i
  double diagonal(Index i) const;

 private:
  QpInstance instance_;
  Vector diagonal_;
};

// Quadratic-envelope reformulation recovering the block prox-gradient
// method: f = (L/2)||x||^2, g = 0, h = lambda ||x||_1 + (L/2)||x||^2 - x^T Q x.
// Its block stepper evaluates the closed-form subproblem solution as the
// prox-gradient step on the primal oracles, so a BDCA run here reproduces an
// RCSD run on the primal problem bit for bit under a shared seed.
class QpEnvelopeProblem final : public DcProblem {
 public:
  explicit QpEnvelopeProblem(std::shared_ptr<const QpPrimalProblem> primal);

  const QpPrimalProblem& primal() const { return *primal_; }

  double f_value(const Vector& x) const override;
  void f_gradient(const Vector& x, Vector& grad) const override;
  void f_block_gradient(const Vector& x, Index block, Vector& out) const override;
  void block_prox(const Vector& u_block, Index block, double t, Vector& out) const override;
  double h_value(const Vector& x) const override;
  void h_subgradient(const Vector& x, Vector& v) const override;
  void h_block_subgradient(const Vector& x, Index block, Vector& out) const override;
  bool quadratic_envelope_f() const override { return true; }
  std::unique_ptr<BlockStepper> make_stepper() const override;
  double objective_after_block_update(const Vector& x_new, double phi_old, Index block,
                                      const Vector& old_block) const override;

 private:
  std::shared_ptr<const QpPrimalProblem> primal_;
};

std::shared_ptr<QpPrimalProblem> build_primal_decomposition(QpInstance instance);
std::shared_ptr<QpEnvelopeProblem> build_envelope_decomposition(QpInstance instance);

}  // namespace bcdc
