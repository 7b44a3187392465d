#include "bcdc/dc_problem.hpp"

namespace bcdc {

void DcProblem::f_block_gradient(const Vector& x, Index block, Vector& out) const {
  Vector full(dimension());
  f_gradient(x, full);
  partition_.gather(full, block, out);
}

double DcProblem::g_block_value(const Vector& x_block, Index block) const {
  (void)x_block;
  (void)block;
  return 0.0;
}

double DcProblem::g_value(const Vector& x) const {
  double sum = 0.0;
  Vector blk;
  for (Index i = 0; i < partition_.count(); ++i) {
    partition_.gather(x, i, blk);
    sum += g_block_value(blk, i);
  }
  return sum;
}

void DcProblem::h_block_subgradient(const Vector& x, Index block, Vector& out) const {
  Vector full(dimension());
  h_subgradient(x, full);
  partition_.gather(full, block, out);
}

void DcProblem::project_block(Vector& x_block, Index block) const {
  Vector projected;
  block_prox(x_block, block, 0.0, projected);
  x_block = projected;
}

bool DcProblem::block_feasible(const Vector& x_block, Index block, double tol) const {
  if (!all_finite(x_block)) return false;
  Vector projected = x_block;
  project_block(projected, block);
  return (projected - x_block).lpNorm<Eigen::Infinity>() <= tol * (1.0 + x_block.lpNorm<Eigen::Infinity>());
}

bool DcProblem::feasible(const Vector& x, double tol) const {
  if (x.size() != dimension() || !all_finite(x)) return false;
  Vector blk;
  for (Index i = 0; i < partition_.count(); ++i) {
    partition_.gather(x, i, blk);
    if (!block_feasible(blk, i, tol)) return false;
  }
  return true;
}

void DcProblem::project(Vector& x) const {
  Vector blk;
  for (Index i = 0; i < partition_.count(); ++i) {
    partition_.gather(x, i, blk);
    project_block(blk, i);
    partition_.scatter(blk, i, x);
  }
}

std::unique_ptr<BlockStepper> DcProblem::make_stepper() const {
  if (!quadratic_envelope_f())
    throw ConfigError("problem does not provide a block subproblem solver");
  return std::make_unique<ProxBlockStepper>(*this);
}

double DcProblem::objective_after_block_update(const Vector& x_new, double phi_old, Index block,
                                               const Vector& old_block) const {
  (void)phi_old;
  (void)block;
  (void)old_block;
  return f_value(x_new) + g_value(x_new) - h_value(x_new);
}

namespace detail {

void prox_gradient_block_step(const DcProblem& p, const Vector& x, Index block,
                              const Vector& v_block, Vector& z_out) {
  const double big_l = p.smoothness();
  if (big_l <= 0.0) throw ConfigError("prox-gradient step needs a positive smoothness constant");
  const auto& idx = p.partition().block(block);
  Vector u(static_cast<Index>(idx.size()));
  p.f_block_gradient(x, block, u);  // u holds grad_i f(x)
  for (size_t j = 0; j < idx.size(); ++j) {
    const Index r = static_cast<Index>(j);
    u[r] = x[idx[j]] - (u[r] - v_block[r]) / big_l;
  }
  p.block_prox(u, block, 1.0 / big_l, z_out);
}

}  // namespace detail

}  // namespace bcdc
