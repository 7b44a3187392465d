#include "bcdc/gap.hpp"

#include <cmath>

namespace bcdc {

double objective(const DcProblem& problem, const Vector& x) {
  if (x.size() != problem.dimension()) throw DomainError("objective: dimension mismatch");
  if (!problem.feasible(x)) throw DomainError("objective: infeasible point");
  return problem.f_value(x) + problem.g_value(x) - problem.h_value(x);
}

namespace {

// Shared core: block maximand value given grad_i f(y) already in `grad`.
double block_maximand_max(const DcProblem& p, const Vector& y, const Vector& v_block, Index block,
                          const Vector& grad, Vector& y_blk, Vector& u, Vector& star) {
  const double big_l = p.smoothness();
  const auto& idx = p.partition().block(block);
  const Index nb = static_cast<Index>(idx.size());
  y_blk.resize(nb);
  u.resize(nb);
  for (Index j = 0; j < nb; ++j) {
    y_blk[j] = y[idx[static_cast<size_t>(j)]];
    u[j] = y_blk[j] - (grad[j] - v_block[j]) / big_l;
  }
  p.block_prox(u, block, 1.0 / big_l, star);
  double inner = 0.0, sq = 0.0;
  for (Index j = 0; j < nb; ++j) {
    const double w = grad[j] - v_block[j];
    const double d = y_blk[j] - star[j];
    inner += w * d;
    sq += d * d;
  }
  return inner + p.g_block_value(y_blk, block) - p.g_block_value(star, block) - 0.5 * big_l * sq;
}

}  // namespace

GapReport evaluate_gap(const DcProblem& problem, const Vector& y, const Vector& v) {
  if (problem.smoothness() <= 0.0) throw ConfigError("gap evaluation needs L > 0");
  if (y.size() != problem.dimension()) throw DomainError("evaluate_gap: dimension mismatch");
  if (!problem.feasible(y)) throw DomainError("evaluate_gap: infeasible point");

  GapReport report;
  report.maximizer.resize(y.size());
  Vector grad, v_blk, y_blk, u, star;
  double gap = 0.0, residual_sq = 0.0;
  const auto& part = problem.partition();
  for (Index i = 0; i < part.count(); ++i) {
    problem.f_block_gradient(y, i, grad);
    part.gather(v, i, v_blk);
    gap += block_maximand_max(problem, y, v_blk, i, grad, y_blk, u, star);
    part.scatter(star, i, report.maximizer);
    residual_sq += (y_blk - star).squaredNorm();
  }
  report.gap_value = gap;
  report.prox_residual = std::sqrt(residual_sq);
  return report;
}

double block_gap(const DcProblem& problem, const Vector& y, const Vector& v_block, Index block) {
  if (problem.smoothness() <= 0.0) throw ConfigError("gap evaluation needs L > 0");
  if (block < 0 || block >= problem.partition().count())
    throw DomainError("block_gap: block index out of range");
  Vector grad, y_blk, u, star;
  problem.f_block_gradient(y, block, grad);
  return block_maximand_max(problem, y, v_block, block, grad, y_blk, u, star);
}

double block_gap_full(const DcProblem& problem, const Vector& y, const Vector& v, Index block) {
  if (block < 0 || block >= problem.partition().count())
    throw DomainError("block_gap: block index out of range");
  Vector v_blk;
  problem.partition().gather(v, block, v_blk);
  return block_gap(problem, y, v_blk, block);
}

double prox_fixed_point_residual(const DcProblem& problem, const Vector& y, const Vector& v) {
  return evaluate_gap(problem, y, v).prox_residual;
}

}  // namespace bcdc
