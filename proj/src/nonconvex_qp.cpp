#include "bcdc/problems/nonconvex_qp.hpp"

#include <cmath>
#include <vector>

#include "bcdc/rng.hpp"
#include "bcdc/spectral.hpp"

namespace bcdc {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

QpInstance make_qp_instance(SparseMatrix cost, std::optional<double> lambda) {
  if (cost.rows() != cost.cols()) throw ConfigError("cost matrix must be square");
  SparseMatrix transposed = SparseMatrix(cost.transpose());
  SparseMatrix symmetric = ((cost + transposed) * 0.5).pruned();
  symmetric.makeCompressed();

  QpInstance inst;
  inst.frobenius_norm = frobenius_norm(symmetric);
  inst.spectral_norm = 1.01 * spectral_norm_estimate(symmetric, 200, 1e-9);
  inst.lambda = lambda.value_or(inst.frobenius_norm / std::sqrt(static_cast<double>(symmetric.rows())));
  if (inst.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  inst.cost = std::move(symmetric);
  return inst;
}

QpInstance make_synthetic_qp(Index m, double density, QpWeights weights, std::uint64_t seed,
                             std::optional<double> lambda) {
  if (m < 2) throw ConfigError("QP dimension must be at least 2");
  SplitMix64 rng(seed);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      if (rng.uniform() >= density) continue;
      const double w = weights == QpWeights::Unit ? -1.0 : rng.gaussian();
      triplets.emplace_back(i, j, w);
      triplets.emplace_back(j, i, w);
    }
  }
  if (triplets.empty()) {
    triplets.emplace_back(0, 1, -1.0);
    triplets.emplace_back(1, 0, -1.0);
  }
  SparseMatrix q(m, m);
  q.setFromTriplets(triplets.begin(), triplets.end());
  return make_qp_instance(std::move(q), lambda);
}

double scalar_quadratic_minimize(double a, double b, double lower, double upper) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("non-finite quadratic coefficients");
  if (!(lower <= upper)) throw DomainError("empty interval");
  if (a > 0.0) {
    const double vertex = -b / (2.0 * a);
    return vertex < lower ? lower : (vertex > upper ? upper : vertex);
  }
  if (a == 0.0) return b > 0.0 ? lower : (b < 0.0 ? upper : lower);
  const double at_lower = (a * lower + b) * lower;
  const double at_upper = (a * upper + b) * upper;
  return at_lower <= at_upper ? lower : upper;
}

QpPrimalProblem::QpPrimalProblem(QpInstance instance)
    : DcProblem(BlockPartition::coordinates(instance.dimension()), 2.0 * instance.spectral_norm),
      instance_(std::move(instance)) {
  diagonal_ = Vector::Zero(instance_.dimension());
  const auto& q = instance_.cost;
  for (Index i = 0; i < q.rows(); ++i)
    for (SparseMatrix::InnerIterator it(q, i); it; ++it)
      if (it.col() == i) diagonal_[i] = it.value();
}

double QpPrimalProblem::row_dot(Index i, const Vector& x) const {
  double sum = 0.0;
  for (SparseMatrix::InnerIterator it(instance_.cost, i); it; ++it) sum += it.value() * x[it.col()];
  return sum;
}

double QpPrimalProblem::diagonal(Index i) const { return diagonal_[i]; }

double QpPrimalProblem::f_value(const Vector& x) const {
  double sum = 0.0;
  for (Index i = 0; i < dimension(); ++i) sum += x[i] * row_dot(i, x);
  return sum;
}

void QpPrimalProblem::f_gradient(const Vector& x, Vector& grad) const {
  grad.resize(dimension());
  for (Index i = 0; i < dimension(); ++i) grad[i] = 2.0 * row_dot(i, x);
}

void QpPrimalProblem::f_block_gradient(const Vector& x, Index block, Vector& out) const {
  out.resize(1);
  out[0] = 2.0 * row_dot(block, x);
}

void QpPrimalProblem::block_prox(const Vector& u_block, Index block, double t, Vector& out) const {
  (void)block;
  (void)t;  // g == 0: the scaled prox is the box projection at every scale
  out.resize(u_block.size());
  for (Index j = 0; j < u_block.size(); ++j) out[j] = clamp_unit(u_block[j]);
}

double QpPrimalProblem::h_value(const Vector& x) const { return instance_.lambda * x.lpNorm<1>(); }

void QpPrimalProblem::h_subgradient(const Vector& x, Vector& v) const {
  v.resize(x.size());
  for (Index j = 0; j < x.size(); ++j) v[j] = instance_.lambda * sign_of(x[j]);
}

void QpPrimalProblem::h_block_subgradient(const Vector& x, Index block, Vector& out) const {
  out.resize(1);
  out[0] = instance_.lambda * sign_of(x[block]);
}

double QpPrimalProblem::objective_after_block_update(const Vector& x_new, double phi_old,
                                                     Index block, const Vector& old_block) const {
  const double delta = x_new[block] - old_block[0];
  // (Qx_old)_i recovered from the updated point: row i saw only the diagonal change.
  const double qx_old = row_dot(block, x_new) - diagonal_[block] * delta;
  const double df = 2.0 * delta * qx_old + diagonal_[block] * delta * delta;
  const double dh = instance_.lambda * (std::abs(x_new[block]) - std::abs(old_block[0]));
  return phi_old + df - dh;
}

namespace {

// Scalar-quadratic stepper with a running Qx cache: each step costs
// O(nnz(column i)); the cache drifts by one rounding per update and is
// rebuilt every m commits.
class QpPrimalStepper final : public BlockStepper {
 public:
  explicit QpPrimalStepper(const QpPrimalProblem& p) : problem_(p) {}

  void reset(const Vector& x0) override {
    qx_.resize(x0.size());
    for (Index i = 0; i < x0.size(); ++i) qx_[i] = problem_.row_dot(i, x0);
    commits_ = 0;
  }

  void solve(const Vector& x, Index block, const Vector& v_block, Vector& z_out) override {
    const double a = problem_.diagonal(block);
    const double b = 2.0 * (qx_[block] - a * x[block]) - v_block[0];
    z_out.resize(1);
    z_out[0] = scalar_quadratic_minimize(a, b, -1.0, 1.0);
  }

  void committed(const Vector& x, Index block, const Vector& old_block) override {
    const double delta = x[block] - old_block[0];
    if (delta != 0.0) {
      const auto& q = problem_.instance().cost;
      // Symmetric: row `block` is column `block`.
      for (SparseMatrix::InnerIterator it(q, block); it; ++it) qx_[it.col()] += it.value() * delta;
    }
    if (++commits_ % x.size() == 0)
      for (Index i = 0; i < x.size(); ++i) qx_[i] = problem_.row_dot(i, x);
  }

 private:
  const QpPrimalProblem& problem_;
  Vector qx_;
  Index commits_ = 0;
};

}  // namespace

std::unique_ptr<BlockStepper> QpPrimalProblem::make_stepper() const {
  return std::make_unique<QpPrimalStepper>(*this);
}

QpEnvelopeProblem::QpEnvelopeProblem(std::shared_ptr<const QpPrimalProblem> primal)
    : DcProblem(BlockPartition::coordinates(primal->dimension()), primal->smoothness()),
      primal_(std::move(primal)) {
  // Rayleigh-quotient probes: the declared L must dominate 2 |r^T Q r| / ||r||^2.
  SplitMix64 rng(0xE77eu);
  Vector r(dimension());
  for (int probe = 0; probe < 3; ++probe) {
    for (Index j = 0; j < r.size(); ++j) r[j] = rng.uniform() - 0.5;
    const double rayleigh = std::abs(r.dot(Vector(primal_->instance().cost * r))) / r.squaredNorm();
    if (smoothness_ < 2.0 * rayleigh)
      throw ConfigError("envelope constant below a Rayleigh-quotient probe of 2||Q||");
  }
}

double QpEnvelopeProblem::f_value(const Vector& x) const {
  return 0.5 * smoothness_ * x.squaredNorm();
}

void QpEnvelopeProblem::f_gradient(const Vector& x, Vector& grad) const { grad = smoothness_ * x; }

void QpEnvelopeProblem::f_block_gradient(const Vector& x, Index block, Vector& out) const {
  out.resize(1);
  out[0] = smoothness_ * x[block];
}

void QpEnvelopeProblem::block_prox(const Vector& u_block, Index block, double t, Vector& out) const {
  primal_->block_prox(u_block, block, t, out);
}

double QpEnvelopeProblem::h_value(const Vector& x) const {
  return primal_->h_value(x) + 0.5 * smoothness_ * x.squaredNorm() - primal_->f_value(x);
}

void QpEnvelopeProblem::h_subgradient(const Vector& x, Vector& v) const {
  primal_->f_gradient(x, v);  // 2Qx
  for (Index j = 0; j < x.size(); ++j)
    v[j] = primal_->instance().lambda * sign_of(x[j]) + smoothness_ * x[j] - v[j];
}

void QpEnvelopeProblem::h_block_subgradient(const Vector& x, Index block, Vector& out) const {
  out.resize(1);
  out[0] = primal_->instance().lambda * sign_of(x[block]) + smoothness_ * x[block] -
           2.0 * primal_->row_dot(block, x);
}

double QpEnvelopeProblem::objective_after_block_update(const Vector& x_new, double phi_old,
                                                       Index block, const Vector& old_block) const {
  return primal_->objective_after_block_update(x_new, phi_old, block, old_block);
}

namespace {

// Closed form of the envelope block subproblem: the prox-gradient step on
// the primal oracles. Evaluating it through the exact code path the RCSD
// solver uses keeps BDCA-on-envelope and RCSD-on-primal bit-identical.
class QpEnvelopeStepper final : public BlockStepper {
 public:
  explicit QpEnvelopeStepper(const QpPrimalProblem& primal) : primal_(primal) {}

  void solve(const Vector& x, Index block, const Vector& v_block, Vector& z_out) override {
    (void)v_block;  // recomputed on the primal side; algebraically the same subgradient
    primal_.h_block_subgradient(x, block, v_primal_);
    detail::prox_gradient_block_step(primal_, x, block, v_primal_, z_out);
  }

 private:
  const QpPrimalProblem& primal_;
  Vector v_primal_;
};

}  // namespace

std::unique_ptr<BlockStepper> QpEnvelopeProblem::make_stepper() const {
  return std::make_unique<QpEnvelopeStepper>(*primal_);
}

std::shared_ptr<QpPrimalProblem> build_primal_decomposition(QpInstance instance) {
  return std::make_shared<QpPrimalProblem>(std::move(instance));
}

std::shared_ptr<QpEnvelopeProblem> build_envelope_decomposition(QpInstance instance) {
  return std::make_shared<QpEnvelopeProblem>(
      std::make_shared<QpPrimalProblem>(std::move(instance)));
}

}  // namespace bcdc
