#include "bcdc/problems/sparse_logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bcdc/rng.hpp"
#include "bcdc/spectral.hpp"

namespace bcdc {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 30.0) return t + std::log1p(std::exp(-t));
  if (t < -30.0) return std::exp(t);
  return std::log1p(std::exp(t));
}

// sigma(-s) = 1 / (1 + exp(s)) without overflow.
double sigmoid_neg(double s) {
  if (s >= 0.0) {
    const double e = std::exp(-s);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(s));
}

}  // namespace

LogisticInstance make_logistic_instance(SparseMatrix features, Vector labels, double lambda,
                                        Index q_top, double smoothness) {
  if (features.rows() != labels.size()) throw ConfigError("labels/features size mismatch");
  if (q_top < 1 || q_top > features.cols()) throw ConfigError("q_top must lie in [1, m]");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  for (Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0) throw ConfigError("labels must be +-1");

  features.makeCompressed();
  const double n = static_cast<double>(features.rows());
  const double sigma = spectral_norm_estimate(features, 100, 1e-9);
  const double estimate = sigma * sigma / (4.0 * n);
  LogisticInstance inst{std::move(features), std::move(labels), lambda, q_top, smoothness};
  if (inst.smoothness <= 0.0) {
    inst.smoothness = 1.01 * estimate;
  } else if (inst.smoothness < estimate) {
    throw ConfigError("declared loss smoothness is below the power-iteration estimate");
  }
  return inst;
}

LogisticInstance make_synthetic_logistic(Index n_samples, Index n_features, double density,
                                         double label_noise, Index q_top, double lambda,
                                         std::uint64_t seed) {
  if (n_samples < 1 || n_features < 1) throw ConfigError("empty synthetic instance");
  SplitMix64 rng(seed);

  // Planted predictor on ~10% of the features.
  Vector w = Vector::Zero(n_features);
  const Index support = std::max<Index>(1, n_features / 10);
  for (Index s = 0; s < support; ++s) {
    const Index j = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n_features)));
    w[j] = rng.gaussian();
  }

  std::vector<Eigen::Triplet<double>> triplets;
  Vector labels(n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    double margin = 0.0;
    for (Index j = 0; j < n_features; ++j) {
      if (rng.uniform() < density) {
        const double value = rng.gaussian();
        triplets.emplace_back(i, j, value);
        margin += value * w[j];
      }
    }
    double label = margin >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < label_noise) label = -label;
    labels[i] = label;
  }
  SparseMatrix a(n_samples, n_features);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return make_logistic_instance(std::move(a), std::move(labels), lambda, q_top);
}

double logistic_loss_and_gradient(const LogisticInstance& inst, const Vector& x, Vector& grad) {
  if (x.size() != inst.dimension()) throw DomainError("logistic loss: dimension mismatch");
  const double inv_n = 1.0 / static_cast<double>(inst.samples());
  grad.setZero(inst.dimension());
  double loss = 0.0;
  const auto& a = inst.features;
  for (Index i = 0; i < a.rows(); ++i) {
    double margin = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) margin += it.value() * x[it.col()];
    const double s = inst.labels[i] * margin;
    loss += softplus(-s);
    const double coeff = -inv_n * inst.labels[i] * sigmoid_neg(s);
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) grad[it.col()] += coeff * it.value();
  }
  return loss * inv_n;
}

double logistic_loss(const LogisticInstance& inst, const Vector& x) {
  if (x.size() != inst.dimension()) throw DomainError("logistic loss: dimension mismatch");
  const auto& a = inst.features;
  double loss = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double margin = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) margin += it.value() * x[it.col()];
    loss += softplus(-inst.labels[i] * margin);
  }
  return loss / static_cast<double>(inst.samples());
}

double largest_q_norm(const Vector& x, Index q_top) {
  if (q_top < 1 || q_top > x.size()) throw ConfigError("q_top must lie in [1, m]");
  std::vector<double> mags(static_cast<size_t>(x.size()));
  for (Index j = 0; j < x.size(); ++j) mags[static_cast<size_t>(j)] = std::abs(x[j]);
  std::nth_element(mags.begin(), mags.begin() + (q_top - 1), mags.end(), std::greater<double>());
  double sum = 0.0;
  for (Index j = 0; j < q_top; ++j) sum += mags[static_cast<size_t>(j)];
  return sum;
}

void largest_q_subgradient(const Vector& x, Index q_top, Vector& sub) {
  if (q_top < 1 || q_top > x.size()) throw ConfigError("q_top must lie in [1, m]");
  std::vector<Index> order(static_cast<size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index{0});
  // Maximal |x_j| first; ties broken by lowest index for reproducibility.
  std::stable_sort(order.begin(), order.end(),
                   [&x](Index a, Index b) { return std::abs(x[a]) > std::abs(x[b]); });
  sub.setZero(x.size());
  for (Index r = 0; r < q_top; ++r) {
    const Index j = order[static_cast<size_t>(r)];
    sub[j] = x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0);
  }
}

void soft_threshold_block(const Vector& v_block, double big_l, double lambda, Vector& out) {
  if (big_l <= 0.0) throw ConfigError("soft threshold needs L > 0");
  out.resize(v_block.size());
  const double shrink = lambda / big_l;
  for (Index j = 0; j < v_block.size(); ++j) {
    const double u = v_block[j] / big_l;
    out[j] = u > shrink ? u - shrink : (u < -shrink ? u + shrink : 0.0);
  }
}

LogisticDcProblem::LogisticDcProblem(LogisticInstance instance, BlockPartition partition,
                                     SparsityMode mode)
    : DcProblem(std::move(partition), instance.smoothness),
      instance_(std::move(instance)),
      mode_(mode) {
  if (partition_.dimension() != instance_.dimension())
    throw ConfigError("partition dimension does not match the instance");
}

double LogisticDcProblem::f_value(const Vector& x) const {
  return 0.5 * smoothness_ * x.squaredNorm();
}

void LogisticDcProblem::f_gradient(const Vector& x, Vector& grad) const { grad = smoothness_ * x; }

void LogisticDcProblem::f_block_gradient(const Vector& x, Index block, Vector& out) const {
  const auto& idx = partition_.block(block);
  out.resize(static_cast<Index>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) out[static_cast<Index>(j)] = smoothness_ * x[idx[j]];
}

double LogisticDcProblem::g_block_value(const Vector& x_block, Index block) const {
  (void)block;
  return instance_.lambda * x_block.lpNorm<1>();
}

void LogisticDcProblem::block_prox(const Vector& u_block, Index block, double t, Vector& out) const {
  (void)block;
  out.resize(u_block.size());
  const double shrink = t * instance_.lambda;
  for (Index j = 0; j < u_block.size(); ++j) {
    const double u = u_block[j];
    out[j] = u > shrink ? u - shrink : (u < -shrink ? u + shrink : 0.0);
  }
}

double LogisticDcProblem::h_value(const Vector& x) const {
  double value = 0.5 * smoothness_ * x.squaredNorm() - logistic_loss(instance_, x);
  if (mode_ == SparsityMode::LargestQInH)
    value += instance_.lambda * largest_q_norm(x, instance_.q_top);
  return value;
}

void LogisticDcProblem::h_subgradient(const Vector& x, Vector& v) const {
  Vector loss_grad;
  logistic_loss_and_gradient(instance_, x, loss_grad);
  v = smoothness_ * x - loss_grad;
  if (mode_ == SparsityMode::LargestQInH) {
    Vector q_sub;
    largest_q_subgradient(x, instance_.q_top, q_sub);
    v += instance_.lambda * q_sub;
  }
}

bool LogisticDcProblem::block_feasible(const Vector& x_block, Index block, double tol) const {
  (void)block;
  (void)tol;
  return all_finite(x_block);
}

double LogisticDcProblem::direct_objective(const Vector& x) const {
  const double loss = logistic_loss(instance_, x);
  if (mode_ == SparsityMode::PlainL1) return loss + instance_.lambda * x.lpNorm<1>();
  return loss + instance_.lambda * (x.lpNorm<1>() - largest_q_norm(x, instance_.q_top));
}

std::shared_ptr<LogisticDcProblem> build_dc_decomposition(LogisticInstance instance,
                                                          Index block_size, SparsityMode mode) {
  auto partition = BlockPartition::contiguous(instance.dimension(), block_size);
  return std::make_shared<LogisticDcProblem>(std::move(instance), std::move(partition), mode);
}

}  // namespace bcdc
