#include "bcdc/spectral.hpp"

#include <cmath>

#include "bcdc/rng.hpp"

namespace bcdc {

double spectral_norm_estimate(const SparseMatrix& a, Index iterations, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  SplitMix64 rng(0x5eedu);
  Vector u(a.cols());
  for (Index j = 0; j < u.size(); ++j) u[j] = rng.uniform() - 0.5;
  double norm = u.norm();
  if (norm == 0.0) return 0.0;
  u /= norm;

  double estimate = 0.0;
  Vector w(a.rows());
  for (Index it = 0; it < iterations; ++it) {
    w.noalias() = a * u;
    u.noalias() = a.transpose() * w;
    const double gain = u.norm();
    if (gain == 0.0) return 0.0;  // u landed in the null space
    u /= gain;
    const double next = std::sqrt(gain);  // sqrt of the A^T A Rayleigh growth
    if (it > 0 && std::abs(next - estimate) <= tol * next) return next;
    estimate = next;
  }
  return estimate;
}

double frobenius_norm(const SparseMatrix& a) {
  double sum = 0.0;
  for (Index i = 0; i < a.nonZeros(); ++i) sum += a.valuePtr()[i] * a.valuePtr()[i];
  return std::sqrt(sum);
}

}  // namespace bcdc
