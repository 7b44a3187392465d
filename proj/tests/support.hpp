#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <utility>

#include "bcdc/dc_problem.hpp"

namespace bcdc::testing {

// Oracle bundle assembled from lambdas; used to set up the small hand
// instances the gap and solver tests are written against.
class FunctionalDcProblem final : public DcProblem {
 public:
  using Value = std::function<double(const Vector&)>;
  using Gradient = std::function<void(const Vector&, Vector&)>;
  using BlockValue = std::function<double(const Vector&, Index)>;
  using BlockProx = std::function<void(const Vector&, Index, double, Vector&)>;

  FunctionalDcProblem(BlockPartition partition, double smoothness)
      : DcProblem(std::move(partition), smoothness) {}

  Value f = [](const Vector&) { return 0.0; };
  Gradient grad_f = [](const Vector& x, Vector& g) { g.setZero(x.size()); };
  BlockValue g_block = [](const Vector&, Index) { return 0.0; };
  // Default: g == 0, M == R^m (prox is the identity).
  BlockProx prox = [](const Vector& u, Index, double, Vector& out) { out = u; };
  Value h = [](const Vector&) { return 0.0; };
  Gradient grad_h = [](const Vector& x, Vector& v) { v.setZero(x.size()); };

  double f_value(const Vector& x) const override { return f(x); }
  void f_gradient(const Vector& x, Vector& out) const override { grad_f(x, out); }
  double g_block_value(const Vector& x_block, Index block) const override {
    return g_block(x_block, block);
  }
  void block_prox(const Vector& u, Index block, double t, Vector& out) const override {
    prox(u, block, t, out);
  }
  double h_value(const Vector& x) const override { return h(x); }
  void h_subgradient(const Vector& x, Vector& v) const override { grad_h(x, v); }
  bool quadratic_envelope_f() const override { return envelope; }
  bool envelope = false;
};

// Brute-force maximization of the stationarity maximand over a grid; the
// independent oracle the closed-form gap evaluation is checked against.
// maximand(x) = <w, y - x> + g(y) - g(x) - (L/2)(x - y)^2 in one dimension.
inline double grid_gap_1d(const std::function<double(double)>& maximand, double lo, double hi,
                          double step) {
  double best = -std::numeric_limits<double>::infinity();
  const long count = static_cast<long>((hi - lo) / step);
  for (long k = 0; k <= count; ++k) best = std::max(best, maximand(lo + step * static_cast<double>(k)));
  return best;
}

// Coarse-to-fine scalar minimization: a full coarse grid pass over
// [lo, hi] followed by a fine pass around the incumbent. Equivalent to the
// full fine grid for the piecewise-unimodal objectives it is used on.
inline double grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                            double coarse, double fine) {
  double best_x = lo;
  double best_v = f(lo);
  for (double x = lo; x <= hi; x += coarse) {
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  if (f(hi) < best_v) {
    best_v = f(hi);
    best_x = hi;
  }
  const double flo = std::max(lo, best_x - 2.0 * coarse);
  const double fhi = std::min(hi, best_x + 2.0 * coarse);
  for (double x = flo; x <= fhi; x += fine) {
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

// Central finite differences.
inline void numeric_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                             double step, Vector& grad) {
  grad.resize(x.size());
  Vector probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + step;
    const double up = f(probe);
    probe[j] = x[j] - step;
    const double down = f(probe);
    probe[j] = x[j];
    grad[j] = (up - down) / (2.0 * step);
  }
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, long intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double sum = f(lo) + f(hi);
  for (long k = 1; k < intervals; ++k)
    sum += f(lo + h * static_cast<double>(k)) * (k % 2 == 0 ? 2.0 : 4.0);
  return sum * h / 3.0;
}

// Truncated-normal mean by numerical integration of the one-sided density.
inline double truncated_mean_oracle(double z, double sigma, double sign) {
  const auto density = [&](double r) {
    const double t = (r - z) / sigma;
    return std::exp(-0.5 * t * t);
  };
  const double lo = sign > 0.0 ? 0.0 : std::min(0.0, z) - 12.0 * sigma;
  const double hi = sign > 0.0 ? std::max(0.0, z) + 12.0 * sigma : 0.0;
  const double mass = simpson(density, lo, hi, 200000);
  const double first = simpson([&](double r) { return r * density(r); }, lo, hi, 200000);
  return first / mass;
}

}  // namespace bcdc::testing
