#pragma once

#include "bcdc/dc_problem.hpp"

namespace bcdc {

// Result of one stationarity-gap evaluation. The gap is zero (up to the
// numerical slack) exactly at first-order stationary points, which is also
// exactly when y is a fixed point of the prox mapping; `prox_residual` is
// the distance ||y - x*|| to that fixed point.
struct GapReport {
  double gap_value = 0.0;
  Vector maximizer;       // the x* attaining the max
  double prox_residual = 0.0;
};

// phi(x) = f(x) + g(x) - h(x), evaluated through the decomposition.
// Throws DomainError when x is infeasible.
double objective(const DcProblem& problem, const Vector& x);

// Stationarity gap at y with subgradient v of h at y:
//
//   gap = max_{x in M} <grad f(y) - v, y - x> + g(y) - g(x) - (L/2)||x - y||^2.
//
// The maximizer has the closed form x* = prox_{(1/L)g + I_M}(y - (grad f(y) - v)/L),
// computed block by block (the prox is separable), so the evaluation is exact
// and costs one gradient plus one prox pass.
GapReport evaluate_gap(const DcProblem& problem, const Vector& y, const Vector& v);

// The gap maximand restricted to one block (all other coordinates pinned to
// y). By separability of g, M and the quadratic, these contributions sum to
// the full gap. `v_block` is the block slice of a subgradient of h at y.
double block_gap(const DcProblem& problem, const Vector& y, const Vector& v_block, Index block);
// Convenience overload taking the full subgradient.
double block_gap_full(const DcProblem& problem, const Vector& y, const Vector& v, Index block);

// ||y - prox_{(1/L)g+I_M}(y - (grad f(y) - v)/L)||; zero iff the gap is zero.
double prox_fixed_point_residual(const DcProblem& problem, const Vector& y, const Vector& v);

}  // namespace bcdc
