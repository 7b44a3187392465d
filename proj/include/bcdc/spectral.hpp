#pragma once

#include "bcdc/types.hpp"

namespace bcdc {

// Largest singular value of A estimated by power iteration on A^T A (for
// symmetric A this equals the spectral norm and iterating on A^2 avoids the
// sign-flip stall of plain power iteration on indefinite matrices). Stops
// after `iterations` rounds or when the estimate's relative change drops
// below `tol`, whichever happens first. The start vector is fixed, so the
// estimate is deterministic.
double spectral_norm_estimate(const SparseMatrix& a, Index iterations = 100, double tol = 1e-9);

double frobenius_norm(const SparseMatrix& a);

}  // namespace bcdc
