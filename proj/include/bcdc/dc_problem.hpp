#pragma once

#include <memory>

#include "bcdc/block_partition.hpp"
#include "bcdc/types.hpp"

namespace bcdc {

class DcProblem;

// Per-run engine that solves the block subproblem
//
//   argmin_{z in M_i}  f(x | block i <- z) + g_i(z) - <v_i, z>
//
// globally. One stepper belongs to one solver run; it may keep caches keyed
// to the iterate (committed() is called after each accepted update so caches
// can follow the iterate incrementally).
class BlockStepper {
 public:
  virtual ~BlockStepper() = default;
  virtual void reset(const Vector& x0) { (void)x0; }
  virtual void solve(const Vector& x, Index block, const Vector& v_block, Vector& z_out) = 0;
  virtual void committed(const Vector& x, Index block, const Vector& old_block) {
    (void)x;
    (void)block;
    (void)old_block;
  }
};

// Oracle bundle for one DC program
//
//   minimize  phi(x) = f(x) + g(x) - h(x)  over  x in M,
//
// with f smooth (constant `smoothness`), g and M separable across the blocks
// of `partition`, and h convex with a subgradient oracle. Instances are
// immutable after construction and safe to share across concurrent runs; all
// mutable state lives in solver-owned steppers.
class DcProblem {
 public:
  virtual ~DcProblem() = default;

  const BlockPartition& partition() const { return partition_; }
  Index dimension() const { return partition_.dimension(); }
  double smoothness() const { return smoothness_; }

  // --- smooth term f ---------------------------------------------------
  virtual double f_value(const Vector& x) const = 0;
  virtual void f_gradient(const Vector& x, Vector& grad) const = 0;
  // Gradient restricted to one block. Default slices the full gradient.
  virtual void f_block_gradient(const Vector& x, Index block, Vector& out) const;

  // --- separable term g -------------------------------------------------
  // g_i evaluated on the block's own coordinates. Default g == 0.
  virtual double g_block_value(const Vector& x_block, Index block) const;
  double g_value(const Vector& x) const;

  // prox_{t g_i + I_{M_i}}(u): scaled prox of g_i with the block's feasible
  // set folded in. t == 0 must degrade to the plain projection onto M_i.
  virtual void block_prox(const Vector& u_block, Index block, double t, Vector& out) const = 0;

  // --- concave-part generator h ------------------------------------------
  virtual double h_value(const Vector& x) const = 0;
  // One element of the subdifferential of h at x.
  virtual void h_subgradient(const Vector& x, Vector& v) const = 0;
  // Block slice of a subgradient. Default computes the full vector and
  // slices; separable h oracles override with block-local work.
  virtual void h_block_subgradient(const Vector& x, Index block, Vector& out) const;

  // --- feasible set -----------------------------------------------------
  virtual void project_block(Vector& x_block, Index block) const;
  virtual bool block_feasible(const Vector& x_block, Index block, double tol) const;
  bool feasible(const Vector& x, double tol = 1e-9) const;
  void project(Vector& x) const;

  // --- subproblems -------------------------------------------------------
  // True when f(x) = (L/2)||x||^2, in which case a single prox-gradient step
  // is the exact block-surrogate minimizer and the default stepper applies.
  virtual bool quadratic_envelope_f() const { return false; }
  virtual std::unique_ptr<BlockStepper> make_stepper() const;

  // phi(x_new) where x_new differs from a previous iterate only on `block`
  // (old block values supplied). Default recomputes from scratch; problems
  // with cheap increments override. Solvers refresh against the full value
  // once per epoch to bound drift.
  virtual double objective_after_block_update(const Vector& x_new, double phi_old, Index block,
                                              const Vector& old_block) const;

 protected:
  DcProblem(BlockPartition partition, double smoothness)
      : partition_(std::move(partition)), smoothness_(smoothness) {}

  BlockPartition partition_;
  double smoothness_;
};

namespace detail {

// One block proximal-gradient step at scale 1/L:
//
//   z = prox_{(1/L) g_i + I_{M_i}}( x_i - (grad_i f(x) - v_i)/L ).
//
// This is the RCSD block update, and the exact subproblem minimizer whenever
// f is the L-quadratic envelope. Kept as the single code path shared by the
// RCSD solver and by envelope-decomposition steppers so that the two produce
// bit-identical iterates.
void prox_gradient_block_step(const DcProblem& p, const Vector& x, Index block,
                              const Vector& v_block, Vector& z_out);

}  // namespace detail

// Default stepper: exact for quadratic-envelope f.
class ProxBlockStepper : public BlockStepper {
 public:
  explicit ProxBlockStepper(const DcProblem& p) : problem_(p) {}
  void solve(const Vector& x, Index block, const Vector& v_block, Vector& z_out) override {
    detail::prox_gradient_block_step(problem_, x, block, v_block, z_out);
  }

 private:
  const DcProblem& problem_;
};

}  // namespace bcdc
