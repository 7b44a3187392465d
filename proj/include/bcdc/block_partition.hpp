#pragma once

#include <vector>

#include "bcdc/types.hpp"

namespace bcdc {

// Non-overlapping partition of the coordinates {0,...,m-1} into n blocks.
// Blocks are index lists; iterates stay dense and blocks are read through
// gather/scatter views, never materialized as padded vectors.
class BlockPartition {
 public:
  // Validates: blocks nonempty, pairwise disjoint, union = {0,...,m-1}.
  explicit BlockPartition(std::vector<std::vector<Index>> blocks);

  // Contiguous blocks of `block_size` coordinates (last one may be smaller).
  static BlockPartition contiguous(Index dimension, Index block_size);
  // One block covering everything.
  static BlockPartition single(Index dimension);
  // One block per coordinate.
  static BlockPartition coordinates(Index dimension);

  Index dimension() const { return dimension_; }
  Index count() const { return static_cast<Index>(blocks_.size()); }
  const std::vector<Index>& block(Index i) const { return blocks_[static_cast<size_t>(i)]; }
  Index block_size(Index i) const { return static_cast<Index>(blocks_[static_cast<size_t>(i)].size()); }

  void gather(const Vector& x, Index block, Vector& out) const;
  void scatter(const Vector& values, Index block, Vector& x) const;

 private:
  std::vector<std::vector<Index>> blocks_;
  Index dimension_ = 0;
};

}  // namespace bcdc
