#include "bcdc/block_partition.hpp"

#include <algorithm>

namespace bcdc {

BlockPartition::BlockPartition(std::vector<std::vector<Index>> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ConfigError("partition needs at least one block");
  Index total = 0;
  for (const auto& b : blocks_) {
    if (b.empty()) throw ConfigError("empty block in partition");
    total += static_cast<Index>(b.size());
  }
  std::vector<char> seen(static_cast<size_t>(total), 0);
  for (const auto& b : blocks_) {
    for (Index idx : b) {
      if (idx < 0 || idx >= total) throw ConfigError("block index out of range");
      if (seen[static_cast<size_t>(idx)]) throw ConfigError("blocks overlap");
      seen[static_cast<size_t>(idx)] = 1;
    }
  }
  // total == m and every index seen exactly once => blocks cover {0,...,m-1}.
  dimension_ = total;
}

BlockPartition BlockPartition::contiguous(Index dimension, Index block_size) {
  if (dimension < 1) throw ConfigError("dimension must be positive");
  if (block_size < 1) throw ConfigError("block size must be positive");
  std::vector<std::vector<Index>> blocks;
  for (Index start = 0; start < dimension; start += block_size) {
    const Index end = std::min(dimension, start + block_size);
    std::vector<Index> b(static_cast<size_t>(end - start));
    for (Index j = start; j < end; ++j) b[static_cast<size_t>(j - start)] = j;
    blocks.push_back(std::move(b));
  }
  return BlockPartition(std::move(blocks));
}

BlockPartition BlockPartition::single(Index dimension) { return contiguous(dimension, dimension); }

BlockPartition BlockPartition::coordinates(Index dimension) { return contiguous(dimension, 1); }

void BlockPartition::gather(const Vector& x, Index block, Vector& out) const {
  const auto& idx = blocks_[static_cast<size_t>(block)];
  out.resize(static_cast<Index>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) out[static_cast<Index>(j)] = x[idx[j]];
}

void BlockPartition::scatter(const Vector& values, Index block, Vector& x) const {
  const auto& idx = blocks_[static_cast<size_t>(block)];
  for (size_t j = 0; j < idx.size(); ++j) x[idx[j]] = values[static_cast<Index>(j)];
}

}  // namespace bcdc
