#pragma once

#include <vector>

#include "abcd/reorder.hpp"
#include "abcd/sparse.hpp"

namespace abcd {

enum class AugmentMode { kConsistent, kTridiagonal };

/// Abar = [A Gamma] with mutually orthogonal row blocks.
struct AugmentedSystem {
  SparseMatrix abar;
  /// Columns of the original (reordered) matrix; abar has n + q columns.
  Index n = 0;
  Index q = 0;
  /// Row-block boundaries of abar (p + 1 entries).
  std::vector<Index> row_offsets;
  /// +1 / -1 multiplier applied to each row block's copy in Gamma.
  std::vector<int> signs;
  AugmentMode mode = AugmentMode::kConsistent;
  /// Bidiagonal layout of the un-augmented part (coarse groups in
  /// tridiagonal mode).
  BlockPartition partition;

  Index rows() const { return abar.rows(); }
  Index cols() const { return abar.cols(); }
  Index row_blocks() const { return static_cast<Index>(row_offsets.size()) - 1; }
  SparseMatrix row_block(Index i) const;
};

/// Gamma = D * A^R with D = diag(I, -I, I, ...) over the row blocks (q = n).
/// Requires a bidiagonal partition that A^R conforms to.
AugmentedSystem augment_consistent(const SparseMatrix& ar, const BlockPartition& blocks);

/// Coarse grouping of a block tridiagonal level partition.
///
/// Row group g holds fine levels {2g, 2g+1}; column group 0 is fine level 0 and
/// column group g+1 holds fine levels {2g+1, 2g+2}. Row group g then touches
/// only column groups g (B_{g,g}) and g+1 (B_{g,g+1}), i.e. the result uses the
/// bidiagonal BlockPartition layout. An odd trailing level is a singleton group.
struct GroupedPartition {
  BlockPartition coarse;
  /// Coarse row group of every fine level.
  std::vector<Index> group_of_level;
};

GroupedPartition group_tridiagonal_blocks(const SparseMatrix& ahat, const BlockPartition& blocks);

/// Gamma copies every column group except group 0: row group k contributes
/// (-1)^k (B_{k,k}, B_{k,k+1}) into Gamma, except group 0 which contributes only
/// B_{0,1}, so consecutive row groups overlap in exactly one Gamma group with
/// opposite signs. q = (columns of Ahat) - (width of column group 0).
AugmentedSystem augment_tridiagonal(const SparseMatrix& ahat, const GroupedPartition& grouped);

/// max_{i != j} max|Abar_i Abar_j^T|, 0 for a single block.
double orthogonality_error(const AugmentedSystem& system);
/// max_i ||Abar_i||_F
double max_block_frobenius(const AugmentedSystem& system);

}  // namespace abcd
