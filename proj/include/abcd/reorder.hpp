#pragma once

#include <span>
#include <vector>

#include "abcd/sparse.hpp"

namespace abcd {

enum class NodeKind { kRow, kColumn };

/// Bipartite graph of an m x n matrix. Row i is node i, column j is node m + j;
/// row i and column j are adjacent iff A(i, j) != 0.
class BipartiteGraph {
 public:
  /// Neighbor lists are sorted; throws StructureError on row-row or
  /// column-column edges or on an asymmetric adjacency.
  BipartiteGraph(Index m, Index n, std::vector<std::vector<Index>> adjacency);

  Index rows() const noexcept { return m_; }
  Index cols() const noexcept { return n_; }
  Index nodes() const noexcept { return m_ + n_; }

  NodeKind kind(Index node) const noexcept { return node < m_ ? NodeKind::kRow : NodeKind::kColumn; }
  Index degree(Index node) const { return static_cast<Index>(adj_[static_cast<std::size_t>(node)].size()); }
  std::span<const Index> neighbors(Index node) const { return adj_[static_cast<std::size_t>(node)]; }

 private:
  Index m_ = 0;
  Index n_ = 0;
  std::vector<std::vector<Index>> adj_;
};

BipartiteGraph build_bipartite(const SparseMatrix& a);

struct Level {
  NodeKind kind = NodeKind::kRow;
  Index component = 0;
  /// Node ids in the order Cuthill-McKee labeled them.
  std::vector<Index> nodes;
};

/// Cuthill-McKee output: the level sets of every connected component,
/// concatenated in processing order.
struct LevelStructure {
  Index rows = 0;
  Index cols = 0;
  std::vector<Level> levels;
  /// Component id of each node.
  std::vector<Index> component_of;

  Index components() const;
  std::vector<Index> sizes() const;
  /// Concatenation of all levels: the new labeling of the nodes.
  std::vector<Index> labeling() const;
};

/// Breadth-first Cuthill-McKee on every connected component.
///
/// Components are processed in order of their smallest node id; isolated nodes
/// come last. The start node of a component is its minimum-degree node and the
/// unlabeled neighbors of each node are labeled in increasing degree order.
/// Ties prefer row nodes, then the lowest id (row ids precede column ids, so
/// the key is simply (degree, node id)).
LevelStructure cuthill_mckee(const BipartiteGraph& g);

/// Levels alternate between row and column kind inside every component.
bool levels_alternate(const LevelStructure& levels);
/// Every node appears in exactly one level, with m row nodes and n column nodes.
bool levels_cover(const LevelStructure& levels);

enum class BlockStructure { kBidiagonal, kTridiagonal };

/// Row/column block boundaries of a reordered matrix.
///
/// kBidiagonal: p row blocks and p + 1 column blocks (col_offsets has p + 2
/// entries, blocks may be empty). Row block k may only touch column blocks k
/// and k + 1; column block k + 1 is its diagonal block and column block k its
/// subdiagonal one, column block 0 being a leading block that only row block 0
/// reaches. This is the lower block bidiagonal form with the leading block made
/// explicit, which also covers components whose first level is a column level.
///
/// kTridiagonal: one symmetric partition per level (row_offsets ==
/// col_offsets); diagonal_kinds[k] tells whether diagonal block k is I (row
/// level) or O (column level).
struct BlockPartition {
  BlockStructure structure = BlockStructure::kBidiagonal;
  std::vector<Index> row_offsets;
  std::vector<Index> col_offsets;
  std::vector<NodeKind> diagonal_kinds;

  Index row_blocks() const { return static_cast<Index>(row_offsets.size()) - 1; }
  Index col_blocks() const { return static_cast<Index>(col_offsets.size()) - 1; }
};

struct RowColumnOrdering {
  Permutation rows;
  Permutation cols;
  BlockPartition blocks;
};

/// Orders rows by the concatenated row levels and columns by the concatenated
/// column levels, so that permute(A, rows, cols) is block bidiagonal.
RowColumnOrdering derive_permutations(const LevelStructure& levels, Index m, Index n);

/// [[I_m, A], [A^T, 0]].
SparseMatrix build_augmented_adjacency(const SparseMatrix& a);

struct SymmetricOrdering {
  Permutation perm;
  /// permute(H, perm, perm)
  SparseMatrix reordered;
  BlockPartition blocks;
  LevelStructure levels;
};

/// Cuthill-McKee on the graph of a symmetric H = [[I_m, A], [A^T, 0]] (diagonal
/// entries are ignored as self-loops) followed by the symmetric permutation.
/// Throws StructureError if the result is not block tridiagonal with I/O
/// diagonal blocks.
SymmetricOrdering reorder_augmented(const SparseMatrix& h, Index m);

bool is_block_bidiagonal(const SparseMatrix& a, const BlockPartition& blocks);
bool is_block_tridiagonal(const SparseMatrix& a, const BlockPartition& blocks);

/// Maps an index to the block containing it.
Index block_of(std::span<const Index> offsets, Index i);

}  // namespace abcd
