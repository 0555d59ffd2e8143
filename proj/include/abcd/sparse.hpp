#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace abcd {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
/// Small dense matrices: q x q Schur blocks, per-block factors and oracles.
using DenseMatrix = Eigen::MatrixXd;

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Immutable real sparse matrix kept in canonical compressed-row form:
/// entries sorted by (row, col), duplicates summed, explicit zeros dropped.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Canonicalizes `entries`. Throws DimensionError for out-of-range indices.
  SparseMatrix(Index nrows, Index ncols, std::vector<Triplet> entries);

  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const DenseMatrix& dense);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nonzeros() const noexcept { return static_cast<Index>(values_.size()); }

  /// Compressed-row view. Row i occupies [row_offsets()[i], row_offsets()[i+1]).
  std::span<const Index> row_offsets() const noexcept { return offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Coordinate view in row-major order.
  std::vector<Triplet> entries() const;

  DenseMatrix to_dense() const;
  double frobenius_norm() const;
  SparseMatrix transpose() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Bijection on {0, ..., size-1}. forward()[i] is the new position of index i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> forward);

  static Permutation identity(Index n);
  /// Builds the permutation that moves old index order[k] to position k.
  static Permutation from_order(std::span<const Index> order);

  Index size() const noexcept { return static_cast<Index>(forward_.size()); }
  Index operator[](Index i) const { return forward_[static_cast<std::size_t>(i)]; }
  std::span<const Index> forward() const noexcept { return forward_; }

  /// order()[k] = old index now at position k.
  std::vector<Index> order() const;
  Permutation inverse() const;
  bool is_identity() const;

  /// y[forward[i]] = x[i]
  Vector apply(const Vector& x) const;
  /// Inverse of apply: x[i] = y[forward[i]]
  Vector unapply(const Vector& y) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> forward_;
};

/// Applies `first`, then `second`.
Permutation compose(const Permutation& first, const Permutation& second);

/// Entry (i, j, v) moves to (rows[i], cols[j], v).
SparseMatrix permute(const SparseMatrix& a, const Permutation& rows, const Permutation& cols);

Vector spmv(const SparseMatrix& a, const Vector& x);
/// A^T x without forming A^T.
Vector spmv_t(const SparseMatrix& a, const Vector& x);

/// [A B]; B's columns are shifted by A.cols().
SparseMatrix horiz_concat(const SparseMatrix& a, const SparseMatrix& b);
/// Rows [from, to) with the column dimension kept.
SparseMatrix extract_row_block(const SparseMatrix& a, Index from, Index to);

/// A vector split into consecutive segments z^1 .. z^p.
class BlockVector {
 public:
  BlockVector(Vector values, std::vector<Index> offsets);

  Index size() const noexcept { return values_.size(); }
  Index blocks() const noexcept { return static_cast<Index>(offsets_.size()) - 1; }
  std::span<const Index> offsets() const noexcept { return offsets_; }
  const Vector& values() const noexcept { return values_; }

  Eigen::VectorBlock<const Vector> segment(Index block) const;

 private:
  Vector values_;
  std::vector<Index> offsets_;
};

}  // namespace abcd
