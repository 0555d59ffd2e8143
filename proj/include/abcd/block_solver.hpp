#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>

#include "abcd/augment.hpp"
#include "abcd/sparse.hpp"

namespace abcd {

struct SolverOptions {
  /// 0: ABCD_THREADS or all hardware threads.
  unsigned threads = 0;
  /// A consistent solve warns when ||Ax - b|| > consistency_tolerance * ||b||.
  double consistency_tolerance = 1e-8;
  /// SingularSchur is raised above this condition estimate of S.
  double schur_condition_limit = 1e12;
};

/// Thin, rank-truncated SVD of one row block Abar_i restricted to the columns
/// where the block has nonzeros.
struct BlockFactor {
  Index row_begin = 0;
  Index row_end = 0;
  /// Column support of the block, ascending, in [0, n + q).
  std::vector<Index> columns;
  DenseMatrix u;      // rows x rank
  Vector sigma;       // rank, nonincreasing, positive
  DenseMatrix v;      // columns.size() x rank
  /// Every singular value before truncation.
  Vector singular_values;

  Index rows() const { return row_end - row_begin; }
  Index rank() const { return sigma.size(); }
};

/// Per-block SVDs of Abar. With mutually orthogonal row blocks,
/// Abar^+ b = sum_i Abar_i^+ b^i and P = Abar^+ Abar = sum_i V_i V_i^T.
class BlockFactorization {
 public:
  BlockFactorization() = default;
  BlockFactorization(Index rows, Index cols, std::vector<Index> row_offsets, std::vector<BlockFactor> blocks);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index block_count() const { return static_cast<Index>(blocks_.size()); }
  const BlockFactor& block(Index i) const { return blocks_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& row_offsets() const { return row_offsets_; }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<BlockFactor> blocks_;
};

/// Singular values at or below max(r_i, n + q) * eps * sigma_max are dropped.
BlockFactorization factor_blocks(const AugmentedSystem& system, unsigned threads = 0);

/// Abar^+ b, summing the independent block contributions in block order.
Vector apply_pinv(const BlockFactorization& f, const BlockVector& b, unsigned threads = 0);
Vector apply_pinv(const BlockFactorization& f, const Vector& b, unsigned threads = 0);

/// P v with P the orthogonal projector onto R(Abar^T).
Vector apply_projector(const BlockFactorization& f, const Vector& v, unsigned threads = 0);

/// Orthogonal projection of z in R^m onto R(Abar), computed block by block as
/// U_i U_i^T z^i. Blocks write disjoint segments.
Vector project_onto_range(const BlockFactorization& f, const BlockVector& z, unsigned threads = 0);
Vector project_onto_range(const AugmentedSystem& system, const BlockVector& z, unsigned threads = 0);

/// S = Y (I - P) Y^T with Y = [0 I_q], plus its factorization.
class SchurMatrix {
 public:
  SchurMatrix() = default;
  SchurMatrix(DenseMatrix s, double condition_limit);

  Index size() const { return s_.rows(); }
  const DenseMatrix& matrix() const { return s_; }
  /// 1-norm condition estimate (1 / rcond) from the factorization used.
  double condition_estimate() const { return condition_; }
  bool cholesky() const { return llt_.has_value(); }
  Vector solve(const Vector& rhs) const;

 private:
  DenseMatrix s_;
  double condition_ = 1.0;
  std::optional<Eigen::LLT<DenseMatrix>> llt_;
  std::optional<Eigen::LDLT<DenseMatrix>> ldlt_;
};

/// Column j of S is the tail of (I - P) e_{n+j}; the q columns are assembled
/// independently, then S is symmetrized and factorized (Cholesky first,
/// LDL^T as a fallback). Throws SingularSchur when S is numerically singular.
SchurMatrix assemble_S(const BlockFactorization& f, Index q, const SolverOptions& options = {});

/// f = -Y Abar^+ b
Vector compute_f(const BlockFactorization& f, const Vector& b, Index q, unsigned threads = 0);

struct PhaseTimings {
  double reorder = 0.0;
  double augment = 0.0;
  double factor = 0.0;
  double schur = 0.0;
  double solve = 0.0;
};

struct SolveReport {
  Vector x;
  /// Least-squares residual r = b - A x; empty for consistent solves.
  Vector r;
  double y_norm = 0.0;
  double residual_norm = 0.0;
  double normal_residual = 0.0;
  /// ||r - (b - A x)||, least-squares mode only.
  double residual_mismatch = 0.0;
  double orthogonality_error = 0.0;
  double s_condition_estimate = 1.0;
  Index p = 0;
  Index q = 0;
  bool consistency_warning = false;
  PhaseTimings timings;
};

/// Block pseudoinverse machinery for one augmented system: the minimal-norm
/// solution of [Abar; W] z = [b; f] with W = Y(I - P) and f = -Y Abar^+ b.
class ConsistentSolver {
 public:
  explicit ConsistentSolver(const AugmentedSystem& system, const SolverOptions& options = {});

  const AugmentedSystem& system() const { return system_; }
  const BlockFactorization& factorization() const { return factors_; }
  const SchurMatrix& schur() const { return schur_; }
  Index n() const { return system_.n; }
  Index q() const { return system_.q; }
  double orthogonality_error() const { return orthogonality_error_; }

  /// z = Abar^+ b + (I - P) Y^T S^{-1} f, length n + q.
  Vector solve_full(const Vector& b) const;
  SolveReport solve(const Vector& b) const;

  /// [Abar; W] v
  Vector apply_stacked(const Vector& v) const;
  /// [Abar^+  W^+] [b; g] with W^+ = W^T S^{-1}.
  Vector apply_stacked_pinv(const Vector& bg) const;
  /// W v = Y (I - P) v
  Vector apply_w(const Vector& v) const;
  /// W^T g = (I - P) Y^T g
  Vector apply_w_transpose(const Vector& g) const;

 private:
  AugmentedSystem system_;
  SolverOptions options_;
  BlockFactorization factors_;
  SchurMatrix schur_;
  double orthogonality_error_ = 0.0;
  double factor_seconds_ = 0.0;
  double schur_seconds_ = 0.0;
};

SolveReport solve_consistent(const AugmentedSystem& system, const Vector& b, const SolverOptions& options = {});

}  // namespace abcd
