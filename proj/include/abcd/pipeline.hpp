#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "abcd/augment.hpp"
#include "abcd/block_solver.hpp"
#include "abcd/reorder.hpp"
#include "abcd/sparse.hpp"

namespace abcd {

enum class SolveMode { kConsistent, kLeastSquares };

std::string to_string(SolveMode mode);
/// Accepts "consistent" and "least-squares"; throws std::invalid_argument.
SolveMode parse_mode(std::string_view text);

/// Reorder, augment and factor a matrix once, then solve for any number of
/// right-hand sides.
///
/// Consistent mode works on A^R = P A Q (rows and columns permuted by the
/// Cuthill-McKee levels of the bipartite graph). Least-squares mode works on
/// the symmetric reordering of H = [[I, A], [A^T, 0]], whose solution [r; x]
/// carries the least-squares residual and solution.
class Pipeline {
 public:
  static Pipeline build(const SparseMatrix& a, SolveMode mode, const SolverOptions& options = {});
  /// Reorders and augments without factoring; solver() and solve() are then
  /// unavailable. Works for inputs whose S is singular.
  static Pipeline prepare(const SparseMatrix& a, SolveMode mode, const SolverOptions& options = {});

  SolveMode mode() const { return mode_; }
  Index rows() const { return a_.rows(); }
  Index cols() const { return a_.cols(); }
  const SparseMatrix& matrix() const { return a_; }

  const LevelStructure& levels() const { return levels_; }
  /// Row permutation of the system that gets augmented (P, or P-hat).
  const Permutation& row_permutation() const { return row_perm_; }
  /// Column permutation (Q, or Q-hat = P-hat^T in least-squares mode).
  const Permutation& col_permutation() const { return col_perm_; }
  /// The reordered matrix A^R or Ahat^R.
  const SparseMatrix& reordered() const { return reordered_; }
  /// Level partition of the reordered matrix (bidiagonal or tridiagonal).
  const BlockPartition& blocks() const { return blocks_; }
  const AugmentedSystem& augmented() const { return augmented_; }
  bool factored() const { return solver_.has_value(); }
  /// Throws std::logic_error on a prepared-only pipeline.
  const ConsistentSolver& solver() const;
  const PhaseTimings& setup_timings() const { return timings_; }

  /// Throws DimensionError if b does not have one entry per row of A.
  SolveReport solve(const Vector& b) const;

  /// Orthogonal projection onto R(Abar) of a right-hand side of the embedded
  /// system, given and returned in original order. In consistent mode the
  /// input has length m; in least-squares mode it has length m + n (the
  /// ordering of H). This is the projection for the augmented matrix Abar,
  /// not the projection b_A onto R(A).
  Vector project_rhs(const Vector& rhs) const;

 private:
  Pipeline() = default;

  SolveMode mode_ = SolveMode::kConsistent;
  SolverOptions options_;
  SparseMatrix a_;
  LevelStructure levels_;
  Permutation row_perm_;
  Permutation col_perm_;
  SparseMatrix reordered_;
  BlockPartition blocks_;
  AugmentedSystem augmented_;
  std::optional<ConsistentSolver> solver_;
  PhaseTimings timings_;
};

SolveReport solve(const SparseMatrix& a, const Vector& b, SolveMode mode, const SolverOptions& options = {});

}  // namespace abcd
