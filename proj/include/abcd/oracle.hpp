#pragma once

#include <string>

#include "abcd/augment.hpp"
#include "abcd/sparse.hpp"

/// Dense reference computations, independent of the block machinery, used to
/// check it: SVD pseudoinverse and rank, rank identities, and an empirical
/// probe of the invertibility of S on augmented systems.
namespace abcd::oracle {

/// Negative tolerance selects max(rows, cols) * eps * sigma_max.
inline constexpr double kDefaultTolerance = -1.0;

struct RankReport {
  Index rank = 0;
  Vector singular_values;
  double tolerance = 0.0;
};

RankReport numerical_rank(const DenseMatrix& m, double tolerance = kDefaultTolerance);

/// SVD-based Moore-Penrose pseudoinverse.
DenseMatrix dense_pinv(const DenseMatrix& m, double tolerance = kDefaultTolerance);

/// Orthonormal basis of R(m) / N(m) as matrix columns.
DenseMatrix range_basis(const DenseMatrix& m, double tolerance = kDefaultTolerance);
DenseMatrix null_space_basis(const DenseMatrix& m, double tolerance = kDefaultTolerance);

/// dim(R(u) ∩ R(v)) = dim R(u) + dim R(v) - rank([u v]).
Index intersection_dimension(const DenseMatrix& u, const DenseMatrix& v, double tolerance = kDefaultTolerance);

struct IdentityCheck {
  Index lhs = 0;
  Index rhs = 0;
  /// Subspace intersection term, product identity only.
  Index intersection = 0;
  bool holds = false;
};

/// Tolerance used by the rank identities, relative to max(1, sigma_max).
inline constexpr double kIdentityTolerance = 1e-8;

/// rank([E F]) == rank(E) + rank((I - E E^+) F)
IdentityCheck rank_join_identity(const DenseMatrix& e, const DenseMatrix& f, double tolerance = kIdentityTolerance);
/// rank(E F) == rank(E) - dim(R(E^T) ∩ N(F^T))
IdentityCheck rank_product_identity(const DenseMatrix& e, const DenseMatrix& f,
                                    double tolerance = kIdentityTolerance);

/// Observation of the invertibility of S = Y (I - P) Y^T on one instance.
struct ProbeReport {
  Index m = 0;
  Index q = 0;
  Index rank_abar = 0;
  /// dim(R(Y^T) ∩ R(Abar^T))
  Index intersection_dim = 0;
  Index w_rank = 0;
  Index s_rank = 0;
  /// rank(S) == rank(W) == q - intersection_dim
  bool chain_holds = false;
  /// 1 <= rank(Abar) < m
  bool rank_deficient = false;
  bool s_singular = false;
  /// S singular although Abar has full row rank.
  bool converse_candidate = false;
  std::string observation;
};

inline constexpr Index kDefaultDenseCap = 4'000'000;
inline constexpr double kProbeTolerance = 1e-10;

/// Densifies Abar (throws CapacityError above `dense_cap` entries) and reports
/// the ranks involved. Makes no claim beyond this instance.
ProbeReport conjecture_probe(const AugmentedSystem& system, Index dense_cap = kDefaultDenseCap,
                             double tolerance = kProbeTolerance);

}  // namespace abcd::oracle
