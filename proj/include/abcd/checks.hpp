#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abcd/oracle.hpp"
#include "abcd/sparse.hpp"

/// Randomized property suites run by `abcd check` and the acceptance driver.
namespace abcd::verify {

struct CheckOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
  /// Relative tolerance of the Penrose, Schur and projector checks.
  double algebra_tolerance = 1e-10;
  /// Rank tolerance of the rank identities, relative to max(1, sigma_max).
  double identity_tolerance = oracle::kIdentityTolerance;
  double probe_tolerance = oracle::kProbeTolerance;
  Index dense_cap = oracle::kDefaultDenseCap;
};

struct SuiteResult {
  std::string name;
  Index cases = 0;
  Index failures = 0;
  /// Largest error measured, when the suite measures one.
  double worst = 0.0;
  std::vector<std::string> observations;

  bool passed() const { return cases > 0 && failures == 0; }
};

/// The four Penrose equalities for dense_pinv on matrices up to 8x8.
SuiteResult penrose_suite(const CheckOptions& options, Index cases = 100);

/// rank([E F]) == rank(E) + rank((I - E E^+) F) on small integer matrices.
SuiteResult rank_join_suite(const CheckOptions& options, Index cases = 200);
/// rank(E F) == rank(E) - dim(R(E^T) ∩ N(F^T)) on small integer matrices.
SuiteResult rank_product_suite(const CheckOptions& options, Index cases = 200);

/// Penrose equalities for [Abar; W] against [Abar^+ W^+] as built by the
/// block solver, on pipelines of both modes.
SuiteResult stacked_penrose_suite(const CheckOptions& options, Index cases = 20);
/// W W^T = B B^T + S^2 = S with W = [B S].
SuiteResult schur_identity_suite(const CheckOptions& options, Index cases = 20);
/// P = P^2 = P^T and P = Abar^+ Abar against the dense oracle.
SuiteResult projector_suite(const CheckOptions& options, Index cases = 20);

/// Full-row-rank instances must give a positive definite S.
SuiteResult full_rank_schur_suite(const CheckOptions& options, Index cases = 50);

/// conjecture_probe on augmented systems whose Abar is rank deficient. A case
/// fails only if the probe errors or the rank chain
/// rank(S) == rank(W) == q - dim(R(Y^T) ∩ R(Abar^T)) breaks; observations
/// about S are recorded either way.
SuiteResult probe_suite(const CheckOptions& options, Index cases = 20);

std::vector<SuiteResult> run_all(const CheckOptions& options);

}  // namespace abcd::verify
