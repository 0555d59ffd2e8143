#include "abcd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string to_string(SolveMode mode) {
  return mode == SolveMode::kConsistent ? "consistent" : "least-squares";
}

SolveMode parse_mode(std::string_view text) {
  if (text == "consistent") return SolveMode::kConsistent;
  if (text == "least-squares") return SolveMode::kLeastSquares;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

Pipeline Pipeline::prepare(const SparseMatrix& a, SolveMode mode, const SolverOptions& options) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("pipeline needs a nonempty matrix");
  Pipeline p;
  p.mode_ = mode;
  p.options_ = options;
  p.a_ = a;

  auto start = Clock::now();
  if (mode == SolveMode::kConsistent) {
    p.levels_ = cuthill_mckee(build_bipartite(a));
    auto ordering = derive_permutations(p.levels_, a.rows(), a.cols());
    p.row_perm_ = std::move(ordering.rows);
    p.col_perm_ = std::move(ordering.cols);
    p.blocks_ = std::move(ordering.blocks);
    p.reordered_ = permute(a, p.row_perm_, p.col_perm_);
    p.timings_.reorder = seconds_since(start);

    start = Clock::now();
    p.augmented_ = augment_consistent(p.reordered_, p.blocks_);
  } else {
    auto ordering = reorder_augmented(build_augmented_adjacency(a), a.rows());
    p.levels_ = std::move(ordering.levels);
    p.row_perm_ = ordering.perm;
    p.col_perm_ = std::move(ordering.perm);
    p.blocks_ = std::move(ordering.blocks);
    p.reordered_ = std::move(ordering.reordered);
    p.timings_.reorder = seconds_since(start);

    start = Clock::now();
    p.augmented_ = augment_tridiagonal(p.reordered_, group_tridiagonal_blocks(p.reordered_, p.blocks_));
  }
  p.timings_.augment = seconds_since(start);
  return p;
}

Pipeline Pipeline::build(const SparseMatrix& a, SolveMode mode, const SolverOptions& options) {
  Pipeline p = prepare(a, mode, options);
  try {
    p.solver_.emplace(p.augmented_, options);
  } catch (const SingularSchur& e) {
    throw SingularSchur(to_string(mode) + " pipeline: " + e.what(), e.condition_estimate());
  }
  return p;
}

const ConsistentSolver& Pipeline::solver() const {
  if (!solver_) throw std::logic_error("pipeline was prepared without a factorization");
  return *solver_;
}

SolveReport Pipeline::solve(const Vector& b) const {
  if (b.size() != a_.rows()) throw DimensionError("rhs length does not match the number of rows");

  const auto& solver = this->solver();
  SolveReport report;
  if (mode_ == SolveMode::kConsistent) {
    const auto embedded = solver.solve(row_perm_.apply(b));
    report = embedded;
    report.x = col_perm_.unapply(embedded.x);
  } else {
    Vector rhs = Vector::Zero(a_.rows() + a_.cols());
    rhs.head(a_.rows()) = b;
    const auto embedded = solver.solve(row_perm_.apply(rhs));
    report = embedded;
    const Vector z = col_perm_.unapply(embedded.x);
    report.r = z.head(a_.rows());
    report.x = z.tail(a_.cols());
  }

  const Vector residual = b - spmv(a_, report.x);
  report.residual_norm = residual.norm();
  report.normal_residual = spmv_t(a_, residual).norm();
  if (mode_ == SolveMode::kConsistent) {
    const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
    report.consistency_warning = report.residual_norm > options_.consistency_tolerance * scale;
  } else {
    report.residual_mismatch = (report.r - residual).norm();
  }
  report.timings.reorder = timings_.reorder;
  report.timings.augment = timings_.augment;
  return report;
}

Vector Pipeline::project_rhs(const Vector& rhs) const {
  if (rhs.size() != augmented().rows()) throw DimensionError("project_rhs: length does not match Abar");
  const Vector permuted = row_perm_.apply(rhs);
  const auto projected = project_onto_range(solver().factorization(),
                                            BlockVector(permuted, augmented().row_offsets), options_.threads);
  return row_perm_.unapply(projected);
}

SolveReport solve(const SparseMatrix& a, const Vector& b, SolveMode mode, const SolverOptions& options) {
  return Pipeline::build(a, mode, options).solve(b);
}

}  // namespace abcd
