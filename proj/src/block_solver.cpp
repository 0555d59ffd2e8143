#include "abcd/block_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/SVD>

#include "abcd/errors.hpp"
#include "abcd/parallel.hpp"

namespace abcd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_partition(const BlockFactorization& f, std::span<const Index> offsets) {
  if (!std::equal(offsets.begin(), offsets.end(), f.row_offsets().begin(), f.row_offsets().end())) {
    throw DimensionError("vector partition does not match the row blocks");
  }
}

BlockFactor factor_one(const SparseMatrix& a, Index begin, Index end, Index total_cols) {
  BlockFactor f;
  f.row_begin = begin;
  f.row_end = end;
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  for (Index k = off[begin]; k < off[end]; ++k) f.columns.push_back(col[k]);
  std::sort(f.columns.begin(), f.columns.end());
  f.columns.erase(std::unique(f.columns.begin(), f.columns.end()), f.columns.end());

  const Index rows = end - begin;
  const auto width = static_cast<Index>(f.columns.size());
  DenseMatrix dense = DenseMatrix::Zero(rows, width);
  for (Index i = begin; i < end; ++i) {
    for (Index k = off[i]; k < off[i + 1]; ++k) {
      const auto pos = std::lower_bound(f.columns.begin(), f.columns.end(), col[k]) - f.columns.begin();
      dense(i - begin, pos) = val[k];
    }
  }
  if (!dense.allFinite()) throw Error("non-finite entry");

  if (width == 0) {
    f.u = DenseMatrix::Zero(rows, 0);
    f.v = DenseMatrix::Zero(0, 0);
    return f;
  }
  Eigen::JacobiSVD<DenseMatrix> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error("SVD did not converge");
  f.singular_values = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(rows, total_cols)) *
                        std::numeric_limits<double>::epsilon() * f.singular_values[0];
  Index rank = 0;
  while (rank < f.singular_values.size() && f.singular_values[rank] > cutoff) ++rank;
  f.u = svd.matrixU().leftCols(rank);
  f.sigma = f.singular_values.head(rank);
  f.v = svd.matrixV().leftCols(rank);
  return f;
}

Vector gather(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = v[idx[k]];
  return out;
}

// Sums per-block contributions living on each block's column support.
template <typename Contribution>
Vector sum_over_blocks(const BlockFactorization& f, unsigned threads, Contribution contribution) {
  std::vector<Vector> parts(static_cast<std::size_t>(f.block_count()));
  parallel_for(parts.size(), threads, [&](std::size_t b) {
    parts[b] = contribution(static_cast<Index>(b), f.block(static_cast<Index>(b)));
  });
  Vector out = Vector::Zero(f.cols());
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const auto& cols = f.block(static_cast<Index>(b)).columns;
    for (std::size_t k = 0; k < cols.size(); ++k) out[cols[k]] += parts[b][static_cast<Index>(k)];
  }
  return out;
}

}  // namespace

BlockFactorization::BlockFactorization(Index rows, Index cols, std::vector<Index> row_offsets,
                                       std::vector<BlockFactor> blocks)
    : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)), blocks_(std::move(blocks)) {}

BlockFactorization factor_blocks(const AugmentedSystem& system, unsigned threads) {
  const Index p = system.row_blocks();
  if (p < 1 || system.row_offsets.front() != 0 || system.row_offsets.back() != system.rows()) {
    throw DimensionError("row blocks do not partition the rows of Abar");
  }
  for (Index b = 0; b < p; ++b) {
    if (system.row_offsets[static_cast<std::size_t>(b) + 1] <= system.row_offsets[static_cast<std::size_t>(b)]) {
      throw DimensionError("row block " + std::to_string(b) + " is empty");
    }
  }
  std::vector<BlockFactor> blocks(static_cast<std::size_t>(p));
  parallel_for(blocks.size(), threads, [&](std::size_t b) {
    try {
      blocks[b] = factor_one(system.abar, system.row_offsets[b], system.row_offsets[b + 1], system.cols());
    } catch (const Error& e) {
      throw Error("row block " + std::to_string(b) + ": " + e.what());
    }
  });
  return BlockFactorization(system.rows(), system.cols(), system.row_offsets, std::move(blocks));
}

Vector apply_pinv(const BlockFactorization& f, const BlockVector& b, unsigned threads) {
  check_partition(f, b.offsets());
  return sum_over_blocks(f, threads, [&](Index i, const BlockFactor& blk) -> Vector {
    const Vector coeff = (blk.u.transpose() * b.segment(i)).cwiseQuotient(blk.sigma);
    return blk.v * coeff;
  });
}

Vector apply_pinv(const BlockFactorization& f, const Vector& b, unsigned threads) {
  if (b.size() != f.rows()) throw DimensionError("apply_pinv: rhs length does not match Abar");
  return apply_pinv(f, BlockVector(b, f.row_offsets()), threads);
}

Vector apply_projector(const BlockFactorization& f, const Vector& v, unsigned threads) {
  if (v.size() != f.cols()) throw DimensionError("apply_projector: vector length does not match Abar");
  return sum_over_blocks(f, threads, [&](Index, const BlockFactor& blk) -> Vector {
    return blk.v * (blk.v.transpose() * gather(v, blk.columns));
  });
}

Vector project_onto_range(const BlockFactorization& f, const BlockVector& z, unsigned threads) {
  check_partition(f, z.offsets());
  Vector out = Vector::Zero(f.rows());
  parallel_for(static_cast<std::size_t>(f.block_count()), threads, [&](std::size_t b) {
    const auto& blk = f.block(static_cast<Index>(b));
    const auto zi = z.segment(static_cast<Index>(b));
    out.segment(blk.row_begin, blk.rows()) = blk.u * (blk.u.transpose() * zi);
  });
  return out;
}

Vector project_onto_range(const AugmentedSystem& system, const BlockVector& z, unsigned threads) {
  return project_onto_range(factor_blocks(system, threads), z, threads);
}

SchurMatrix::SchurMatrix(DenseMatrix s, double condition_limit) : s_(std::move(s)) {
  if (s_.rows() == 0) return;
  Eigen::LLT<DenseMatrix> llt(s_);
  if (llt.info() == Eigen::Success) {
    condition_ = 1.0 / llt.rcond();
    if (std::isfinite(condition_) && condition_ <= condition_limit) {
      llt_ = std::move(llt);
      return;
    }
  }
  Eigen::LDLT<DenseMatrix> ldlt(s_);
  condition_ = ldlt.info() == Eigen::Success ? 1.0 / ldlt.rcond() : std::numeric_limits<double>::infinity();
  if (!std::isfinite(condition_) || condition_ > condition_limit) {
    std::ostringstream msg;
    msg << "S is numerically singular (condition estimate " << condition_ << ")";
    throw SingularSchur(msg.str(), condition_);
  }
  ldlt_ = std::move(ldlt);
}

Vector SchurMatrix::solve(const Vector& rhs) const {
  if (rhs.size() != size()) throw DimensionError("SchurMatrix::solve: length mismatch");
  if (size() == 0) return Vector();
  return llt_ ? Vector(llt_->solve(rhs)) : Vector(ldlt_->solve(rhs));
}

SchurMatrix assemble_S(const BlockFactorization& f, Index q, const SolverOptions& options) {
  if (q < 0 || q > f.cols()) throw DimensionError("assemble_S: invalid augmentation width");
  const Index n = f.cols() - q;
  DenseMatrix s(q, q);
  parallel_for(static_cast<std::size_t>(q), options.threads, [&](std::size_t j) {
    Vector e = Vector::Zero(f.cols());
    e[n + static_cast<Index>(j)] = 1.0;
    const Vector col = e - apply_projector(f, e, 1);
    s.col(static_cast<Index>(j)) = col.tail(q);
  });
  DenseMatrix sym = 0.5 * (s + s.transpose());
  return SchurMatrix(std::move(sym), options.schur_condition_limit);
}

Vector compute_f(const BlockFactorization& f, const Vector& b, Index q, unsigned threads) {
  if (q < 0 || q > f.cols()) throw DimensionError("compute_f: invalid augmentation width");
  return -apply_pinv(f, b, threads).tail(q);
}

ConsistentSolver::ConsistentSolver(const AugmentedSystem& system, const SolverOptions& options)
    : system_(system), options_(options) {
  auto start = Clock::now();
  factors_ = factor_blocks(system_, options_.threads);
  orthogonality_error_ = abcd::orthogonality_error(system_);
  factor_seconds_ = seconds_since(start);

  start = Clock::now();
  if (system_.q > 0) schur_ = assemble_S(factors_, system_.q, options_);
  schur_seconds_ = seconds_since(start);
}

Vector ConsistentSolver::apply_w(const Vector& v) const {
  return (v - apply_projector(factors_, v, options_.threads)).tail(q());
}

Vector ConsistentSolver::apply_w_transpose(const Vector& g) const {
  if (g.size() != q()) throw DimensionError("apply_w_transpose: length mismatch");
  Vector t = Vector::Zero(factors_.cols());
  t.tail(q()) = g;
  return t - apply_projector(factors_, t, options_.threads);
}

Vector ConsistentSolver::apply_stacked(const Vector& v) const {
  Vector out(system_.rows() + q());
  out.head(system_.rows()) = spmv(system_.abar, v);
  out.tail(q()) = apply_w(v);
  return out;
}

Vector ConsistentSolver::apply_stacked_pinv(const Vector& bg) const {
  if (bg.size() != system_.rows() + q()) throw DimensionError("apply_stacked_pinv: length mismatch");
  Vector out = apply_pinv(factors_, Vector(bg.head(system_.rows())), options_.threads);
  if (q() > 0) out += apply_w_transpose(schur_.solve(bg.tail(q())));
  return out;
}

Vector ConsistentSolver::solve_full(const Vector& b) const {
  if (b.size() != system_.rows()) throw DimensionError("solve: rhs length does not match Abar");
  Vector z = apply_pinv(factors_, b, options_.threads);
  if (q() == 0) return z;
  const Vector f = -z.tail(q());
  z += apply_w_transpose(schur_.solve(f));
  return z;
}

SolveReport ConsistentSolver::solve(const Vector& b) const {
  const auto start = Clock::now();
  const Vector z = solve_full(b);

  SolveReport report;
  report.x = z.head(n());
  report.y_norm = z.tail(q()).norm();
  Vector padded = Vector::Zero(z.size());
  padded.head(n()) = report.x;
  const Vector residual = b - spmv(system_.abar, padded);
  report.residual_norm = residual.norm();
  report.normal_residual = spmv_t(system_.abar, residual).head(n()).norm();
  report.orthogonality_error = orthogonality_error_;
  report.s_condition_estimate = schur_.condition_estimate();
  report.p = system_.row_blocks();
  report.q = q();
  const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
  report.consistency_warning = report.residual_norm > options_.consistency_tolerance * scale;
  report.timings.factor = factor_seconds_;
  report.timings.schur = schur_seconds_;
  report.timings.solve = seconds_since(start);
  return report;
}

SolveReport solve_consistent(const AugmentedSystem& system, const Vector& b, const SolverOptions& options) {
  return ConsistentSolver(system, options).solve(b);
}

}  // namespace abcd
