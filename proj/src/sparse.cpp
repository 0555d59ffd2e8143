#include "abcd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

std::string shape(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Triplet> entries)
    : rows_(nrows), cols_(ncols) {
  if (nrows < 0 || ncols < 0) throw DimensionError("negative matrix dimension");
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw DimensionError("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside " + shape(nrows, ncols) + " matrix");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  offsets_.assign(static_cast<std::size_t>(nrows) + 1, 0);
  col_idx_.reserve(entries.size());
  values_.reserve(entries.size());
  std::size_t k = 0;
  while (k < entries.size()) {
    const Index r = entries[k].row;
    const Index c = entries[k].col;
    double sum = 0.0;
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k) {
      sum += entries[k].value;
    }
    if (sum == 0.0) continue;
    col_idx_.push_back(c);
    values_.push_back(sum);
    ++offsets_[static_cast<std::size_t>(r) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<Triplet> t;
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
    }
  }
  return SparseMatrix(dense.rows(), dense.cols(), std::move(t));
}

std::vector<Triplet> SparseMatrix::entries() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      out.push_back({i, col_idx_[k], values_[k]});
    }
  }
  return out;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  }
  return d;
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (const auto& e : entries()) t.push_back({e.col, e.row, e.value});
  return SparseMatrix(cols_, rows_, std::move(t));
}

Permutation::Permutation(std::vector<Index> forward) : forward_(std::move(forward)) {
  std::vector<bool> seen(forward_.size(), false);
  const auto n = static_cast<Index>(forward_.size());
  for (Index v : forward_) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw DimensionError("permutation is not a bijection on {0.." + std::to_string(n - 1) + "}");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> f(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = i;
  return Permutation(std::move(f));
}

Permutation Permutation::from_order(std::span<const Index> order) {
  std::vector<Index> f(order.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index old = order[k];
    if (old < 0 || old >= static_cast<Index>(order.size())) {
      throw DimensionError("ordering entry out of range");
    }
    f[static_cast<std::size_t>(old)] = static_cast<Index>(k);
  }
  return Permutation(std::move(f));
}

std::vector<Index> Permutation::order() const {
  std::vector<Index> o(forward_.size());
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    o[static_cast<std::size_t>(forward_[i])] = static_cast<Index>(i);
  }
  return o;
}

Permutation Permutation::inverse() const { return Permutation(order()); }

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    if (forward_[i] != static_cast<Index>(i)) return false;
  }
  return true;
}

Vector Permutation::apply(const Vector& x) const {
  if (x.size() != size()) throw DimensionError("permutation/vector size mismatch");
  Vector y(x.size());
  for (Index i = 0; i < size(); ++i) y[(*this)[i]] = x[i];
  return y;
}

Vector Permutation::unapply(const Vector& y) const {
  if (y.size() != size()) throw DimensionError("permutation/vector size mismatch");
  Vector x(y.size());
  for (Index i = 0; i < size(); ++i) x[i] = y[(*this)[i]];
  return x;
}

Permutation compose(const Permutation& first, const Permutation& second) {
  if (first.size() != second.size()) throw DimensionError("composing permutations of different size");
  std::vector<Index> f(static_cast<std::size_t>(first.size()));
  for (Index i = 0; i < first.size(); ++i) f[static_cast<std::size_t>(i)] = second[first[i]];
  return Permutation(std::move(f));
}

SparseMatrix permute(const SparseMatrix& a, const Permutation& rows, const Permutation& cols) {
  if (rows.size() != a.rows() || cols.size() != a.cols()) {
    throw DimensionError("permute: permutation sizes " + shape(rows.size(), cols.size()) +
                         " do not match matrix " + shape(a.rows(), a.cols()));
  }
  auto t = a.entries();
  for (auto& e : t) {
    e.row = rows[e.row];
    e.col = cols[e.col];
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(t));
}

Vector spmv(const SparseMatrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw DimensionError("spmv: dimension mismatch");
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  Vector y = Vector::Zero(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
  return y;
}

Vector spmv_t(const SparseMatrix& a, const Vector& x) {
  if (x.size() != a.rows()) throw DimensionError("spmv_t: dimension mismatch");
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  Vector y = Vector::Zero(a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = off[i]; k < off[i + 1]; ++k) y[col[k]] += val[k] * x[i];
  }
  return y;
}

SparseMatrix horiz_concat(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("horiz_concat: row counts differ");
  auto t = a.entries();
  for (auto e : b.entries()) {
    e.col += a.cols();
    t.push_back(e);
  }
  return SparseMatrix(a.rows(), a.cols() + b.cols(), std::move(t));
}

SparseMatrix extract_row_block(const SparseMatrix& a, Index from, Index to) {
  if (from < 0 || from >= to || to > a.rows()) {
    throw DimensionError("extract_row_block: invalid range [" + std::to_string(from) + ", " +
                         std::to_string(to) + ")");
  }
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  std::vector<Triplet> t;
  for (Index i = from; i < to; ++i) {
    for (Index k = off[i]; k < off[i + 1]; ++k) t.push_back({i - from, col[k], val[k]});
  }
  return SparseMatrix(to - from, a.cols(), std::move(t));
}

BlockVector::BlockVector(Vector values, std::vector<Index> offsets)
    : values_(std::move(values)), offsets_(std::move(offsets)) {
  if (offsets_.size() < 2 || offsets_.front() != 0 || offsets_.back() != values_.size()) {
    throw DimensionError("block boundaries do not partition the vector");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) throw DimensionError("block boundaries must be strictly increasing");
  }
}

Eigen::VectorBlock<const Vector> BlockVector::segment(Index block) const {
  const auto b = static_cast<std::size_t>(block);
  return values_.segment(offsets_[b], offsets_[b + 1] - offsets_[b]);
}

}  // namespace abcd
