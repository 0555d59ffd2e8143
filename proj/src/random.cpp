#include "abcd/random.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace abcd::random {

namespace {

double condition(const SparseMatrix& a) {
  const Vector sv = Eigen::JacobiSVD<DenseMatrix>(a.to_dense()).singularValues();
  const double low = sv[sv.size() - 1];
  return low > 0.0 ? sv[0] / low : std::numeric_limits<double>::infinity();
}

// Places a nonzero at (i, perm[i]) for every short-side index so the pattern
// contains a full transversal.
SparseMatrix with_transversal(Engine& rng, Index m, Index n, double density) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> entries;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (keep(rng)) entries.push_back({i, j, value(rng)});
    }
  }
  const Index k = std::min(m, n);
  std::vector<Index> rows(static_cast<std::size_t>(m));
  std::vector<Index> cols(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
  for (Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::uniform_real_distribution<double> pivot(1.0, 2.0);
  std::bernoulli_distribution sign(0.5);
  for (Index t = 0; t < k; ++t) {
    entries.push_back({rows[static_cast<std::size_t>(t)], cols[static_cast<std::size_t>(t)],
                       (sign(rng) ? 1.0 : -1.0) * pivot(rng)});
  }
  // Cover the long side too.
  std::uniform_int_distribution<Index> pick_row(0, m - 1);
  std::uniform_int_distribution<Index> pick_col(0, n - 1);
  for (Index t = k; t < m; ++t) entries.push_back({rows[static_cast<std::size_t>(t)], pick_col(rng), value(rng)});
  for (Index t = k; t < n; ++t) entries.push_back({pick_row(rng), cols[static_cast<std::size_t>(t)], value(rng)});
  return SparseMatrix(m, n, std::move(entries));
}

SparseMatrix well_conditioned(Engine& rng, Index m, Index n, double density, double max_condition) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    SparseMatrix a = with_transversal(rng, m, n, density);
    if (condition(a) < max_condition) return a;
  }
  throw std::runtime_error("random: no well-conditioned matrix after 100 attempts");
}

}  // namespace

SparseMatrix sparse_matrix(Engine& rng, Index m, Index n, double density) {
  return with_transversal(rng, m, n, density);
}

SparseMatrix full_row_rank(Engine& rng, Index m, Index n, double density, double max_condition) {
  if (m > n) throw std::invalid_argument("full_row_rank needs m <= n");
  return well_conditioned(rng, m, n, density, max_condition);
}

SparseMatrix full_column_rank(Engine& rng, Index m, Index n, double density, double max_condition) {
  if (m < n) throw std::invalid_argument("full_column_rank needs m >= n");
  return well_conditioned(rng, m, n, density, max_condition);
}

DenseMatrix integer_matrix(Engine& rng, Index rows, Index cols, int bound) {
  std::uniform_int_distribution<int> value(-bound, bound);
  DenseMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = value(rng);
  }
  return out;
}

DenseMatrix integer_low_rank(Engine& rng, Index rows, Index cols, Index rank, int bound) {
  const DenseMatrix left = integer_matrix(rng, rows, rank, bound);
  const DenseMatrix right = integer_matrix(rng, rank, cols, bound);
  return left * right;
}

Vector uniform_vector(Engine& rng, Index n) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Vector out(n);
  for (Index i = 0; i < n; ++i) out[i] = value(rng);
  return out;
}

}  // namespace abcd::random
