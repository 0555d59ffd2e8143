#pragma once

#include <cstdint>
#include <random>

#include "abcd/sparse.hpp"

/// Seeded generators for test matrices. Every generator is deterministic for a
/// given engine state.
namespace abcd::random {

using Engine = std::mt19937_64;

/// Entries drawn uniformly from [-1, 1] at the given density, with at least
/// one nonzero per row and per column.
SparseMatrix sparse_matrix(Engine& rng, Index m, Index n, double density);

/// m <= n, rank m, 2-norm condition number below `max_condition`.
SparseMatrix full_row_rank(Engine& rng, Index m, Index n, double density, double max_condition = 1e6);
/// m >= n, rank n.
SparseMatrix full_column_rank(Engine& rng, Index m, Index n, double density, double max_condition = 1e6);

/// Integer entries in [-bound, bound].
DenseMatrix integer_matrix(Engine& rng, Index rows, Index cols, int bound = 3);
/// Product of integer factors with inner dimension `rank` (so rank <= `rank`).
DenseMatrix integer_low_rank(Engine& rng, Index rows, Index cols, Index rank, int bound = 2);

Vector uniform_vector(Engine& rng, Index n);

}  // namespace abcd::random
