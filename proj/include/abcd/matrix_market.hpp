#pragma once

#include <filesystem>
#include <iosfwd>

#include "abcd/sparse.hpp"

namespace abcd {

/// Reads "coordinate real general" (and "array real general") Matrix Market
/// data. Indices are 1-based on disk and 0-based in memory; duplicates are
/// summed. Integer fields are read as real and "symmetric" storage is
/// expanded; complex, pattern, hermitian and skew-symmetric are rejected.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Reads a dense vector stored as an "array real general" n x 1 matrix.
/// A coordinate n x 1 file is accepted as well.
Vector read_vector_market(std::istream& in);
Vector read_vector_market(const std::filesystem::path& path);

void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);

void write_vector_market(std::ostream& out, const Vector& v);
void write_vector_market(const std::filesystem::path& path, const Vector& v);

}  // namespace abcd
