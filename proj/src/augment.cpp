#include "abcd/augment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abcd/errors.hpp"

namespace abcd {

namespace {

constexpr double kOrthogonalityTolerance = 1e-12;

// Appends Gamma = sign_k * A[:, first_col:] for every row block k.
AugmentedSystem augment_from(const SparseMatrix& a, const BlockPartition& blocks, Index first_col,
                             AugmentMode mode) {
  AugmentedSystem out;
  out.n = a.cols();
  out.q = a.cols() - first_col;
  out.row_offsets = blocks.row_offsets;
  out.mode = mode;
  out.partition = blocks;
  out.signs.resize(static_cast<std::size_t>(blocks.row_blocks()));
  for (Index k = 0; k < blocks.row_blocks(); ++k) out.signs[static_cast<std::size_t>(k)] = k % 2 == 0 ? 1 : -1;

  auto entries = a.entries();
  const auto original = entries.size();
  for (std::size_t t = 0; t < original; ++t) {
    const auto e = entries[t];
    if (e.col < first_col) continue;
    const Index k = block_of(blocks.row_offsets, e.row);
    entries.push_back({e.row, out.n + e.col - first_col, out.signs[static_cast<std::size_t>(k)] * e.value});
  }
  out.abar = SparseMatrix(a.rows(), out.n + out.q, std::move(entries));

  const double err = orthogonality_error(out);
  const double scale = max_block_frobenius(out);
  const double bound = kOrthogonalityTolerance * std::max(scale, 1.0) * std::max(scale, 1.0);
  if (err > bound) {
    std::ostringstream msg;
    msg << "augmented row blocks are not mutually orthogonal: max |Abar_i Abar_j^T| = " << err
        << " (block norm " << scale << ")";
    throw StructureError(msg.str());
  }
  return out;
}

}  // namespace

SparseMatrix AugmentedSystem::row_block(Index i) const {
  const auto b = static_cast<std::size_t>(i);
  return extract_row_block(abar, row_offsets[b], row_offsets[b + 1]);
}

AugmentedSystem augment_consistent(const SparseMatrix& ar, const BlockPartition& blocks) {
  if (blocks.structure != BlockStructure::kBidiagonal) {
    throw StructureError("augment_consistent needs a bidiagonal block partition");
  }
  if (!is_block_bidiagonal(ar, blocks)) {
    throw StructureError("matrix does not conform to its bidiagonal block partition");
  }
  return augment_from(ar, blocks, 0, AugmentMode::kConsistent);
}

GroupedPartition group_tridiagonal_blocks(const SparseMatrix& ahat, const BlockPartition& blocks) {
  if (blocks.structure != BlockStructure::kTridiagonal) {
    throw StructureError("group_tridiagonal_blocks needs a tridiagonal block partition");
  }
  const auto& fine = blocks.row_offsets;
  const Index levels = blocks.row_blocks();
  if (levels < 1) throw StructureError("empty level partition");
  const Index groups = (levels + 1) / 2;

  GroupedPartition out;
  out.coarse.structure = BlockStructure::kBidiagonal;
  for (Index g = 0; g < groups; ++g) out.coarse.row_offsets.push_back(fine[2 * g]);
  out.coarse.row_offsets.push_back(fine[levels]);
  out.coarse.col_offsets.push_back(fine[0]);
  for (Index g = 0; g <= groups; ++g) out.coarse.col_offsets.push_back(fine[std::min(2 * g + 1, levels)]);
  for (Index l = 0; l < levels; ++l) out.group_of_level.push_back(l / 2);

  if (!is_block_bidiagonal(ahat, out.coarse)) {
    throw StructureError("grouped matrix has a nonzero outside the coarse bidiagonal pattern");
  }
  return out;
}

AugmentedSystem augment_tridiagonal(const SparseMatrix& ahat, const GroupedPartition& grouped) {
  if (!is_block_bidiagonal(ahat, grouped.coarse)) {
    throw StructureError("matrix does not conform to its grouped partition");
  }
  return augment_from(ahat, grouped.coarse, grouped.coarse.col_offsets[1], AugmentMode::kTridiagonal);
}

double orthogonality_error(const AugmentedSystem& system) {
  const auto& a = system.abar;
  const Index m = a.rows();
  if (system.row_blocks() <= 1) return 0.0;

  std::vector<Index> block(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) block[static_cast<std::size_t>(i)] = block_of(system.row_offsets, i);

  // Column-wise lists of (row, value), rows ascending.
  std::vector<std::vector<std::pair<Index, double>>> columns(static_cast<std::size_t>(a.cols()));
  for (const auto& e : a.entries()) columns[static_cast<std::size_t>(e.col)].emplace_back(e.row, e.value);

  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
  std::vector<Index> touched;
  double worst = 0.0;
  for (Index r = 0; r < m; ++r) {
    const Index br = block[static_cast<std::size_t>(r)];
    for (Index k = off[r]; k < off[r + 1]; ++k) {
      for (const auto& [other, v] : columns[static_cast<std::size_t>(col[k])]) {
        if (other <= r || block[static_cast<std::size_t>(other)] == br) continue;
        auto& slot = acc[static_cast<std::size_t>(other)];
        if (slot == 0.0) touched.push_back(other);
        slot += val[k] * v;
      }
    }
    for (Index other : touched) {
      worst = std::max(worst, std::abs(acc[static_cast<std::size_t>(other)]));
      acc[static_cast<std::size_t>(other)] = 0.0;
    }
    touched.clear();
  }
  return worst;
}

double max_block_frobenius(const AugmentedSystem& system) {
  const auto off = system.abar.row_offsets();
  const auto val = system.abar.values();
  double worst = 0.0;
  for (Index b = 0; b < system.row_blocks(); ++b) {
    double s = 0.0;
    for (Index k = off[system.row_offsets[static_cast<std::size_t>(b)]];
         k < off[system.row_offsets[static_cast<std::size_t>(b) + 1]]; ++k) {
      s += val[k] * val[k];
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace abcd
