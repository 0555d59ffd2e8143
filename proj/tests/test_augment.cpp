#include <gtest/gtest.h>

#include "abcd/augment.hpp"
#include "abcd/errors.hpp"
#include "abcd/oracle.hpp"
#include "abcd/random.hpp"

namespace abcd {
namespace {

using Nodes = std::vector<Index>;

DenseMatrix mat(Index rows, Index cols, std::initializer_list<double> values) {
  DenseMatrix d(rows, cols);
  auto it = values.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) d(i, j) = *it++;
  return d;
}

AugmentedSystem consistent(const SparseMatrix& a) {
  const auto o = derive_permutations(cuthill_mckee(build_bipartite(a)), a.rows(), a.cols());
  return augment_consistent(permute(a, o.rows, o.cols), o.blocks);
}

AugmentedSystem tridiagonal(const SparseMatrix& a) {
  const auto o = reorder_augmented(build_augmented_adjacency(a), a.rows());
  return augment_tridiagonal(o.reordered, group_tridiagonal_blocks(o.reordered, o.blocks));
}

TEST(AugmentConsistent, RunningExample) {
  const auto s = consistent(SparseMatrix::from_dense(mat(2, 2, {2, 0, 1, 1})));
  EXPECT_EQ(s.abar.to_dense(), mat(2, 4, {2, 0, 2, 0, 1, 1, -1, -1}));
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(s.q, 2);
  EXPECT_EQ(s.row_offsets, (Nodes{0, 1, 2}));
  EXPECT_EQ(s.signs, (std::vector<int>{1, -1}));
  EXPECT_EQ(s.mode, AugmentMode::kConsistent);
  EXPECT_EQ(orthogonality_error(s), 0.0);
}

TEST(AugmentConsistent, SingleBlockCopiesA) {
  const auto s = consistent(SparseMatrix::from_dense(mat(1, 2, {1, 1})));
  EXPECT_EQ(s.row_blocks(), 1);
  EXPECT_EQ(s.abar.to_dense(), mat(1, 4, {1, 1, 1, 1}));
  EXPECT_EQ(orthogonality_error(s), 0.0);
}

TEST(AugmentConsistent, Identity) {
  const auto s = consistent(SparseMatrix::identity(2));
  EXPECT_EQ(s.abar.to_dense(), mat(2, 4, {1, 0, 1, 0, 0, 1, 0, -1}));
  EXPECT_EQ(orthogonality_error(s), 0.0);
}

TEST(AugmentConsistent, RejectsWrongPartition) {
  const SparseMatrix a = SparseMatrix::from_dense(mat(2, 2, {2, 0, 1, 1}));
  BlockPartition tri;
  tri.structure = BlockStructure::kTridiagonal;
  tri.row_offsets = {0, 1, 2};
  tri.col_offsets = {0, 1, 2};
  EXPECT_THROW(augment_consistent(a, tri), StructureError);
  BlockPartition wrong;
  wrong.row_offsets = {0, 1, 2};
  wrong.col_offsets = {0, 1, 2, 2};
  EXPECT_THROW(augment_consistent(SparseMatrix::from_dense(mat(2, 2, {0, 1, 1, 0})), wrong), StructureError);
}

TEST(OrthogonalityError, UnaugmentedBlocks) {
  AugmentedSystem s;
  s.abar = SparseMatrix::from_dense(mat(2, 2, {2, 0, 1, 1}));
  s.n = 2;
  s.row_offsets = {0, 1, 2};
  EXPECT_EQ(orthogonality_error(s), 2.0);
  s.row_offsets = {0, 2};
  EXPECT_EQ(orthogonality_error(s), 0.0);
}

TEST(AugmentTridiagonal, LeastSquaresFixture) {
  const auto o = reorder_augmented(build_augmented_adjacency(SparseMatrix::from_dense(mat(2, 1, {1, 1}))), 2);
  const auto g = group_tridiagonal_blocks(o.reordered, o.blocks);
  EXPECT_EQ(g.coarse.row_offsets, (Nodes{0, 2, 3}));
  EXPECT_EQ(g.coarse.col_offsets, (Nodes{0, 1, 3, 3}));
  EXPECT_EQ(g.group_of_level, (Nodes{0, 0, 1}));
  const auto s = augment_tridiagonal(o.reordered, g);
  EXPECT_EQ(s.mode, AugmentMode::kTridiagonal);
  EXPECT_EQ(s.n, 3);
  EXPECT_EQ(s.q, 2);
  EXPECT_EQ(s.signs, (std::vector<int>{1, -1}));
  EXPECT_EQ(s.abar.to_dense(), mat(3, 5, {1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, -1, -1}));
  EXPECT_LE(orthogonality_error(s), 1e-14);
}

TEST(AugmentTridiagonal, SixLevelsGiveThreeGroups) {
  const SparseMatrix a = SparseMatrix::from_dense(mat(3, 3, {1, 0, 0, 1, 1, 0, 0, 1, 1}));
  const auto o = reorder_augmented(build_augmented_adjacency(a), 3);
  ASSERT_EQ(o.levels.levels.size(), 6u);
  const auto g = group_tridiagonal_blocks(o.reordered, o.blocks);
  EXPECT_EQ(g.coarse.row_offsets, (Nodes{0, 2, 4, 6}));
  EXPECT_EQ(g.coarse.col_offsets, (Nodes{0, 1, 3, 5, 6}));
  const auto s = augment_tridiagonal(o.reordered, g);
  EXPECT_EQ(s.q, 5);
  EXPECT_EQ(s.signs, (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(orthogonality_error(s), 0.0);
  // Row group k copies (-1)^k times its blocks right of column group 0.
  const DenseMatrix ahat = o.reordered.to_dense();
  const DenseMatrix abar = s.abar.to_dense();
  for (Index k = 0; k < 3; ++k) {
    for (Index i = g.coarse.row_offsets[k]; i < g.coarse.row_offsets[k + 1]; ++i) {
      EXPECT_EQ(abar.row(i).tail(5), s.signs[k] * ahat.row(i).tail(5)) << "row " << i;
    }
  }
}

TEST(AugmentTridiagonal, TwoLevelsGiveOneGroup) {
  const auto o = reorder_augmented(build_augmented_adjacency(SparseMatrix::from_dense(mat(1, 1, {1}))), 1);
  const auto g = group_tridiagonal_blocks(o.reordered, o.blocks);
  EXPECT_EQ(g.coarse.row_offsets, (Nodes{0, 2}));
  const auto s = augment_tridiagonal(o.reordered, g);
  EXPECT_EQ(s.row_blocks(), 1);
  EXPECT_EQ(s.q, 1);
  EXPECT_EQ(s.abar.to_dense(), mat(2, 3, {1, 1, 1, 1, 0, 0}));
}

TEST(GroupTridiagonal, RejectsBidiagonalTag) {
  BlockPartition bi;
  bi.row_offsets = {0, 1};
  bi.col_offsets = {0, 0, 1};
  EXPECT_THROW(group_tridiagonal_blocks(SparseMatrix::identity(1), bi), StructureError);
}

class RandomAugment : public ::testing::TestWithParam<int> {};

TEST_P(RandomAugment, OrthogonalWithCopiedBlocks) {
  random::Engine rng(100 + static_cast<std::uint64_t>(GetParam()));
  const Index m = std::uniform_int_distribution<Index>(1, 30)(rng);
  const Index n = std::uniform_int_distribution<Index>(1, 30)(rng);
  const SparseMatrix a = random::sparse_matrix(rng, m, n, 0.15);

  const auto o = derive_permutations(cuthill_mckee(build_bipartite(a)), m, n);
  const SparseMatrix ar = permute(a, o.rows, o.cols);
  const auto s = augment_consistent(ar, o.blocks);
  EXPECT_EQ(s.cols(), s.n + s.q);
  EXPECT_EQ(s.q, n);
  EXPECT_LE(orthogonality_error(s), 1e-12 * max_block_frobenius(s));
  const DenseMatrix d = ar.to_dense();
  const DenseMatrix abar = s.abar.to_dense();
  for (Index k = 0; k < s.row_blocks(); ++k) {
    const Index r0 = s.row_offsets[static_cast<std::size_t>(k)];
    const Index rows = s.row_offsets[static_cast<std::size_t>(k) + 1] - r0;
    EXPECT_EQ(s.signs[static_cast<std::size_t>(k)], k % 2 == 0 ? 1 : -1);
    EXPECT_EQ(abar.block(r0, n, rows, n), s.signs[static_cast<std::size_t>(k)] * d.middleRows(r0, rows));
    EXPECT_EQ(oracle::numerical_rank(abar.middleRows(r0, rows)).rank,
              oracle::numerical_rank(d.middleRows(r0, rows)).rank);
  }

  const auto t = tridiagonal(a);
  EXPECT_EQ(t.cols(), t.n + t.q);
  EXPECT_LE(orthogonality_error(t), 1e-12 * max_block_frobenius(t));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomAugment, ::testing::Range(0, 30));

}  // namespace
}  // namespace abcd
