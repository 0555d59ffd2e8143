#include <gtest/gtest.h>

#include "abcd/errors.hpp"
#include "abcd/matrix_market.hpp"
#include "abcd/oracle.hpp"
#include "abcd/pipeline.hpp"
#include "abcd/random.hpp"

namespace abcd::oracle {
namespace {

DenseMatrix mat(Index rows, Index cols, std::initializer_list<double> values) {
  DenseMatrix d(rows, cols);
  auto it = values.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) d(i, j) = *it++;
  return d;
}

Pipeline prepared(const char* name, SolveMode mode) {
  return Pipeline::prepare(read_matrix_market(std::filesystem::path(ABCD_TEST_DATA) / name), mode);
}

TEST(DensePinv, HandCases) {
  EXPECT_LE((dense_pinv(DenseMatrix::Identity(3, 3)) - DenseMatrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((dense_pinv(mat(1, 4, {2, 0, 2, 0})) - mat(4, 1, {2, 0, 2, 0}) / 8).norm(), 1e-15);
  const DenseMatrix zero = dense_pinv(DenseMatrix::Zero(2, 3));
  EXPECT_EQ(zero.rows(), 3);
  EXPECT_EQ(zero.cols(), 2);
  EXPECT_EQ(zero.norm(), 0.0);
}

TEST(NumericalRank, ToleranceSeparatesSingularValues) {
  random::Engine rng(1);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix m = random::integer_low_rank(rng, 6, 5, 1 + t % 4);
    const auto r = numerical_rank(m);
    EXPECT_LE(r.rank, 1 + t % 4);
    if (r.rank > 0) EXPECT_GT(r.singular_values[r.rank - 1], r.tolerance);
    if (r.rank < r.singular_values.size()) EXPECT_LE(r.singular_values[r.rank], r.tolerance);
  }
  EXPECT_EQ(numerical_rank(DenseMatrix::Zero(0, 3)).rank, 0);
}

TEST(Bases, DimensionsAndOrthonormality) {
  const DenseMatrix m = mat(3, 3, {1, 2, 3, 2, 4, 6, 1, 0, 1});
  const DenseMatrix range = range_basis(m);
  const DenseMatrix kernel = null_space_basis(m);
  EXPECT_EQ(range.cols(), 2);
  EXPECT_EQ(kernel.cols(), 1);
  EXPECT_LE((range.transpose() * range - DenseMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LE((m * kernel).norm(), 1e-14);
}

TEST(Intersection, PlanesMeetInALine) {
  const DenseMatrix u = mat(3, 2, {1, 0, 0, 1, 0, 0});
  const DenseMatrix v = mat(3, 2, {0, 0, 1, 0, 0, 1});
  EXPECT_EQ(intersection_dimension(u, v), 1);
  EXPECT_EQ(intersection_dimension(u, u), 2);
  EXPECT_THROW(intersection_dimension(u, DenseMatrix::Zero(2, 1)), DimensionError);
}

TEST(RankJoin, HandCases) {
  const DenseMatrix f = mat(2, 3, {1, -2, 5, 3, 0, 7});
  const auto identity = rank_join_identity(DenseMatrix::Identity(2, 2), f);
  EXPECT_EQ(identity.lhs, 2);
  EXPECT_EQ(identity.rhs, 2);
  EXPECT_TRUE(identity.holds);

  const auto split = rank_join_identity(mat(2, 1, {1, 0}), mat(2, 1, {0, 1}));
  EXPECT_EQ(split.lhs, 2);
  EXPECT_EQ(split.rhs, 2);

  const DenseMatrix e = mat(3, 2, {1, 2, 2, 4, 0, 0});
  const auto same = rank_join_identity(e, e);
  EXPECT_EQ(same.lhs, 1);
  EXPECT_EQ(same.rhs, 1);
  EXPECT_THROW(rank_join_identity(e, DenseMatrix::Zero(2, 1)), DimensionError);
}

TEST(RankProduct, HandCases) {
  const DenseMatrix e = mat(2, 3, {1, 2, 0, 0, 1, 1});
  const auto identity = rank_product_identity(e, DenseMatrix::Identity(3, 3));
  EXPECT_EQ(identity.intersection, 0);
  EXPECT_EQ(identity.lhs, 2);
  EXPECT_TRUE(identity.holds);

  const auto annihilated = rank_product_identity(mat(2, 2, {1, 0, 0, 0}), mat(2, 1, {0, 1}));
  EXPECT_EQ(annihilated.lhs, 0);
  EXPECT_EQ(annihilated.intersection, 1);
  EXPECT_EQ(annihilated.rhs, 0);

  const auto zero = rank_product_identity(DenseMatrix::Zero(2, 3), mat(3, 1, {1, 2, 3}));
  EXPECT_EQ(zero.lhs, 0);
  EXPECT_EQ(zero.rhs, 0);
  EXPECT_THROW(rank_product_identity(e, DenseMatrix::Zero(2, 1)), DimensionError);
}

TEST(Probe, RunningExampleHasInvertibleS) {
  const auto r = conjecture_probe(prepared("running.mtx", SolveMode::kConsistent).augmented());
  EXPECT_EQ(r.rank_abar, 2);
  EXPECT_EQ(r.intersection_dim, 0);
  EXPECT_EQ(r.s_rank, 2);
  EXPECT_EQ(r.q, 2);
  EXPECT_TRUE(r.chain_holds);
  EXPECT_FALSE(r.s_singular);
  EXPECT_FALSE(r.rank_deficient);
}

TEST(Probe, DuplicatedRowsGiveSingularSWithFullRankAbar) {
  AugmentedSystem s = Pipeline::prepare(SparseMatrix::from_dense(mat(2, 2, {1, 2, 1, 2})), SolveMode::kConsistent)
                          .augmented();
  const auto r = conjecture_probe(s);
  EXPECT_EQ(r.rank_abar, 2);
  EXPECT_EQ(r.intersection_dim, 1);
  EXPECT_EQ(r.w_rank, 1);
  EXPECT_EQ(r.s_rank, 1);
  EXPECT_TRUE(r.chain_holds);
  EXPECT_TRUE(r.converse_candidate);
  EXPECT_FALSE(r.rank_deficient);
}

TEST(Probe, ParallelRowsGiveRankDeficientAbarWithInvertibleS) {
  // Cross-checked with an independent numpy computation: the eigenvalues of
  // S are 0.25, 0.75 and 1 while rank(Abar) = 2 < 3.
  const auto r = conjecture_probe(prepared("parallel_rows.mtx", SolveMode::kConsistent).augmented());
  EXPECT_EQ(r.rank_abar, 2);
  EXPECT_EQ(r.m, 3);
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_EQ(r.intersection_dim, 0);
  EXPECT_EQ(r.s_rank, 3);
  EXPECT_FALSE(r.s_singular);
  EXPECT_TRUE(r.chain_holds);
}

TEST(Probe, RankDeficientLeastSquaresEmbedding) {
  // numpy: rank(Abar) = 7 of 7, rank(S) = 5 of 6.
  const auto r = conjecture_probe(prepared("lsq_rank_deficient.mtx", SolveMode::kLeastSquares).augmented());
  EXPECT_EQ(r.rank_abar, 7);
  EXPECT_EQ(r.q, 6);
  EXPECT_EQ(r.s_rank, 5);
  EXPECT_EQ(r.intersection_dim, 1);
  EXPECT_TRUE(r.converse_candidate);
  EXPECT_TRUE(r.chain_holds);
}

TEST(Probe, NoAugmentation) {
  AugmentedSystem s;
  s.abar = SparseMatrix::identity(2);
  s.n = 2;
  s.row_offsets = {0, 2};
  const auto r = conjecture_probe(s);
  EXPECT_EQ(r.q, 0);
  EXPECT_EQ(r.s_rank, 0);
  EXPECT_EQ(r.intersection_dim, 0);
  EXPECT_TRUE(r.chain_holds);
}

TEST(Probe, DensificationCap) {
  const auto s = prepared("running.mtx", SolveMode::kConsistent).augmented();
  EXPECT_THROW(conjecture_probe(s, 7), CapacityError);
  EXPECT_NO_THROW(conjecture_probe(s, 8));
}

class RandomChain : public ::testing::TestWithParam<int> {};

TEST_P(RandomChain, HoldsOnAugmentedFixtures) {
  random::Engine rng(40 + static_cast<std::uint64_t>(GetParam()));
  const Index m = std::uniform_int_distribution<Index>(2, 12)(rng);
  const Index n = std::uniform_int_distribution<Index>(2, 12)(rng);
  const SparseMatrix a = random::sparse_matrix(rng, m, n, 0.25);
  for (auto mode : {SolveMode::kConsistent, SolveMode::kLeastSquares}) {
    const auto r = conjecture_probe(Pipeline::prepare(a, mode).augmented());
    EXPECT_TRUE(r.chain_holds) << r.observation;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomChain, ::testing::Range(0, 25));

}  // namespace
}  // namespace abcd::oracle
