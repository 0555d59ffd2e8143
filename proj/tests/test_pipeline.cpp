#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "abcd/errors.hpp"
#include "abcd/matrix_market.hpp"
#include "abcd/oracle.hpp"
#include "abcd/pipeline.hpp"
#include "abcd/random.hpp"

namespace abcd {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SparseMatrix fixture(const char* name) { return read_matrix_market(std::filesystem::path(ABCD_TEST_DATA) / name); }

TEST(Pipeline, ModeNames) {
  EXPECT_EQ(parse_mode("consistent"), SolveMode::kConsistent);
  EXPECT_EQ(parse_mode("least-squares"), SolveMode::kLeastSquares);
  EXPECT_EQ(to_string(SolveMode::kLeastSquares), "least-squares");
  EXPECT_THROW(parse_mode("lsq"), std::invalid_argument);
}

TEST(Pipeline, ConsistentRunningExample) {
  const auto r = solve(fixture("running.mtx"), vec({2, 2}), SolveMode::kConsistent);
  EXPECT_LE((r.x - vec({1, 1})).norm(), 1e-12);
  EXPECT_LE(r.residual_norm, 1e-12);
  EXPECT_LE(r.y_norm, 1e-10);
  EXPECT_EQ(r.r.size(), 0);
}

TEST(Pipeline, LeastSquaresFixture) {
  const Pipeline p = Pipeline::build(fixture("lsq.mtx"), SolveMode::kLeastSquares);
  EXPECT_EQ(p.row_permutation().order(), (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(p.augmented().q, 2);
  const auto r = p.solve(vec({0, 2}));
  EXPECT_LE((r.x - vec({1})).norm(), 1e-12);
  EXPECT_LE((r.r - vec({-1, 1})).norm(), 1e-12);
  EXPECT_LE(r.normal_residual, 1e-12);
  EXPECT_LE(r.residual_mismatch, 1e-12);
  EXPECT_NEAR(r.residual_norm, std::sqrt(2.0), 1e-12);
}

TEST(Pipeline, ZeroRhs) {
  for (auto mode : {SolveMode::kConsistent, SolveMode::kLeastSquares}) {
    const auto r = solve(fixture("running.mtx"), Vector::Zero(2), mode);
    EXPECT_EQ(r.x, Vector::Zero(2));
  }
}

TEST(Pipeline, DimensionErrors) {
  const Pipeline p = Pipeline::build(fixture("running.mtx"), SolveMode::kConsistent);
  EXPECT_THROW(p.solve(Vector::Zero(3)), DimensionError);
  EXPECT_THROW(p.project_rhs(Vector::Zero(3)), DimensionError);
  EXPECT_THROW(Pipeline::build(SparseMatrix(0, 2, {}), SolveMode::kConsistent), DimensionError);
}

TEST(Pipeline, PreparedPipelineHasNoSolver) {
  const Pipeline p = Pipeline::prepare(fixture("running.mtx"), SolveMode::kConsistent);
  EXPECT_FALSE(p.factored());
  EXPECT_EQ(p.augmented().q, 2);
  EXPECT_THROW(p.solver(), std::logic_error);
  EXPECT_THROW(p.solve(vec({2, 2})), std::logic_error);
}

TEST(Pipeline, InconsistentSystemWarns) {
  // Rows 2 and 3 are parallel, so b is outside R(A) unless b3 = 2 b2.
  const auto bad = solve(fixture("parallel_rows.mtx"), vec({1, 1, 0}), SolveMode::kConsistent);
  EXPECT_TRUE(bad.consistency_warning);
  const auto good = solve(fixture("parallel_rows.mtx"), vec({1, 1, 2}), SolveMode::kConsistent);
  EXPECT_FALSE(good.consistency_warning);
  EXPECT_LE(good.residual_norm, 1e-12);
}

TEST(Pipeline, SingularSchurCarriesMode) {
  try {
    Pipeline::build(fixture("lsq_rank_deficient.mtx"), SolveMode::kLeastSquares);
    FAIL();
  } catch (const SingularSchur& e) {
    EXPECT_NE(std::string(e.what()).find("least-squares"), std::string::npos);
  }
}

TEST(Pipeline, RankDeficientLeastSquaresWithInvertibleS) {
  // [[1, 2], [2, 4]]: S stays invertible and the solve gives the
  // minimal-norm least-squares solution A^+ b = [0.2, 0.4].
  DenseMatrix a(2, 2);
  a << 1, 2, 2, 4;
  const auto r = solve(SparseMatrix::from_dense(a), vec({1, 2}), SolveMode::kLeastSquares);
  EXPECT_LE((r.x - vec({0.2, 0.4})).norm(), 1e-12);
  EXPECT_LE(r.normal_residual, 1e-12);
}

TEST(ProjectRhs, RangeAndOrthogonalComplement) {
  // Rows 2 and 3 are parallel, so Abar has a one-dimensional left null space.
  const Pipeline p = Pipeline::build(fixture("parallel_rows.mtx"), SolveMode::kConsistent);
  const Vector orthogonal = vec({0, 2, -1});
  EXPECT_LE(p.project_rhs(orthogonal).norm(), 1e-14);
  random::Engine rng(4);
  const DenseMatrix abar = p.augmented().abar.to_dense();
  const Vector inside = p.row_permutation().unapply(abar * random::uniform_vector(rng, abar.cols()));
  EXPECT_LE((p.project_rhs(inside) - inside).norm(), 1e-13 * inside.norm());
}

TEST(ProjectRhs, MatchesDenseOracle) {
  for (const char* name : {"running.mtx", "parallel_rows.mtx"}) {
    const Pipeline p = Pipeline::build(fixture(name), SolveMode::kConsistent);
    const DenseMatrix abar = p.augmented().abar.to_dense();
    const DenseMatrix proj = abar * oracle::dense_pinv(abar);
    random::Engine rng(9);
    for (int t = 0; t < 10; ++t) {
      const Vector b = random::uniform_vector(rng, p.rows());
      const Vector expected = p.row_permutation().unapply(proj * p.row_permutation().apply(b));
      EXPECT_LE((p.project_rhs(b) - expected).norm(), 1e-10);
    }
  }
}

TEST(ProjectRhs, LeastSquaresModeUsesTheEmbeddedLength) {
  const Pipeline p = Pipeline::build(fixture("lsq.mtx"), SolveMode::kLeastSquares);
  const Vector b = vec({0.3, -1, 2});
  // The augmented Abar of this fixture has orthogonal rows: projection is identity.
  EXPECT_LE((p.project_rhs(b) - b).norm(), 1e-14);
}

class RandomPipeline : public ::testing::TestWithParam<int> {};

TEST_P(RandomPipeline, PrePermutedInputGivesPermutedSolution) {
  random::Engine rng(300 + static_cast<std::uint64_t>(GetParam()));
  const Index n = std::uniform_int_distribution<Index>(3, 25)(rng);
  const SparseMatrix a = random::full_row_rank(rng, n, n, 0.15);
  std::vector<Index> rf(static_cast<std::size_t>(n)), cf(static_cast<std::size_t>(n));
  std::iota(rf.begin(), rf.end(), 0);
  std::iota(cf.begin(), cf.end(), 0);
  std::shuffle(rf.begin(), rf.end(), rng);
  std::shuffle(cf.begin(), cf.end(), rng);
  const Permutation rows(rf), cols(cf);
  const Vector b = random::uniform_vector(rng, n);
  const auto r1 = solve(a, b, SolveMode::kConsistent);
  const auto r2 = solve(permute(a, rows, cols), rows.apply(b), SolveMode::kConsistent);
  EXPECT_LE(r1.residual_norm, 1e-10 * b.norm());
  EXPECT_LE(r2.residual_norm, 1e-10 * b.norm());
  EXPECT_LE((cols.unapply(r2.x) - r1.x).norm(), 1e-9 * (1 + r1.x.norm()));
}

TEST_P(RandomPipeline, LeastSquaresOptimality) {
  random::Engine rng(700 + static_cast<std::uint64_t>(GetParam()));
  const Index n = std::uniform_int_distribution<Index>(1, 20)(rng);
  const Index m = std::uniform_int_distribution<Index>(n, n + 20)(rng);
  const SparseMatrix a = random::full_column_rank(rng, m, n, 0.2);
  const Vector b = random::uniform_vector(rng, m);
  const auto r = solve(a, b, SolveMode::kLeastSquares);
  const DenseMatrix d = a.to_dense();
  const double scale = a.frobenius_norm() * b.norm();
  EXPECT_LE(r.normal_residual, 1e-8 * scale);
  EXPECT_LE((d.transpose() * r.r).norm(), 1e-8 * scale);
  EXPECT_LE((d.transpose() * d * r.x - d.transpose() * b).norm(),
            1e-8 * a.frobenius_norm() * a.frobenius_norm() * b.norm());
  const Vector oracle_x = oracle::dense_pinv(d) * b;
  EXPECT_LE((r.x - oracle_x).norm(), 1e-8 * oracle_x.norm());
  EXPECT_LE(r.residual_mismatch, 1e-10 * (1 + b.norm()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomPipeline, ::testing::Range(0, 20));

}  // namespace
}  // namespace abcd
