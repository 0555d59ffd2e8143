#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "abcd/errors.hpp"
#include "abcd/matrix_market.hpp"
#include "abcd/random.hpp"

namespace abcd {
namespace {

SparseMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(MatrixMarket, Identity) {
  const SparseMatrix a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 1.0\n");
  EXPECT_EQ(a, SparseMatrix::identity(2));
}

TEST(MatrixMarket, DuplicatesAreSummed) {
  const SparseMatrix a = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 1.0\n");
  ASSERT_EQ(a.nonzeros(), 1);
  EXPECT_EQ(a.entries()[0], (Triplet{0, 0, 2.0}));
}

TEST(MatrixMarket, RunningFixtureFile) {
  const SparseMatrix a = read_matrix_market(std::filesystem::path(ABCD_TEST_DATA) / "running.mtx");
  EXPECT_EQ(a.nonzeros(), 3);
  EXPECT_EQ(std::vector<Index>(a.row_offsets().begin(), a.row_offsets().end()), (std::vector<Index>{0, 1, 3}));
  std::stringstream s;
  write_matrix_market(s, a);
  EXPECT_EQ(read_matrix_market(s), a);
}

TEST(MatrixMarket, CommentsBlankLinesAndSigns) {
  const SparseMatrix a =
      parse("%%MatrixMarket matrix coordinate real general\n% comment\n\n2 3 2\n% mid\n1 3 +1.5e0\n2 1 -2\n");
  EXPECT_EQ(a.to_dense(), (DenseMatrix(2, 3) << 0, 0, 1.5, -2, 0, 0).finished());
}

TEST(MatrixMarket, SymmetricIsExpanded) {
  const SparseMatrix a = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4\n2 1 3\n");
  EXPECT_EQ(a.to_dense(), (DenseMatrix(2, 2) << 4, 3, 3, 0).finished());
}

TEST(MatrixMarket, UnsupportedQualifiers) {
  for (const char* header : {"%%MatrixMarket matrix coordinate complex general\n",
                             "%%MatrixMarket matrix coordinate pattern general\n",
                             "%%MatrixMarket matrix coordinate real hermitian\n",
                             "%%MatrixMarket matrix coordinate real skew-symmetric\n"}) {
    try {
      parse(std::string(header) + "1 1 1\n1 1 1\n");
      ADD_FAILURE() << header;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("unsupported"), std::string::npos) << e.what();
    }
  }
}

TEST(MatrixMarket, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n"), 3u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"), 3u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2\n"), 2u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"), 3u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 1.0\n"), 4u);
  EXPECT_EQ(error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0 7\n"), 3u);
  EXPECT_EQ(error_line("MatrixMarket matrix coordinate real general\n"), 1u);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(MatrixMarket, MissingFileIsIoError) {
  EXPECT_THROW(read_matrix_market(std::filesystem::path("/nonexistent/a.mtx")), IoError);
}

TEST(MatrixMarket, RandomRoundTripIsExact) {
  random::Engine rng(21);
  for (int t = 0; t < 20; ++t) {
    const SparseMatrix a = random::sparse_matrix(rng, 1 + t, 2 + t / 2, 0.3);
    std::stringstream s;
    write_matrix_market(s, a);
    EXPECT_EQ(s.str().rfind("%%MatrixMarket matrix coordinate real general\n", 0), 0u);
    EXPECT_EQ(read_matrix_market(s), a);
  }
}

TEST(VectorMarket, ArrayAndCoordinate) {
  std::istringstream arr("%%MatrixMarket matrix array real general\n3 1\n1\n-2.5\n0\n");
  EXPECT_EQ(read_vector_market(arr), (Vector(3) << 1, -2.5, 0).finished());
  std::istringstream coo("%%MatrixMarket matrix coordinate real general\n3 1 1\n2 1 4\n");
  EXPECT_EQ(read_vector_market(coo), (Vector(3) << 0, 4, 0).finished());
  std::istringstream wide("%%MatrixMarket matrix array real general\n1 2\n1\n2\n");
  EXPECT_THROW(read_vector_market(wide), ParseError);
}

TEST(VectorMarket, RoundTrip) {
  random::Engine rng(2);
  const Vector v = random::uniform_vector(rng, 9);
  std::stringstream s;
  write_vector_market(s, v);
  EXPECT_EQ(s.str().rfind("%%MatrixMarket matrix array real general\n", 0), 0u);
  EXPECT_EQ(read_vector_market(s), v);
}

}  // namespace
}  // namespace abcd
