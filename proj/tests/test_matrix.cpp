#include <gtest/gtest.h>

#include "mapequiv/matrix.hpp"
#include "test_support.hpp"

namespace mapequiv {
namespace {

using testing::cofactor_det;
using testing::Rng;

const FieldSpec kQ = FieldSpec::rational();

TEST(RankProfileTest, FullRowRank) {
  Matrix m = Matrix::from_ints(kQ, {{1, 0, 1}, {0, 1, 1}});
  // Oracle: every 2x2 minor by cofactor expansion; at least one is nonzero.
  ASSERT_EQ(testing::minor_rank(m), 2u);
  RankProfile p = rank_profile(m);
  EXPECT_EQ(p.rank, 2u);
  EXPECT_EQ(p.pivot_rows, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(p.pivot_cols, (std::vector<std::size_t>{0, 1}));
}

TEST(RankProfileTest, ZeroAndProportional) {
  RankProfile zero = rank_profile(Matrix(kQ, 3, 3));
  EXPECT_EQ(zero.rank, 0u);
  EXPECT_TRUE(zero.pivot_rows.empty());
  EXPECT_TRUE(zero.pivot_cols.empty());

  RankProfile p = rank_profile(Matrix::from_ints(kQ, {{1, 2}, {2, 4}}));
  EXPECT_EQ(p.rank, 1u);
  EXPECT_EQ(p.pivot_rows, (std::vector<std::size_t>{0}));
  EXPECT_EQ(p.pivot_cols, (std::vector<std::size_t>{0}));

  EXPECT_EQ(rank_profile(Matrix(kQ, 0, 4)).rank, 0u);
  EXPECT_EQ(rank_profile(Matrix(kQ, 4, 0)).rank, 0u);
}

TEST(RankProfileTest, FirstNonzeroPivotRow) {
  RankProfile p = rank_profile(Matrix::from_ints(kQ, {{0, 1}, {0, 3}, {5, 0}}));
  EXPECT_EQ(p.pivot_cols, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(p.pivot_rows, (std::vector<std::size_t>{0, 2}));
}

class RankProperties : public ::testing::TestWithParam<FieldSpec> {};

TEST_P(RankProperties, PivotMinorInvertibleAndExtensionsVanish) {
  const FieldSpec f = GetParam();
  Rng rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = testing::uniform(rng, 1, 4), cols = testing::uniform(rng, 1, 4);
    Matrix m = testing::random_matrix(f, rows, cols, rng);
    // Force some rank deficiency.
    if (trial % 3 == 0 && rows > 1) {
      for (std::size_t c = 0; c < cols; ++c) m(rows - 1, c) = m(0, c) + m(0, c);
    }
    RankProfile p = rank_profile(m);
    ASSERT_EQ(p.rank, testing::minor_rank(m));
    ASSERT_TRUE(std::is_sorted(p.pivot_rows.begin(), p.pivot_rows.end()));
    ASSERT_TRUE(std::is_sorted(p.pivot_cols.begin(), p.pivot_cols.end()));
    EXPECT_FALSE(cofactor_det(m.select_rows(p.pivot_rows).select_columns(p.pivot_cols)).is_zero());
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (std::count(p.pivot_rows.begin(), p.pivot_rows.end(), r) || std::count(p.pivot_cols.begin(), p.pivot_cols.end(), c)) continue;
        auto er = p.pivot_rows, ec = p.pivot_cols;
        er.insert(std::upper_bound(er.begin(), er.end(), r), r);
        ec.insert(std::upper_bound(ec.begin(), ec.end(), c), c);
        EXPECT_TRUE(cofactor_det(m.select_rows(er).select_columns(ec)).is_zero());
      }
    }
  }
}

TEST_P(RankProperties, InverseBothSides) {
  const FieldSpec f = GetParam();
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = testing::uniform(rng, 1, 4);
    Matrix m = testing::random_invertible(f, n, rng);
    Matrix inv = invert_matrix(m);
    EXPECT_EQ(inv * m, Matrix::identity(f, n));
    EXPECT_EQ(m * inv, Matrix::identity(f, n));
    EXPECT_EQ(inv, testing::cofactor_inverse(m));
  }
}

TEST_P(RankProperties, DeterminantMultiplicative) {
  const FieldSpec f = GetParam();
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = testing::uniform(rng, 0, 4);
    Matrix a = testing::random_matrix(f, n, n, rng), b = testing::random_matrix(f, n, n, rng);
    EXPECT_EQ(determinant(a * b), determinant(a) * determinant(b));
    EXPECT_EQ(determinant(a), cofactor_det(a));
    EXPECT_EQ(determinant(a).is_zero(), rank(a) < n);
  }
}

TEST_P(RankProperties, SolveContract) {
  const FieldSpec f = GetParam();
  Rng rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = testing::uniform(rng, 1, 5), k = testing::uniform(rng, 0, static_cast<long>(n));
    Matrix basis = testing::random_matrix(f, n, k, rng);
    if (rank(basis) != k) continue;
    Vector target = trial % 2 ? basis * testing::random_vector(f, k, rng) : testing::random_vector(f, n, rng);
    auto alpha = solve_in_column_space(basis, target);
    if (alpha) {
      EXPECT_TRUE(vectors_equal(basis * *alpha, target));
    } else {
      EXPECT_EQ(testing::minor_rank(basis.append_column(target)), k + 1);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, RankProperties, ::testing::Values(FieldSpec::rational(), FieldSpec::prime(3), FieldSpec::prime(13)),
                         testing::field_param_name);

TEST(SolveTest, Examples) {
  Matrix col = Matrix::from_ints(kQ, {{1}, {1}});
  auto alpha = solve_in_column_space(col, testing::ints(kQ, {2, 2}));
  ASSERT_TRUE(alpha);
  EXPECT_TRUE(vectors_equal(*alpha, testing::ints(kQ, {2})));
  EXPECT_FALSE(solve_in_column_space(col, testing::ints(kQ, {1, 2})));

  Matrix id = Matrix::from_ints(kQ, {{1, 0}, {0, 1}, {0, 0}});
  alpha = solve_in_column_space(id, testing::ints(kQ, {4, 5, 0}));
  ASSERT_TRUE(alpha);
  EXPECT_TRUE(vectors_equal(*alpha, testing::ints(kQ, {4, 5})));
}

TEST(SolveTest, Errors) {
  Matrix col = Matrix::from_ints(kQ, {{1}, {1}});
  try {
    solve_in_column_space(col, testing::ints(kQ, {1, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(solve_in_column_space(Matrix::from_ints(kQ, {{1, 2}, {2, 4}}), testing::ints(kQ, {1, 2})), Error);
  // k = 0: only the zero vector is in the span.
  Matrix empty(kQ, 2, 0);
  EXPECT_TRUE(solve_in_column_space(empty, testing::ints(kQ, {0, 0})));
  EXPECT_FALSE(solve_in_column_space(empty, testing::ints(kQ, {0, 1})));
}

TEST(InvertMatrixTest, Examples) {
  EXPECT_EQ(invert_matrix(Matrix::identity(kQ, 3)), Matrix::identity(kQ, 3));

  Matrix m = Matrix::from_ints(kQ, {{2, 1}, {1, 1}});
  Matrix expected = Matrix::from_ints(kQ, {{1, -1}, {-1, 2}});
  ASSERT_EQ(m * expected, Matrix::identity(kQ, 2));  // oracle: multiply back
  EXPECT_EQ(invert_matrix(m), expected);

  FieldSpec f5 = FieldSpec::prime(5);
  std::uint64_t scan = 0;
  for (std::uint64_t x = 0; x < 5; ++x) {
    if (2 * x % 5 == 1) scan = x;
  }
  EXPECT_EQ(invert_matrix(Matrix::from_ints(f5, {{2}}))(0, 0).residue(), scan);
  EXPECT_EQ(invert_matrix(Matrix(kQ, 0, 0)), Matrix(kQ, 0, 0));
}

TEST(InvertMatrixTest, Errors) {
  try {
    invert_matrix(Matrix::from_ints(kQ, {{1, 2}, {2, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
  try {
    invert_matrix(Matrix(kQ, 2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSquare);
  }
}

TEST(DeterminantTest, Examples) {
  for (std::size_t n = 0; n < 5; ++n) EXPECT_TRUE(determinant(Matrix::identity(kQ, n)).is_one());
  Matrix m = Matrix::from_ints(kQ, {{2, 1}, {1, 1}});
  ASSERT_TRUE(cofactor_det(m).is_one());
  EXPECT_TRUE(determinant(m).is_one());
  EXPECT_TRUE(determinant(Matrix(kQ, 0, 0)).is_one());
  EXPECT_EQ(determinant(Matrix::from_ints(kQ, {{0, 1}, {1, 0}})), testing::q(-1));
  EXPECT_THROW(determinant(Matrix(kQ, 1, 2)), Error);
}

TEST(ApproxTest, PartialPivotingSolve) {
  FieldSpec fa = FieldSpec::approx(1e-9);
  Matrix m(fa, 2, 2, {Scalar::from_double(fa, 1e-4), Scalar::from_double(fa, 1.0), Scalar::from_double(fa, 1.0),
                      Scalar::from_double(fa, 1.0)});
  RankProfile p = rank_profile(m);
  EXPECT_EQ(p.rank, 2u);
  Matrix inv = invert_matrix(m);
  EXPECT_EQ(inv * m, Matrix::identity(fa, 2));
  // Nearly dependent columns collapse under the epsilon.
  Matrix near(fa, 2, 2, {Scalar::from_double(fa, 1.0), Scalar::from_double(fa, 2.0), Scalar::from_double(fa, 1.0),
                         Scalar::from_double(fa, 2.0 + 1e-12)});
  EXPECT_EQ(rank(near), 1u);
}

}  // namespace
}  // namespace mapequiv
