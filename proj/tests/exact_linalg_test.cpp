#include <random>

#include <gtest/gtest.h>

#include "circuitrand/exact_linalg.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace circuitrand;

TEST(Rank, Examples) {
  EXPECT_EQ(rank(fixtures::factorial3_xt()), 4u);
  EXPECT_EQ(rank(IntMatrix{{1, 1}}), 1u);
  EXPECT_EQ(rank(IntMatrix(2, 2)), 0u);
}

TEST(Rank, LargeEntriesStayExact) {
  const Integer big = Integer(1) << 200;
  IntMatrix m{{big, big + 1}, {big + 1, big + 2}};
  // det = big(big+2) - (big+1)^2 = -1
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(determinant(m), -1);
}

TEST(KernelBasis, Examples) {
  const auto k = kernel_basis(IntMatrix{{1, 1}});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVector{1, -1}));
  EXPECT_TRUE(kernel_basis(IntMatrix::identity(3)).empty());
  EXPECT_EQ(kernel_basis(fixtures::choice2_x1t()).size(), 3u);
}

TEST(KernelBasis, RandomMatricesSatisfyInvariants) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 7;
    const IntMatrix m = oracle::random_matrix(rng, rows, cols, -3, 3);
    const auto basis = kernel_basis(m);
    EXPECT_EQ(rank(m) + basis.size(), cols);
    for (const auto& v : basis) {
      EXPECT_TRUE(is_zero(m * v));
      EXPECT_EQ(content(v), 1);
      const auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
      ASSERT_NE(first, v.end());
      EXPECT_GT(*first, 0);
    }
    // basis vectors are independent
    if (!basis.empty()) {
      EXPECT_EQ(rank(IntMatrix::from_columns(basis, cols)), basis.size());
    }
  }
}

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(IntMatrix{{1, 1}, {1, -1}}), -2);
  EXPECT_EQ(determinant(IntMatrix{{5}}), 5);
  EXPECT_EQ(determinant(IntMatrix::identity(4)), 1);
}

TEST(Determinant, NonSquareIsAnError) {
  try {
    determinant(IntMatrix{{1, 2, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSquare);
  }
}

TEST(Determinant, AgreesWithCofactorExpansion) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const IntMatrix m = oracle::random_matrix(rng, 4, 4, -3, 3);
    ASSERT_EQ(determinant(m), oracle::cofactor_det(m)) << "trial " << trial;
  }
}

TEST(RationalSolve, Examples) {
  const RationalMatrix rhs{{Rational(1, 3), Rational(2)}, {Rational(-5), Rational(7, 2)}};
  EXPECT_EQ(rational_solve(RationalMatrix::identity(2), rhs), rhs);

  RationalMatrix two = RationalMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) two(i, i) = 2;
  RationalMatrix half = RationalMatrix::identity(3);
  for (std::size_t i = 0; i < 3; ++i) half(i, i) = Rational(1, 2);
  EXPECT_EQ(rational_solve(two, RationalMatrix::identity(3)), half);
}

TEST(RationalSolve, AnovaReparametrisation) {
  const RationalMatrix xt = to_rational(fixtures::anova22_contrast_form());
  const RationalMatrix x = to_rational(fixtures::anova22_x());
  const RationalMatrix gram = xt.transpose() * xt;
  const RationalMatrix rhs = xt.transpose() * x;
  const RationalMatrix phi = rational_solve(gram, rhs);
  const Rational h(1, 2);
  const RationalMatrix expected{{h, h, h, h}, {h, -h, 0, 0}, {0, 0, h, -h}};
  EXPECT_EQ(phi, expected);
  EXPECT_EQ(gram * phi, rhs);
}

TEST(RationalSolve, SingularIsAnError) {
  try {
    rational_solve(RationalMatrix{{1, 2}, {2, 4}}, RationalMatrix::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(RationalSolve, RandomSystemsBackMultiply) {
  std::mt19937 rng(3);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix a = oracle::random_matrix(rng, 4, 4, -4, 4);
    const IntMatrix b = oracle::random_matrix(rng, 4, 2, -4, 4);
    if (determinant(a) == 0) continue;
    const RationalMatrix x = rational_solve(to_rational(a), to_rational(b));
    EXPECT_EQ(to_rational(a) * x, to_rational(b));
    ++solved;
  }
  EXPECT_GT(solved, 100);
}

TEST(PositiveSemidefinite, SmallCases) {
  EXPECT_TRUE(is_positive_semidefinite(RationalMatrix{{1, 1}, {1, 1}}));
  EXPECT_TRUE(is_positive_semidefinite(RationalMatrix{{0, 0}, {0, 2}}));
  EXPECT_FALSE(is_positive_semidefinite(RationalMatrix{{0, 1}, {1, 0}}));
  EXPECT_FALSE(is_positive_semidefinite(RationalMatrix{{1, 2}, {2, 1}}));
  EXPECT_FALSE(is_positive_semidefinite(RationalMatrix{{0, 0}, {0, -1}}));
}

TEST(PositiveSemidefinite, GramMatricesArePsd) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const RationalMatrix b = to_rational(oracle::random_matrix(rng, 3, 4, -2, 2));
    EXPECT_TRUE(is_positive_semidefinite(b.transpose() * b));
  }
}
