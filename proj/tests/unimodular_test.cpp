#include <random>

#include <gtest/gtest.h>

#include "circuitrand/circuits.hpp"
#include "circuitrand/design_catalog.hpp"
#include "circuitrand/unimodular.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace circuitrand;

namespace {

/// Every square minor in {-1, 0, 1}, by cofactor expansion.
bool oracle_tu(const IntMatrix& a) {
  for (std::size_t k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
    bool ok = true;
    oracle::for_each_subset(a.rows(), k, [&](const IndexSet& r) {
      if (!ok) return;
      oracle::for_each_subset(a.cols(), k, [&](const IndexSet& c) {
        if (!ok) return;
        const Integer d = oracle::cofactor_det(a, r, c);
        ok = d >= -1 && d <= 1;
      });
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST(TotallyUnimodular, Examples) {
  EXPECT_TRUE(is_totally_unimodular(IntMatrix{{1, 1}, {0, 1}}));
  EXPECT_FALSE(is_totally_unimodular(IntMatrix{{1, 1}, {1, -1}}));
  EXPECT_FALSE(is_totally_unimodular(IntMatrix{{2}}));
  EXPECT_TRUE(is_totally_unimodular(IntMatrix::identity(4)));
}

TEST(TotallyUnimodular, DigraphIncidence) {
  const IntMatrix a = incidence_matrix(example_digraph());
  EXPECT_EQ(a, fixtures::digraph_incidence());
  EXPECT_TRUE(is_totally_unimodular(a));
}

TEST(TotallyUnimodular, CapRefusesLargeMatrices) {
  EXPECT_EQ(square_submatrix_count(2, 2), 5);
  try {
    is_totally_unimodular(IntMatrix::identity(4), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(TotallyUnimodular, AgreesWithCofactorOracle) {
  std::mt19937 rng(12);
  int tu = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
    const IntMatrix a = oracle::random_matrix(rng, rows, cols, -1, 1);
    const bool expected = oracle_tu(a);
    ASSERT_EQ(is_totally_unimodular(a), expected) << "trial " << trial;
    tu += expected;
  }
  EXPECT_GT(tu, 20);
}

TEST(TotallyUnimodular, CircuitsOfTuMatricesAreUnitVectors) {
  const auto b = circuit_basis(fixtures::digraph_incidence());
  EXPECT_EQ(b.size(), 198u);
  for (const auto& c : b.circuits)
    for (const auto& x : c.vector) EXPECT_TRUE(x >= -1 && x <= 1);
}

TEST(TotallyUnimodular, RandomBalancedDigraphs) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_balanced_digraph(rng, 5, 10);
    EXPECT_TRUE(is_eulerian_balanced(g));
    const IntMatrix a = incidence_matrix(g);
    EXPECT_TRUE(is_totally_unimodular(a));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      Integer s = 0;
      for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c);
      EXPECT_EQ(s, 0);
    }
  }
}

TEST(DirectedGraph, BalanceMatchesZeroRowSums) {
  std::mt19937 rng(6);
  std::uniform_int_distribution<std::size_t> v(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DirectedGraph::Edge> edges;
    for (int e = 0; e < 5; ++e) {
      const auto a = v(rng), b = v(rng);
      if (a != b) edges.emplace_back(a, b);
    }
    const DirectedGraph g(4, edges);
    const IntMatrix inc = incidence_matrix(g);
    bool zero_rows = true;
    for (std::size_t r = 0; r < inc.rows(); ++r) {
      Integer s = 0;
      for (std::size_t c = 0; c < inc.cols(); ++c) s += inc(r, c);
      zero_rows = zero_rows && s == 0;
    }
    EXPECT_EQ(is_eulerian_balanced(g), zero_rows);
  }
}

TEST(DirectedGraph, RejectsBadEdges) {
  EXPECT_THROW(DirectedGraph(3, {{0, 0}}), Error);
  EXPECT_THROW(DirectedGraph(3, {{0, 3}}), Error);
}
