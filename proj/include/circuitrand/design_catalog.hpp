#pragma once

// Generators for the design families: two-level factorials, two-way ANOVA,
// k-out-of-2k choice designs, Latin-square blockings and digraph designs.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "circuitrand/contrast.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/randomisation.hpp"
#include "circuitrand/unimodular.hpp"

namespace circuitrand {

inline constexpr std::size_t kMaxFactorialFactors = 12;
inline constexpr std::size_t kMaxChoiceRuns = 65536;

/// 2^k runs, columns [1, A, B, ...] in +/-1 coding, first factor slowest.
inline DesignModel factorial_two_level(std::size_t k) {
  if (k < 1 || k > kMaxFactorialFactors) {
    throw Error(ErrorCode::OutOfBudget,
                "factorial needs 1 <= k <= " + std::to_string(kMaxFactorialFactors) + ", got " +
                    std::to_string(k));
  }
  const std::size_t n = std::size_t{1} << k;
  IntMatrix x(n, k + 1);
  std::vector<std::string> runs(n), params{"1"};
  for (std::size_t f = 0; f < k; ++f) params.emplace_back(1, static_cast<char>('A' + f));
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = 1;
    for (std::size_t f = 0; f < k; ++f) {
      const bool low = (i >> (k - 1 - f)) & 1U;
      x(i, f + 1) = low ? -1 : 1;
      runs[i] += low ? '-' : '+';
    }
  }
  return DesignModel(std::move(x), std::move(runs), std::move(params));
}

/// Additive I x J model in indicator form: one row per cell (row-major), columns
/// alpha_1..alpha_I then beta_1..beta_J.
inline DesignModel anova_two_way(std::size_t levels_a, std::size_t levels_b) {
  if (levels_a < 2 || levels_b < 2)
    throw Error(ErrorCode::InvalidArgument, "two-way ANOVA needs I >= 2 and J >= 2");
  IntMatrix x(levels_a * levels_b, levels_a + levels_b);
  std::vector<std::string> runs, params;
  for (std::size_t i = 0; i < levels_a; ++i) params.push_back("alpha" + std::to_string(i + 1));
  for (std::size_t j = 0; j < levels_b; ++j) params.push_back("beta" + std::to_string(j + 1));
  for (std::size_t i = 0; i < levels_a; ++i)
    for (std::size_t j = 0; j < levels_b; ++j) {
      const std::size_t r = i * levels_b + j;
      x(r, i) = 1;
      x(r, levels_a + j) = 1;
      runs.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  return DesignModel(std::move(x), std::move(runs), std::move(params));
}

/// Lexicographically ordered k-subsets of {0..n-1}.
inline std::vector<IndexSet> k_subsets(std::size_t n, std::size_t k) {
  std::vector<IndexSet> out;
  for (auto m : detail::subsets_of_size(n, k)) out.push_back(indices_of(m));
  std::sort(out.begin(), out.end());
  return out;
}

/// Runs are the k-subsets of 2k attributes in lexicographic order; the model
/// is additive in attribute effects.
inline DesignModel choice_k_of_2k(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "choice design needs k >= 2");
  if (k > 31 || detail::binomial(2 * k, k) > kMaxChoiceRuns) {
    throw Error(ErrorCode::OutOfBudget,
                "choice design with k = " + std::to_string(k) + " exceeds " +
                    std::to_string(kMaxChoiceRuns) + " runs");
  }
  const auto subsets = k_subsets(2 * k, k);
  IntMatrix x(subsets.size(), 2 * k);
  std::vector<std::string> runs, params;
  for (std::size_t a = 0; a < 2 * k; ++a) params.push_back("a" + std::to_string(a + 1));
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    std::string label = "{";
    for (std::size_t t = 0; t < k; ++t) {
      x(r, subsets[r][t]) = 1;
      label += (t ? "," : "") + std::to_string(subsets[r][t] + 1);
    }
    runs.push_back(label + "}");
  }
  return DesignModel(std::move(x), std::move(runs), std::move(params));
}

/// Pairs every run of choice_k_of_2k(k) with the run offering the complement.
inline RandomisationSystem complementary_pairs(std::size_t k) {
  const auto subsets = k_subsets(2 * k, k);
  const SupportMask all = (SupportMask{1} << (2 * k)) - 1;
  std::vector<IndexSet> blocks;
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    const IndexSet other = indices_of(all & ~mask_of(subsets[r]));
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(subsets.begin(), subsets.end(), other) - subsets.begin());
    if (r < pos) blocks.push_back({r, pos});
  }
  return RandomisationSystem(subsets.size(), std::move(blocks));
}

class LatinSquare {
 public:
  LatinSquare(std::size_t order, std::vector<std::size_t> cells)
      : order_(order), cells_(std::move(cells)) {
    if (order_ == 0 || cells_.size() != order_ * order_)
      throw Error(ErrorCode::InvalidArgument, "Latin square needs order^2 cells");
    for (std::size_t i = 0; i < order_; ++i) {
      std::vector<bool> in_row(order_, false), in_col(order_, false);
      for (std::size_t j = 0; j < order_; ++j) {
        const auto r = cells_[i * order_ + j], c = cells_[j * order_ + i];
        if (r >= order_ || c >= order_ || in_row[r] || in_col[c])
          throw Error(ErrorCode::InvalidArgument, "not a Latin square");
        in_row[r] = in_col[c] = true;
      }
    }
  }

  std::size_t order() const { return order_; }
  std::size_t at(std::size_t row, std::size_t col) const { return cells_[row * order_ + col]; }

 private:
  std::size_t order_;
  std::vector<std::size_t> cells_;
};

/// The two mutually orthogonal squares of order 3: ABC/CAB/BCA and abc/bca/cab.
inline LatinSquare builtin_latin_square(int which) {
  if (which == 1) return LatinSquare(3, {0, 1, 2, 2, 0, 1, 1, 2, 0});
  if (which == 2) return LatinSquare(3, {0, 1, 2, 1, 2, 0, 2, 0, 1});
  throw Error(ErrorCode::InvalidArgument, "built-in Latin squares are 1 and 2");
}

/// Cells sharing a symbol form a block; cells are numbered row by row.
inline RandomisationSystem latin_square_blocks(const LatinSquare& sq) {
  const std::size_t I = sq.order();
  std::vector<IndexSet> blocks(I);
  for (std::size_t r = 0; r < I; ++r)
    for (std::size_t c = 0; c < I; ++c) blocks[sq.at(r, c)].push_back(r * I + c);
  return RandomisationSystem(I * I, std::move(blocks));
}

/// Runs are edges; the design is [j : incidence^T].
inline DesignModel digraph_design(const DirectedGraph& g) {
  if (!is_eulerian_balanced(g)) {
    throw Error(ErrorCode::NotBalanced,
                "in-degree differs from out-degree at some vertex; the incidence matrix is not "
                "orthogonal to the all-ones vector");
  }
  const IntMatrix x = ones_column(g.edges().size()).hstack(incidence_matrix(g).transpose());
  std::vector<std::string> runs, params{"1"};
  for (const auto& [t, h] : g.edges()) runs.push_back(std::to_string(t + 1) + "->" + std::to_string(h + 1));
  for (std::size_t v = 0; v < g.n_vertices(); ++v) params.push_back("v" + std::to_string(v + 1));
  return DesignModel(x, std::move(runs), std::move(params));
}

/// The 5-vertex, 15-edge balanced digraph used as the worked TU example.
inline DirectedGraph example_digraph() {
  const int pairs[15][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5},
                            {3, 1}, {4, 5}, {4, 1}, {4, 2}, {5, 1}, {5, 2}, {5, 3}};
  std::vector<DirectedGraph::Edge> edges;
  for (const auto& p : pairs)
    edges.emplace_back(static_cast<std::size_t>(p[0] - 1), static_cast<std::size_t>(p[1] - 1));
  return DirectedGraph(5, std::move(edges));
}

}  // namespace circuitrand
