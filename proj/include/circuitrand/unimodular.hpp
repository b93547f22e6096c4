#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circuitrand/circuits.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"

namespace circuitrand {

/// Directed multigraph on vertices 0..n_vertices-1. Parallel edges allowed,
/// self-loops not.
class DirectedGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  DirectedGraph() = default;
  DirectedGraph(std::size_t n_vertices, std::vector<Edge> edges)
      : n_vertices_(n_vertices), edges_(std::move(edges)) {
    for (const auto& [tail, head] : edges_) {
      if (tail >= n_vertices_ || head >= n_vertices_)
        throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
      if (tail == head)
        throw Error(ErrorCode::InvalidArgument, "self-loop at vertex " + std::to_string(tail + 1));
    }
  }

  std::size_t n_vertices() const { return n_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t n_vertices_ = 0;
  std::vector<Edge> edges_;
};

/// |V| x |E|: +1 at the tail, -1 at the head of every edge column.
inline IntMatrix incidence_matrix(const DirectedGraph& g) {
  IntMatrix a(g.n_vertices(), g.edges().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    a(g.edges()[e].first, e) = 1;
    a(g.edges()[e].second, e) = -1;
  }
  return a;
}

/// In-degree equals out-degree at every vertex.
inline bool is_eulerian_balanced(const DirectedGraph& g) {
  std::vector<long long> net(g.n_vertices(), 0);
  for (const auto& [tail, head] : g.edges()) {
    ++net[tail];
    --net[head];
  }
  for (auto d : net)
    if (d != 0) return false;
  return true;
}

/// Number of square submatrices of an m x n matrix.
inline Integer square_submatrix_count(std::size_t m, std::size_t n) {
  Integer total = 0;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    Integer a = 1, b = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      a = a * (m - k + i) / i;
      b = b * (n - k + i) / i;
    }
    total += a * b;
  }
  return total;
}

inline constexpr std::uint64_t kDefaultTuCap = 50'000'000;

/// Brute-force total unimodularity test.
///
/// Entries outside {-1,0,1} reject immediately. Otherwise minors are built by
/// increasing size, each k x k determinant expanded along its first row from
/// the memoised (k-1) x (k-1) minors. Once all smaller minors are known to be
/// in {-1,0,1}, every expansion stays within machine integers.
inline bool is_totally_unimodular(const IntMatrix& a, std::uint64_t size_cap = kDefaultTuCap) {
  for (const auto& x : a.data())
    if (x < -1 || x > 1) return false;
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) return true;
  const Integer count = square_submatrix_count(m, n);
  if (count > size_cap) {
    throw Error(ErrorCode::TooLarge, "matrix has " + count.str() + " square submatrices, cap is " +
                                         std::to_string(size_cap));
  }
  if (m > kMaxColumns || n > kMaxColumns)
    throw Error(ErrorCode::TooLarge, "dimensions beyond 64 are not supported");

  auto key = [](SupportMask rows, SupportMask cols) {
    // Minors are memoised per level; pairing row and column masks.
    return std::pair<SupportMask, SupportMask>(rows, cols);
  };
  struct PairHash {
    std::size_t operator()(const std::pair<SupportMask, SupportMask>& p) const noexcept {
      return std::hash<SupportMask>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
    }
  };
  using Level = std::unordered_map<std::pair<SupportMask, SupportMask>, int, PairHash>;

  std::vector<long long> entry(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) entry[i * n + j] = static_cast<long long>(a(i, j));

  Level prev;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      prev[key(SupportMask{1} << i, SupportMask{1} << j)] = static_cast<int>(entry[i * n + j]);

  for (std::size_t k = 2; k <= std::min(m, n); ++k) {
    Level cur;
    const auto row_sets = detail::subsets_of_size(m, k);
    const auto col_sets = detail::subsets_of_size(n, k);
    for (auto rows : row_sets) {
      const std::size_t r0 = static_cast<std::size_t>(std::countr_zero(rows));
      const SupportMask rest_rows = rows & (rows - 1);
      for (auto cols : col_sets) {
        long long det = 0;
        int sign = 1;
        for (SupportMask c = cols; c != 0; c &= c - 1) {
          const std::size_t j = static_cast<std::size_t>(std::countr_zero(c));
          const long long v = entry[r0 * n + j];
          if (v != 0) det += sign * v * prev.at(key(rest_rows, cols & ~(SupportMask{1} << j)));
          sign = -sign;
        }
        if (det < -1 || det > 1) return false;
        cur[key(rows, cols)] = static_cast<int>(det);
      }
    }
    prev = std::move(cur);
  }
  return true;
}

}  // namespace circuitrand
