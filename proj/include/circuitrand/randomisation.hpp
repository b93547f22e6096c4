#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuitrand/circuits.hpp"
#include "circuitrand/contrast.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/parallel.hpp"

namespace circuitrand {

/// Block sizes in non-increasing order, e.g. {5,5,3,2}.
using Shape = std::vector<std::size_t>;

inline std::string shape_to_string(const Shape& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(s[i]);
  }
  return out;
}

/// Canonical block order: by size, then by smallest element.
inline bool block_order(const IndexSet& a, const IndexSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// A grouping of run indices (0-based) into blocks. Construction only
/// canonicalises; use is_potential() for the partition invariants.
class RandomisationSystem {
 public:
  RandomisationSystem() = default;
  RandomisationSystem(std::size_t n_runs, std::vector<IndexSet> blocks)
      : n_runs_(n_runs), blocks_(std::move(blocks)) {
    for (auto& b : blocks_) {
      std::sort(b.begin(), b.end());
      for (auto i : b)
        if (i >= n_runs_) {
          throw Error(ErrorCode::InvalidArgument, "run index " + std::to_string(i + 1) +
                                                      " exceeds run count " +
                                                      std::to_string(n_runs_));
        }
    }
    std::sort(blocks_.begin(), blocks_.end(), block_order);
  }

  /// The single block holding every run.
  static RandomisationSystem full(std::size_t n_runs) {
    IndexSet all(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i) all[i] = i;
    return RandomisationSystem(n_runs, {std::move(all)});
  }

  std::size_t n_runs() const { return n_runs_; }
  const std::vector<IndexSet>& blocks() const { return blocks_; }

  /// Disjoint, exhaustive, every block of size >= 2.
  bool is_potential() const {
    std::vector<bool> seen(n_runs_, false);
    std::size_t covered = 0;
    for (const auto& b : blocks_) {
      if (b.size() < 2) return false;
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (k > 0 && b[k] == b[k - 1]) return false;
        if (seen[b[k]]) return false;
        seen[b[k]] = true;
        ++covered;
      }
    }
    return covered == n_runs_;
  }

  Shape shape() const {
    Shape s;
    for (const auto& b : blocks_) s.push_back(b.size());
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }

  /// 0/1 indicator of block h.
  IntVector indicator(std::size_t h) const {
    IntVector z(n_runs_);
    for (auto i : blocks_.at(h)) z[i] = 1;
    return z;
  }

  /// n_runs x k matrix of block indicators.
  IntMatrix indicator_matrix() const {
    IntMatrix z(n_runs_, blocks_.size());
    for (std::size_t h = 0; h < blocks_.size(); ++h)
      for (auto i : blocks_[h]) z(i, h) = 1;
    return z;
  }

  friend bool operator==(const RandomisationSystem&, const RandomisationSystem&) = default;
  friend auto operator<=>(const RandomisationSystem& a, const RandomisationSystem& b) {
    if (a.n_runs_ != b.n_runs_) return a.n_runs_ <=> b.n_runs_;
    return a.blocks_ <=> b.blocks_;
  }

 private:
  std::size_t n_runs_ = 0;
  std::vector<IndexSet> blocks_;
};

/// Catalog order: larger shapes first (lexicographically on the sorted block
/// sizes), then by blocks.
inline bool catalog_order(const RandomisationSystem& a, const RandomisationSystem& b) {
  const Shape sa = a.shape(), sb = b.shape();
  if (sa != sb) return sa > sb;
  return a.blocks() < b.blocks();
}

/// Inner products of a block indicator with each contrast column.
inline IntVector block_contrast_products(const ContrastModel& m, std::span<const std::size_t> block) {
  IntVector out(m.x1.cols());
  for (std::size_t c = 0; c < m.x1.cols(); ++c)
    for (auto i : block) out[c] += m.x1(i, c);
  return out;
}

struct BlockViolation {
  std::size_t block;
  IntVector products;
};

inline void require_same_runs(const ContrastModel& m, const RandomisationSystem& r) {
  if (r.n_runs() != m.n_runs) {
    throw Error(ErrorCode::DimensionMismatch, "system has " + std::to_string(r.n_runs()) +
                                                  " runs, model has " + std::to_string(m.n_runs));
  }
}

/// First block whose indicator is not orthogonal to x1, if any.
inline std::optional<BlockViolation> first_violation(const ContrastModel& m,
                                                     const RandomisationSystem& r) {
  require_same_runs(m, r);
  for (std::size_t h = 0; h < r.blocks().size(); ++h) {
    auto p = block_contrast_products(m, r.blocks()[h]);
    if (!is_zero(p)) return BlockViolation{h, std::move(p)};
  }
  return std::nullopt;
}

inline bool is_valid_randomisation(const ContrastModel& m, const RandomisationSystem& r) {
  require_same_runs(m, r);
  return r.is_potential() && !first_violation(m, r).has_value();
}

/// Binary nonnegative circuits of x1^T.
inline std::vector<Circuit> randomisation_vectors(const ContrastModel& m) {
  return binary_circuits(circuit_basis(m.x1.transpose()));
}

struct SchemeCatalog {
  ContrastModel model;
  std::vector<Circuit> vectors;
  std::vector<RandomisationSystem> systems;
  std::map<Shape, std::size_t, std::greater<>> shape_counts;
  /// (coarser, finer) index pairs of the refinement covering relation.
  std::vector<std::pair<std::size_t, std::size_t>> refinement_edges;
};

struct EnumerationOptions {
  bool include_full = false;
};

inline bool refines(const RandomisationSystem& finer, const RandomisationSystem& coarser) {
  if (finer.n_runs() != coarser.n_runs())
    throw Error(ErrorCode::DimensionMismatch, "systems have different run counts");
  for (const auto& b : finer.blocks()) {
    const bool inside = std::any_of(coarser.blocks().begin(), coarser.blocks().end(),
                                    [&](const IndexSet& c) {
                                      return std::includes(c.begin(), c.end(), b.begin(), b.end());
                                    });
    if (!inside) return false;
  }
  return true;
}

inline std::vector<IndexSet> shared_blocks(const RandomisationSystem& a, const RandomisationSystem& b) {
  if (a.n_runs() != b.n_runs())
    throw Error(ErrorCode::DimensionMismatch, "systems have different run counts");
  std::vector<IndexSet> out;
  for (const auto& x : a.blocks())
    if (std::find(b.blocks().begin(), b.blocks().end(), x) != b.blocks().end()) out.push_back(x);
  return out;
}

namespace detail {

/// Algorithm X over bitmask subsets: every way to partition `universe` into
/// members of `sets`. The branching element is the one with the fewest
/// remaining candidates; first-level branches are explored in parallel.
class ExactCover {
 public:
  ExactCover(std::size_t n, std::vector<SupportMask> sets) : sets_(std::move(sets)), by_element_(n) {
    for (std::size_t s = 0; s < sets_.size(); ++s)
      for (auto e : indices_of(sets_[s])) by_element_[e].push_back(s);
  }

  std::vector<std::vector<SupportMask>> solve(SupportMask universe) const {
    std::vector<std::vector<SupportMask>> out;
    if (universe == 0) return {{}};
    const auto top = candidates(universe);
    if (!top) return out;
    std::vector<std::vector<std::vector<SupportMask>>> partial(top->size());
    parallel_for(top->size(), [&](std::size_t b) {
      std::vector<SupportMask> chosen{sets_[(*top)[b]]};
      search(universe & ~sets_[(*top)[b]], chosen, partial[b]);
    });
    for (auto& p : partial) std::move(p.begin(), p.end(), std::back_inserter(out));
    return out;
  }

 private:
  std::optional<std::vector<std::size_t>> candidates(SupportMask uncovered) const {
    std::optional<std::vector<std::size_t>> best;
    for (auto e : indices_of(uncovered)) {
      std::vector<std::size_t> c;
      for (auto s : by_element_[e])
        if ((sets_[s] & ~uncovered) == 0) c.push_back(s);
      if (!best || c.size() < best->size()) best = std::move(c);
      if (best->empty()) return std::nullopt;
    }
    return best;
  }

  void search(SupportMask uncovered, std::vector<SupportMask>& chosen,
              std::vector<std::vector<SupportMask>>& out) const {
    if (uncovered == 0) {
      out.push_back(chosen);
      return;
    }
    const auto c = candidates(uncovered);
    if (!c) return;
    for (auto s : *c) {
      chosen.push_back(sets_[s]);
      search(uncovered & ~sets_[s], chosen, out);
      chosen.pop_back();
    }
  }

  std::vector<SupportMask> sets_;
  std::vector<std::vector<std::size_t>> by_element_;
};

}  // namespace detail

/// Every exact cover of `n` runs by the given blocks, as canonical systems in
/// catalog order.
inline std::vector<RandomisationSystem> exact_covers(std::size_t n, std::vector<SupportMask> blocks) {
  if (n > kMaxColumns) throw Error(ErrorCode::OutOfBudget, "exact cover supports at most 64 runs");
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  const SupportMask universe = n == 64 ? ~SupportMask{0} : (SupportMask{1} << n) - 1;
  std::vector<RandomisationSystem> systems;
  for (const auto& cover : detail::ExactCover(n, std::move(blocks)).solve(universe)) {
    std::vector<IndexSet> bl;
    for (auto m : cover) bl.push_back(indices_of(m));
    systems.emplace_back(n, std::move(bl));
  }
  std::sort(systems.begin(), systems.end(), catalog_order);
  return systems;
}

inline std::vector<std::pair<std::size_t, std::size_t>> refinement_covering(
    const std::vector<RandomisationSystem>& systems) {
  const std::size_t s = systems.size();
  std::vector<std::vector<bool>> finer(s, std::vector<bool>(s, false));  // finer[i][j]: j refines i
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (i != j) finer[i][j] = refines(systems[j], systems[i]);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      if (!finer[i][j]) continue;
      bool covered = true;
      for (std::size_t k = 0; k < s && covered; ++k)
        if (k != i && k != j && finer[i][k] && finer[k][j]) covered = false;
      if (covered) edges.emplace_back(i, j);
    }
  return edges;
}

/// All systems whose blocks are supports of binary nonnegative circuits of
/// x1^T. The single-block system is left out unless requested.
inline SchemeCatalog enumerate_circuit_randomisations(const ContrastModel& m,
                                                      EnumerationOptions options = {}) {
  SchemeCatalog cat;
  cat.model = m;
  cat.vectors = randomisation_vectors(m);
  const std::size_t n = m.n_runs;

  std::vector<SupportMask> supports;
  for (const auto& c : cat.vectors)
    if (c.support.size() >= 2) supports.push_back(c.mask());

  const RandomisationSystem full = RandomisationSystem::full(n);
  for (auto& s : exact_covers(n, std::move(supports)))
    if (!(s == full)) cat.systems.push_back(std::move(s));
  if (options.include_full && n >= 2) {
    cat.systems.push_back(full);
    std::sort(cat.systems.begin(), cat.systems.end(), catalog_order);
  }

  for (const auto& s : cat.systems) ++cat.shape_counts[s.shape()];
  cat.refinement_edges = refinement_covering(cat.systems);
  return cat;
}

/// True iff some binary nonnegative circuit support lies strictly inside supp(v).
inline bool is_decomposable(const ContrastModel& m, std::span<const Integer> v) {
  if (v.size() != m.n_runs) throw Error(ErrorCode::DimensionMismatch, "vector length vs run count");
  for (const auto& x : v)
    if (x != 0 && x != 1) throw Error(ErrorCode::InvalidArgument, "vector is not binary");
  if (!is_zero(m.x1.transpose() * v)) {
    throw Error(ErrorCode::NotARandomisationVector, "vector is not orthogonal to the contrasts");
  }
  IndexSet supp;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) supp.push_back(i);
  const SupportMask sv = mask_of(supp);
  for (const auto& c : randomisation_vectors(m)) {
    const SupportMask sc = c.mask();
    if (sc != sv && (sc & ~sv) == 0) return true;
  }
  return false;
}

}  // namespace circuitrand
