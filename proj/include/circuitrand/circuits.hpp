#pragma once

// Circuit bases: the support-minimal primitive integer vectors in ker(A).

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/parallel.hpp"

namespace circuitrand {

using IndexSet = std::vector<std::size_t>;

/// Bitmask over at most 64 column indices.
using SupportMask = std::uint64_t;

inline constexpr std::size_t kMaxColumns = 64;

inline SupportMask mask_of(std::span<const std::size_t> indices) {
  SupportMask m = 0;
  for (auto i : indices) m |= SupportMask{1} << i;
  return m;
}

inline IndexSet indices_of(SupportMask m) {
  IndexSet out;
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

struct Circuit {
  IntVector vector;
  IndexSet support;
  IndexSet positive_support;
  IndexSet negative_support;

  Circuit() = default;
  explicit Circuit(IntVector v) : vector(std::move(v)) {
    for (std::size_t i = 0; i < vector.size(); ++i) {
      if (vector[i] == 0) continue;
      support.push_back(i);
      (vector[i] > 0 ? positive_support : negative_support).push_back(i);
    }
  }

  SupportMask mask() const { return mask_of(support); }

  /// All entries share one sign.
  bool is_nonnegative_up_to_sign() const {
    return positive_support.empty() || negative_support.empty();
  }

  /// Entries in {0,1} once re-signed to be nonnegative.
  bool is_binary() const {
    if (!is_nonnegative_up_to_sign()) return false;
    return std::all_of(vector.begin(), vector.end(),
                       [](const Integer& x) { return x == 0 || abs(x) == 1; });
  }

  Circuit negated() const {
    IntVector v = vector;
    for (auto& x : v) x = -x;
    return Circuit(std::move(v));
  }

  friend bool operator==(const Circuit& a, const Circuit& b) { return a.vector == b.vector; }
};

/// Order used for circuit bases: support (as a sorted index list), then vector.
inline bool support_order(const Circuit& a, const Circuit& b) {
  if (a.support != b.support) return a.support < b.support;
  return a.vector < b.vector;
}

/// Plain lexicographic order on the vectors, the order 4ti2 prints.
inline bool vector_order(const Circuit& a, const Circuit& b) { return a.vector < b.vector; }

struct CircuitBasis {
  IntMatrix matrix;
  std::vector<Circuit> circuits;

  std::size_t size() const { return circuits.size(); }
  bool empty() const { return circuits.empty(); }
};

namespace detail {

inline std::vector<SupportMask> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<SupportMask> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(mask_of(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Upper bound on the number of column subsets examined at a single size.
inline constexpr std::uint64_t kMaxSubsetsPerLevel = 50'000'000;

/// Computes every circuit of `a`.
///
/// Column subsets are visited by increasing size up to rank(a)+1. A subset
/// that contains the support of a smaller circuit is skipped; otherwise it
/// yields a circuit exactly when its submatrix has nullity one and the kernel
/// generator uses every column. Subsets of one size are independent of each
/// other, so each level is scanned in parallel and merged in subset order.
inline CircuitBasis circuit_basis(const IntMatrix& a) {
  const std::size_t n = a.cols();
  if (n > kMaxColumns) {
    throw Error(ErrorCode::OutOfBudget,
                "circuit enumeration supports at most " + std::to_string(kMaxColumns) + " columns");
  }
  CircuitBasis basis{a, {}};
  const std::size_t r = rank(a);
  std::vector<SupportMask> found;

  for (std::size_t k = 1; k <= std::min(r + 1, n); ++k) {
    if (detail::binomial(n, k) > kMaxSubsetsPerLevel) {
      throw Error(ErrorCode::OutOfBudget, "too many column subsets of size " + std::to_string(k));
    }
    const auto subsets = detail::subsets_of_size(n, k);
    std::vector<std::optional<IntVector>> hits(subsets.size());
    parallel_for(subsets.size(), [&](std::size_t s) {
      const SupportMask cols = subsets[s];
      for (auto f : found)
        if ((f & ~cols) == 0) return;
      const IndexSet idx = indices_of(cols);
      const IntMatrix sub = a.select_columns(idx);
      if (rank(sub) + 1 != k) return;
      const auto ker = kernel_basis(sub);
      const IntVector& g = ker.front();
      if (std::any_of(g.begin(), g.end(), [](const Integer& x) { return x == 0; })) return;
      IntVector full(n);
      for (std::size_t i = 0; i < k; ++i) full[idx[i]] = g[i];
      hits[s] = std::move(full);
    });
    for (auto& h : hits) {
      if (!h) continue;
      Circuit c(std::move(*h));
      found.push_back(c.mask());
      basis.circuits.push_back(std::move(c));
    }
  }
  std::sort(basis.circuits.begin(), basis.circuits.end(), support_order);
  return basis;
}

/// Circuits with entries of one sign, re-signed to be nonnegative, in
/// lexicographic vector order.
inline std::vector<Circuit> nonnegative_circuits(const CircuitBasis& b) {
  std::vector<Circuit> out;
  for (const auto& c : b.circuits) {
    if (!c.is_nonnegative_up_to_sign()) continue;
    out.push_back(c.negative_support.empty() ? c : c.negated());
  }
  std::sort(out.begin(), out.end(), vector_order);
  return out;
}

/// Nonnegative circuits whose entries are all 0 or 1.
inline std::vector<Circuit> binary_circuits(const CircuitBasis& b) {
  auto out = nonnegative_circuits(b);
  std::erase_if(out, [](const Circuit& c) { return !c.is_binary(); });
  return out;
}

/// One term of a conformal decomposition: weight * sign * circuit.vector.
struct ConformalTerm {
  Rational weight;
  Circuit circuit;
  int sign = 1;

  RationalVector signed_vector() const {
    RationalVector v(circuit.vector.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rational(circuit.vector[i] * sign);
    return v;
  }
};

inline bool is_conformal(std::span<const Integer> u, std::span<const Rational> v) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    if (u[i] > 0 ? v[i] <= 0 : v[i] >= 0) return false;
  }
  return true;
}

/// Writes v as a positive rational combination of circuits conformal with v,
/// using linearly independent circuits (so at most dim ker(A) terms).
///
/// Greedy conformal reduction finds some decomposition; dependent terms are
/// then eliminated Caratheodory-style, which keeps weights positive and the
/// same circuits.
inline std::vector<ConformalTerm> conformal_decompose(std::span<const Integer> v,
                                                      const CircuitBasis& b) {
  const IntMatrix& a = b.matrix;
  if (v.size() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "vector length vs matrix columns");
  if (!is_zero(a * v)) throw Error(ErrorCode::NotInKernel, "vector is not in the kernel of the matrix");

  std::vector<ConformalTerm> terms;
  RationalVector rest = to_rational(v);
  while (!is_zero(rest)) {
    bool progressed = false;
    for (const auto& c : b.circuits) {
      for (int sign : {1, -1}) {
        IntVector u = c.vector;
        if (sign < 0)
          for (auto& x : u) x = -x;
        if (!is_conformal(u, rest)) continue;
        std::optional<Rational> step;
        for (auto i : c.support) {
          Rational ratio = rest[i] / Rational(u[i]);
          if (!step || ratio < *step) step = ratio;
        }
        for (auto i : c.support) rest[i] -= *step * Rational(u[i]);
        terms.push_back({*step, c, sign});
        progressed = true;
        break;
      }
      if (progressed) break;
    }
    if (!progressed) {
      throw Error(ErrorCode::InvalidArgument,
                  "no conformal circuit found; the basis does not belong to this matrix");
    }
  }

  // Caratheodory reduction over linearly dependent terms.
  while (terms.size() > 1) {
    std::vector<IntVector> cols;
    for (const auto& t : terms) {
      IntVector u = t.circuit.vector;
      if (t.sign < 0)
        for (auto& x : u) x = -x;
      cols.push_back(std::move(u));
    }
    const auto dep = kernel_basis(IntMatrix::from_columns(cols, a.cols()));
    if (dep.empty()) break;
    const IntVector& mu = dep.front();  // first nonzero entry is positive
    std::optional<Rational> shift;
    for (std::size_t h = 0; h < terms.size(); ++h) {
      if (mu[h] <= 0) continue;
      Rational ratio = terms[h].weight / Rational(mu[h]);
      if (!shift || ratio < *shift) shift = ratio;
    }
    for (std::size_t h = 0; h < terms.size(); ++h) terms[h].weight -= *shift * Rational(mu[h]);
    std::erase_if(terms, [](const ConformalTerm& t) { return t.weight == 0; });
  }
  return terms;
}

}  // namespace circuitrand
