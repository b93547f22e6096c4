#pragma once

// Least-squares consequences of blocking, evaluated in exact arithmetic,
// plus a Monte Carlo illustration for the two-treatment experiment.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "circuitrand/contrast.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/parallel.hpp"
#include "circuitrand/randomisation.hpp"

namespace circuitrand {

struct ContrastEstimate {
  Rational intercept;
  RationalVector contrasts;

  friend bool operator==(const ContrastEstimate&, const ContrastEstimate&) = default;
};

/// Responses generated from known parameters and block offsets.
struct ExperimentOutcome {
  RationalVector y;
  RationalVector true_theta;
  RationalVector block_effects;
};

enum class CovarianceOrdering { equal, proper_dominates, incomparable };

inline std::string_view to_string(CovarianceOrdering o) {
  switch (o) {
    case CovarianceOrdering::equal: return "equal";
    case CovarianceOrdering::proper_dominates: return "proper_dominates";
    case CovarianceOrdering::incomparable: return "incomparable";
  }
  return "unknown";
}

struct EstimateReport {
  RationalVector phi_hat;
  RationalVector bias;
  bool invariant = true;
  CovarianceOrdering covariance_ordering = CovarianceOrdering::equal;
};

namespace detail {

inline bool columns_orthogonal(const IntMatrix& x1) {
  for (std::size_t a = 0; a < x1.cols(); ++a)
    for (std::size_t b = a + 1; b < x1.cols(); ++b) {
      Integer s = 0;
      for (std::size_t i = 0; i < x1.rows(); ++i) s += x1(i, a) * x1(i, b);
      if (s != 0) return false;
    }
  return true;
}

inline RationalMatrix column_matrix(std::span<const Rational> v) {
  return RationalMatrix(v.size(), 1, RationalVector(v.begin(), v.end()));
}

/// (X'X)^{-1} X' applied to the columns of rhs, for X = [j : x1].
inline RationalMatrix contrast_form_solve(const ContrastModel& m, const RationalMatrix& rhs) {
  const RationalMatrix xt = to_rational(m.contrast_form());
  const RationalMatrix xtt = xt.transpose();
  return rational_solve(xtt * xt, xtt * rhs);
}

}  // namespace detail

/// Exact least-squares estimate under [j : x1].
inline ContrastEstimate lse_contrast_estimates(const ContrastModel& m, std::span<const Rational> y) {
  if (y.size() != m.n_runs) throw Error(ErrorCode::DimensionMismatch, "response length vs run count");
  ContrastEstimate est;
  est.intercept = std::accumulate(y.begin(), y.end(), Rational(0)) / Rational(m.n_runs);
  if (detail::columns_orthogonal(m.x1)) {
    // j'x1 = 0 too, so the normal equations are diagonal.
    for (std::size_t h = 0; h < m.x1.cols(); ++h) {
      Rational num = 0;
      Integer den = 0;
      for (std::size_t i = 0; i < m.n_runs; ++i) {
        num += Rational(m.x1(i, h)) * y[i];
        den += m.x1(i, h) * m.x1(i, h);
      }
      est.contrasts.push_back(num / Rational(den));
    }
    return est;
  }
  const RationalMatrix sol = detail::contrast_form_solve(m, detail::column_matrix(y));
  est.intercept = sol(0, 0);
  for (std::size_t h = 1; h < sol.rows(); ++h) est.contrasts.push_back(sol(h, 0));
  return est;
}

/// y + sum_h gamma_h z_h for the blocks of r.
inline RationalVector shift_by_blocks(const RandomisationSystem& r, std::span<const Rational> y,
                                      std::span<const Rational> gamma) {
  if (y.size() != r.n_runs()) throw Error(ErrorCode::DimensionMismatch, "response length vs run count");
  if (gamma.size() != r.blocks().size())
    throw Error(ErrorCode::DimensionMismatch, "one block offset per block is required");
  RationalVector out(y.begin(), y.end());
  for (std::size_t h = 0; h < gamma.size(); ++h)
    for (auto i : r.blocks()[h]) out[i] += gamma[h];
  return out;
}

inline ExperimentOutcome make_outcome(const ContrastModel& m, const RandomisationSystem& r,
                                      RationalVector theta, RationalVector gamma) {
  if (theta.size() != m.n_contrasts() + 1)
    throw Error(ErrorCode::DimensionMismatch, "theta needs intercept plus one entry per contrast");
  const RationalMatrix xt = to_rational(m.contrast_form());
  const RationalVector mean = xt * theta;
  return {shift_by_blocks(r, mean, gamma), std::move(theta), std::move(gamma)};
}

/// Compares contrast estimates before and after adding block offsets. When
/// require_valid is set, an invalid system raises InvalidSystem instead of
/// reporting the comparison.
inline bool block_shift_invariance(const ContrastModel& m, const RandomisationSystem& r,
                                   std::span<const Rational> y, std::span<const Rational> gamma,
                                   bool require_valid = false) {
  if (require_valid && !is_valid_randomisation(m, r))
    throw Error(ErrorCode::InvalidSystem, "blocks are not a valid randomisation for this model");
  const auto shifted = shift_by_blocks(r, y, gamma);
  return lse_contrast_estimates(m, y).contrasts == lse_contrast_estimates(m, shifted).contrasts;
}

namespace detail {

inline void require_indicators(const ContrastModel& m, const IntMatrix& z) {
  if (z.rows() != m.n_runs) throw Error(ErrorCode::DimensionMismatch, "indicator rows vs run count");
  for (const auto& v : z.data())
    if (v != 0 && v != 1) throw Error(ErrorCode::InvalidArgument, "block indicators must be 0/1");
}

}  // namespace detail

/// Bias of the contrast estimates that ignore blocks: the contrast rows of
/// (X'X)^{-1} X' Z gamma.
inline RationalVector naive_block_bias(const ContrastModel& m, const IntMatrix& z,
                                       std::span<const Rational> gamma) {
  detail::require_indicators(m, z);
  if (gamma.size() != z.cols()) throw Error(ErrorCode::DimensionMismatch, "gamma length vs block count");
  const RationalVector shift = to_rational(z) * gamma;
  const RationalMatrix sol = detail::contrast_form_solve(m, detail::column_matrix(shift));
  RationalVector bias;
  for (std::size_t h = 1; h < sol.rows(); ++h) bias.push_back(sol(h, 0));
  return bias;
}

/// Information matrices (inverse covariances up to sigma^2) of the contrast
/// estimates with and without block parameters.
struct CovarianceDetail {
  CovarianceOrdering ordering = CovarianceOrdering::equal;
  RationalMatrix naive_information;   // x1' (I - P_j) x1
  RationalMatrix proper_information;  // x1' (I - P_[j:Z]) x1
  /// Some contrast is not estimable once block parameters are included; its
  /// proper variance is unbounded.
  bool confounded = false;
};

/// Loewner comparison of the contrast covariance with block parameters
/// against the covariance ignoring them.
///
/// The comparison runs on information matrices, which exist even when the
/// blocks confound a contrast: cov_proper >= cov_naive exactly when
/// info_naive - info_proper is positive semidefinite. Redundant block columns
/// are dropped before projecting.
inline CovarianceDetail covariance_detail(const ContrastModel& m, const IntMatrix& z) {
  detail::require_indicators(m, z);
  const std::size_t q = m.n_contrasts();
  const RationalMatrix x1 = to_rational(m.x1);
  const RationalMatrix x1t = x1.transpose();

  const IntMatrix nuisance_all = ones_column(m.n_runs).hstack(z);
  const IntMatrix nuisance = nuisance_all.select_columns(independent_columns(nuisance_all));
  const RationalMatrix w = to_rational(nuisance);
  const RationalMatrix wt = w.transpose();

  CovarianceDetail out;
  const RationalMatrix gram = x1t * x1;
  const RationalMatrix j = to_rational(ones_column(m.n_runs));
  const RationalMatrix xj = x1t * j;
  out.naive_information = gram - xj * rational_solve(j.transpose() * j, xj.transpose());
  const RationalMatrix xw = x1t * w;
  out.proper_information = gram - xw * rational_solve(wt * w, xw.transpose());

  const RationalMatrix diff = out.naive_information - out.proper_information;
  if (q > 0 && rank(out.proper_information) < q) out.confounded = true;
  if (is_zero(std::span<const Rational>(diff.data())))
    out.ordering = CovarianceOrdering::equal;
  else if (is_positive_semidefinite(diff))
    out.ordering = CovarianceOrdering::proper_dominates;
  else
    out.ordering = CovarianceOrdering::incomparable;
  return out;
}

inline CovarianceOrdering covariance_comparison(const ContrastModel& m, const IntMatrix& z) {
  return covariance_detail(m, z).ordering;
}

/// Estimates, bias and covariance ordering for a set of block indicators.
inline EstimateReport analyse(const ContrastModel& m, const RandomisationSystem& blocks,
                              std::span<const Rational> y, std::span<const Rational> gamma) {
  EstimateReport rep;
  const IntMatrix z = blocks.indicator_matrix();
  rep.phi_hat = lse_contrast_estimates(m, y).contrasts;
  rep.bias = naive_block_bias(m, z, gamma);
  rep.invariant = block_shift_invariance(m, blocks, y, gamma);
  rep.covariance_ordering = covariance_comparison(m, z);
  return rep;
}

struct AbSummary {
  double mean = 0;
  double standard_error = 0;
  double min = 0;
  double max = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Randomised two-treatment experiment with a hidden unit-level confounder.
///
/// Each replication draws one confounder per unit, assigns n1 units to A at
/// random and reports theta1 - theta2 plus the difference of the mean
/// confounders of the two groups. Replication r uses its own generator seeded
/// from (seed, r), so the result does not depend on scheduling.
inline AbSummary simulate_ab(std::size_t n1, std::size_t n2, double theta1, double theta2,
                             double confounder_sd, std::size_t replications, std::uint64_t seed) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorCode::InvalidArgument, "both groups need at least one unit");
  if (replications == 0) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (!(confounder_sd >= 0)) throw Error(ErrorCode::InvalidArgument, "confounder sd must be >= 0");

  std::vector<double> phi(replications);
  parallel_for(replications, [&](std::size_t r) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
    const std::size_t n = n1 + n2;
    std::vector<double> delta(n, 0.0);
    if (confounder_sd > 0) {
      std::normal_distribution<double> noise(0.0, confounder_sd);
      for (auto& d : delta) d = noise(rng);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double sum_a = 0, sum_b = 0;
    for (std::size_t i = 0; i < n; ++i) (i < n1 ? sum_a : sum_b) += delta[order[i]];
    const double drift = sum_a / static_cast<double>(n1) - sum_b / static_cast<double>(n2);
    phi[r] = (theta1 - theta2) + drift;
  });

  AbSummary s;
  s.replications = replications;
  s.seed = seed;
  s.min = *std::min_element(phi.begin(), phi.end());
  s.max = *std::max_element(phi.begin(), phi.end());
  double sum = 0;
  for (double p : phi) sum += p;
  s.mean = sum / static_cast<double>(replications);
  if (replications > 1) {
    double ss = 0;
    for (double p : phi) ss += (p - s.mean) * (p - s.mean);
    s.standard_error = std::sqrt(ss / static_cast<double>(replications - 1)) /
                       std::sqrt(static_cast<double>(replications));
  }
  return s;
}

}  // namespace circuitrand
