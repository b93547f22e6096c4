#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"

namespace circuitrand {

/// A design matrix with one row per run and one column per parameter.
struct DesignModel {
  IntMatrix x;
  std::vector<std::string> run_labels;
  std::vector<std::string> param_labels;

  DesignModel() = default;
  DesignModel(IntMatrix matrix, std::vector<std::string> runs, std::vector<std::string> params)
      : x(std::move(matrix)), run_labels(std::move(runs)), param_labels(std::move(params)) {
    if (run_labels.size() != x.rows() || param_labels.size() != x.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "label counts do not match the design matrix");
    }
  }

  /// Unlabelled design; runs and parameters get 1-based numeric labels.
  static DesignModel unlabelled(IntMatrix matrix) {
    std::vector<std::string> runs(matrix.rows()), params(matrix.cols());
    for (std::size_t i = 0; i < runs.size(); ++i) runs[i] = std::to_string(i + 1);
    for (std::size_t i = 0; i < params.size(); ++i) params[i] = "p" + std::to_string(i + 1);
    return DesignModel(std::move(matrix), std::move(runs), std::move(params));
  }

  std::size_t n_runs() const { return x.rows(); }
};

/// The design rewritten as [j : x1] with every column of x1 summing to zero.
///
/// `reparam` maps the original parameters to the contrast-form ones: row 0 is
/// the intercept, rows 1..q the coefficients of the x1 columns, so that
/// [j : x1] * reparam == source.x.
struct ContrastModel {
  std::size_t n_runs = 0;
  IntMatrix x1;
  RationalMatrix reparam;
  DesignModel source;

  std::size_t n_contrasts() const { return x1.cols(); }

  /// [j : x1]
  IntMatrix contrast_form() const {
    IntMatrix j(n_runs, 1);
    for (std::size_t i = 0; i < n_runs; ++i) j(i, 0) = 1;
    return j.hstack(x1);
  }
};

inline bool empirical_contrast_check(std::span<const Integer> c) {
  return std::accumulate(c.begin(), c.end(), Integer(0)) == 0;
}

inline IntMatrix ones_column(std::size_t n) {
  IntMatrix j(n, 1);
  for (std::size_t i = 0; i < n; ++i) j(i, 0) = 1;
  return j;
}

inline bool has_intercept(const IntMatrix& x) {
  return rank(x.hstack(ones_column(x.rows()))) == rank(x);
}

/// Centres each column (n*c - (j'c) j), makes it primitive, and keeps a
/// maximal independent subset greedily from the left.
inline ContrastModel to_contrast_form(const DesignModel& d) {
  const std::size_t n = d.x.rows();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "design has no runs");
  if (!has_intercept(d.x)) {
    throw Error(ErrorCode::JNotInColumnSpace,
                "the all-ones vector is not in the column space of the design; the model has no "
                "intercept-equivalent");
  }

  std::vector<IntVector> centred;
  for (std::size_t c = 0; c < d.x.cols(); ++c) {
    IntVector col = d.x.column(c);
    const Integer sum = std::accumulate(col.begin(), col.end(), Integer(0));
    for (auto& v : col) v = Integer(n) * v - sum;
    const Integer g = content(col);
    if (g == 0) continue;
    for (auto& v : col) v /= g;
    centred.push_back(std::move(col));
  }

  ContrastModel m;
  m.n_runs = n;
  m.source = d;
  if (centred.empty()) {
    m.x1 = IntMatrix(n, 0);
  } else {
    const IntMatrix all = IntMatrix::from_columns(centred, n);
    m.x1 = all.select_columns(independent_columns(all));
  }

  const RationalMatrix xt = to_rational(m.contrast_form());
  const RationalMatrix xtt = xt.transpose();
  m.reparam = rational_solve(xtt * xt, xtt * to_rational(d.x));
  return m;
}

}  // namespace circuitrand
