#pragma once

// Dense exact linear algebra over the integers and the rationals.
//
// All elimination on integer data is fraction-free (Bareiss), so entries stay
// integral and every pivot division is exact.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "circuitrand/error.hpp"

namespace circuitrand {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

/// Dense row-major matrix. Instantiated for Integer and Rational; Rational
/// values are always kept in lowest terms with a positive denominator.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix data has " + std::to_string(data_.size()) +
                                                    " entries, expected " +
                                                    std::to_string(rows_ * cols_));
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
      std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * cols);
    }
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw Error(ErrorCode::DimensionMismatch, "ragged columns");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix select_columns(std::span<const std::size_t> cols) const {
    Matrix out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols.size(); ++k) out(r, k) = (*this)(r, cols[k]);
    return out;
  }

  Matrix select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t k = 0; k < rows.size(); ++k)
      std::copy_n(data_.begin() + rows[k] * cols_, cols_, out.data_.begin() + k * cols_);
    return out;
  }

  /// [this : other], side by side.
  Matrix hstack(const Matrix& other) const {
    if (other.rows_ != rows_) throw Error(ErrorCode::DimensionMismatch, "hstack row counts differ");
    Matrix out(rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "product of " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " and " +
                                                  std::to_string(b.rows()) + "x" +
                                                  std::to_string(b.cols()));
  }
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "difference of mismatched matrices");
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (v[j] != 0) out[i] += a(i, j) * v[j];
  return out;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v) {
  return a * std::span<const T>(v);
}

inline RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline RationalVector to_rational(std::span<const Integer> v) {
  return RationalVector(v.begin(), v.end());
}

inline bool is_zero(std::span<const Integer> v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

/// gcd of the absolute values of the entries; 0 for the zero vector.
inline Integer content(std::span<const Integer> v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) g = boost::multiprecision::gcd(g, x);
    if (g == 1) break;
  }
  return abs(g);
}

/// Divides by the content and flips the sign so the first nonzero entry is
/// positive. The zero vector is returned unchanged.
inline IntVector canonical_primitive(IntVector v) {
  const Integer g = content(v);
  if (g == 0) return v;
  auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
  const bool flip = *first < 0;
  for (auto& x : v) {
    x /= g;
    if (flip) x = -x;
  }
  return v;
}

/// Clears denominators of a rational vector and returns the canonical
/// primitive integer vector on the same ray (up to sign).
inline IntVector primitive_from_rational(std::span<const Rational> v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = boost::multiprecision::numerator(v[i]) * (l / boost::multiprecision::denominator(v[i]));
  return canonical_primitive(std::move(out));
}

inline Integer dot(std::span<const Integer> a, std::span<const Integer> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

namespace detail {

/// In-place fraction-free row echelon form. Returns the pivot column of each
/// pivot row; rows beyond the returned size are zero. The sign of the
/// determinant (for square input) is tracked in *sign when non-null.
inline std::vector<std::size_t> bareiss_echelon(IntMatrix& m, int* sign = nullptr) {
  std::vector<std::size_t> pivots;
  Integer prev = 1;
  std::size_t r = 0;
  int s = 1;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
      s = -s;
    }
    const Integer pivot = m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const Integer factor = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        m(i, k) = (pivot * m(i, k) - factor * m(r, k)) / prev;
      }
    }
    prev = pivot;
    pivots.push_back(c);
    ++r;
  }
  if (sign != nullptr) *sign = s;
  return pivots;
}

}  // namespace detail

/// Rank over the rationals.
inline std::size_t rank(IntMatrix m) { return detail::bareiss_echelon(m).size(); }

inline std::size_t rank(const RationalMatrix& m) {
  // Scale each row to integers; rank is unchanged.
  IntMatrix scaled(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = primitive_from_rational(m.row(i));
    for (std::size_t j = 0; j < m.cols(); ++j) scaled(i, j) = row[j];
  }
  return rank(std::move(scaled));
}

/// Basis of the right null space. Each vector is primitive with its first
/// nonzero entry positive; one vector per non-pivot column, in column order.
inline std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  IntMatrix m = a;
  const auto pivots = detail::bareiss_echelon(m);
  const std::size_t r = pivots.size();

  // Back-eliminate so each pivot column is zero outside its pivot row.
  for (std::size_t i = r; i-- > 0;) {
    const std::size_t pc = pivots[i];
    for (std::size_t above = 0; above < i; ++above) {
      const Integer factor = m(above, pc);
      if (factor == 0) continue;
      const Integer pivot = m(i, pc);
      for (std::size_t k = 0; k < m.cols(); ++k) m(above, k) = pivot * m(above, k) - factor * m(i, k);
      const auto g = content(m.row(above));
      if (g > 1)
        for (std::size_t k = 0; k < m.cols(); ++k) m(above, k) /= g;
    }
  }

  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  Integer l = 1;
  for (std::size_t i = 0; i < r; ++i) l = boost::multiprecision::lcm(l, abs(m(i, pivots[i])));

  std::vector<IntVector> basis;
  basis.reserve(m.cols() - r);
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    IntVector v(m.cols());
    v[f] = l;
    for (std::size_t i = 0; i < r; ++i) v[pivots[i]] = -m(i, f) * (l / m(i, pivots[i]));
    basis.push_back(canonical_primitive(std::move(v)));
  }
  return basis;
}

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare, "determinant of a " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()) + " matrix");
  }
  if (a.rows() == 0) return 1;
  IntMatrix m = a;
  int sign = 1;
  const auto pivots = detail::bareiss_echelon(m, &sign);
  if (pivots.size() < m.rows()) return 0;
  const Integer& last = m(m.rows() - 1, m.cols() - 1);
  return sign > 0 ? last : Integer(-last);
}

/// Solves gram * X = rhs exactly by Gauss-Jordan elimination.
inline RationalMatrix rational_solve(const RationalMatrix& gram, const RationalMatrix& rhs) {
  const std::size_t n = gram.rows();
  if (gram.cols() != n) throw Error(ErrorCode::NonSquare, "system matrix is not square");
  if (rhs.rows() != n) throw Error(ErrorCode::DimensionMismatch, "right-hand side row count");
  RationalMatrix a = gram;
  RationalMatrix x = rhs;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw Error(ErrorCode::Singular, "system matrix is singular");
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(p, k), a(c, k));
      for (std::size_t k = 0; k < x.cols(); ++k) std::swap(x(p, k), x(c, k));
    }
    const Rational inv = 1 / a(c, c);
    for (std::size_t k = c; k < n; ++k) a(c, k) *= inv;
    for (std::size_t k = 0; k < x.cols(); ++k) x(c, k) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t k = c; k < n; ++k) a(i, k) -= f * a(c, k);
      for (std::size_t k = 0; k < x.cols(); ++k) x(i, k) -= f * x(c, k);
    }
  }
  return x;
}

/// Indices of a maximal linearly independent subset of columns, chosen
/// greedily left to right.
inline std::vector<std::size_t> independent_columns(const IntMatrix& a) {
  IntMatrix m = a;
  return detail::bareiss_echelon(m);
}

/// Exact positive-semidefiniteness test for a symmetric rational matrix by
/// symmetric elimination: a zero pivot forces its whole row to vanish.
inline bool is_positive_semidefinite(RationalMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::NonSquare, "PSD test needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a(i, j) != a(j, i)) throw Error(ErrorCode::InvalidArgument, "matrix is not symmetric");
  for (std::size_t k = 0; k < n; ++k) {
    const Rational pivot = a(k, k);
    if (pivot < 0) return false;
    if (pivot == 0) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (a(k, j) != 0) return false;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

}  // namespace circuitrand
