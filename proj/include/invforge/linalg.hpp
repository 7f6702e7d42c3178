#pragma once

// Exact linear algebra over Q (mpq_class) and over Scalar fields.
// Everything is deterministic: pivots are the first nonzero entry in column
// order, so two runs on the same input produce identical bases.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invforge/scalars.hpp"

namespace invforge {

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static Rational zero_like(const Rational&) { return 0; }
  static Rational one_like(const Rational&) { return 1; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct FieldTraits<Scalar> {
  static Scalar zero_like(const Scalar& x) { return Scalar::zero(x.field()); }
  static Scalar one_like(const Scalar& x) { return Scalar::one(x.field()); }
  static bool is_zero(const Scalar& x) { return x.is_zero(); }
  static std::string str(const Scalar& x) { return x.to_string(); }
};

template <class T>
using Vec = std::vector<T>;

/// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, const T& zero, const T& one) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(const std::vector<Vec<T>>& cols, std::size_t rows, const T& zero) {
    Matrix m(rows, cols.size(), zero);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Matrix from_rows(const std::vector<Vec<T>>& rows, std::size_t cols, const T& zero) {
    Matrix m(rows.size(), cols, zero);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<T>& data() const { return a_; }
  std::vector<T>& data() { return a_; }

  Vec<T> column(std::size_t j) const {
    Vec<T> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  Vec<T> row(std::size_t i) const { return Vec<T>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_), a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }

  Matrix transpose() const {
    Matrix t;
    t.rows_ = cols_;
    t.cols_ = rows_;
    t.a_.reserve(a_.size());
    for (std::size_t j = 0; j < cols_; ++j) {
      for (std::size_t i = 0; i < rows_; ++i) t.a_.push_back((*this)(i, j));
    }
    return t;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimMismatch, "matrix product shape mismatch");
  using Tr = FieldTraits<T>;
  const T zero = a.data().empty() ? (b.data().empty() ? T() : Tr::zero_like(b.data()[0])) : Tr::zero_like(a.data()[0]);
  Matrix<T> c(a.rows(), b.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& x = a(i, k);
      if (Tr::is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!Tr::is_zero(b(k, j))) c(i, j) += x * b(k, j);
      }
    }
  }
  return c;
}

template <class T>
Vec<T> operator*(const Matrix<T>& a, const Vec<T>& v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::DimMismatch, "matrix-vector shape mismatch");
  using Tr = FieldTraits<T>;
  Vec<T> out;
  out.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc = Tr::zero_like(a(i, 0));
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!Tr::is_zero(a(i, j)) && !Tr::is_zero(v[j])) acc += a(i, j) * v[j];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimMismatch, "matrix sum shape mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::DimMismatch, "matrix difference shape mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

template <class T>
Matrix<T> scale(const T& s, Matrix<T> a) {
  for (auto& x : a.data()) x *= s;
  return a;
}

template <class T>
T trace(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::TypeError, "trace of a non-square matrix");
  if (a.rows() == 0) throw Error(ErrorCode::TypeError, "trace of an empty matrix has no field");
  T acc = a(0, 0);
  for (std::size_t i = 1; i < a.rows(); ++i) acc += a(i, i);
  return acc;
}

template <class T>
bool is_zero_vector(const Vec<T>& v) {
  for (const auto& x : v) {
    if (!FieldTraits<T>::is_zero(x)) return false;
  }
  return true;
}

/// In-place reduced row echelon form. Returns the pivot columns.
template <class T>
std::vector<std::size_t> row_reduce(Matrix<T>& m) {
  using Tr = FieldTraits<T>;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && Tr::is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    const T inv = T(Tr::one_like(m(r, c))) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (!Tr::is_zero(m(r, j))) m(r, j) *= inv;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || Tr::is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!Tr::is_zero(m(r, j))) m(i, j) -= f * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return row_reduce(m).size();
}

/// Basis of {v : m v = 0}; one vector per free column, with a 1 in that
/// column, in increasing column order.
template <class T>
std::vector<Vec<T>> nullspace(Matrix<T> m, const T& zero) {
  using Tr = FieldTraits<T>;
  const auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec<T>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<T> v(m.cols(), zero);
    v[free] = Tr::one_like(zero);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Determinant by elimination.
template <class T>
T determinant(Matrix<T> m) {
  using Tr = FieldTraits<T>;
  if (m.rows() != m.cols()) throw Error(ErrorCode::TypeError, "determinant of a non-square matrix");
  if (m.rows() == 0) throw Error(ErrorCode::TypeError, "determinant of an empty matrix has no field");
  T det = Tr::one_like(m(0, 0));
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && Tr::is_zero(m(p, c))) ++p;
    if (p == n) return Tr::zero_like(det);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const T inv = T(Tr::one_like(det)) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (Tr::is_zero(m(i, c))) continue;
      const T f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Exact inverse. SingularMatrix carries the determinant in its message.
template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  using Tr = FieldTraits<T>;
  if (a.rows() != a.cols()) throw Error(ErrorCode::TypeError, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return a;
  const T zero = Tr::zero_like(a(0, 0));
  Matrix<T> aug(n, 2 * n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Tr::one_like(zero);
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) {
    throw Error(ErrorCode::SingularMatrix, "determinant = " + Tr::str(determinant(a)));
  }
  Matrix<T> inv(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

/// A solution x of a x = b, or nullopt when the system is inconsistent.
template <class T>
std::optional<Vec<T>> solve(const Matrix<T>& a, const Vec<T>& b, const T& zero) {
  const std::size_t n = a.cols();
  Matrix<T> aug(a.rows(), n + 1, zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == n) return std::nullopt;
  Vec<T> x(n, zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, n);
  return x;
}

/// Incrementally grown subspace in reduced row echelon form. Each stored row
/// has a 1 at its pivot and zeros at every other row's pivot, so the row set
/// is a canonical basis of the span.
template <class T>
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t length = 0) : len_(length) {}

  std::size_t length() const { return len_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec<T>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Reduce v against the basis in place; v becomes zero iff it was in the span.
  void reduce(Vec<T>& v) const {
    using Tr = FieldTraits<T>;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t p = pivots_[r];
      if (Tr::is_zero(v[p])) continue;
      const T f = v[p];
      const auto& row = rows_[r];
      for (std::size_t j = 0; j < len_; ++j) {
        if (!Tr::is_zero(row[j])) v[j] -= f * row[j];
      }
    }
  }

  bool contains(Vec<T> v) const {
    reduce(v);
    return is_zero_vector(v);
  }

  /// Adds v to the span; returns true if the dimension grew.
  bool insert(Vec<T> v) {
    using Tr = FieldTraits<T>;
    if (v.size() != len_) throw Error(ErrorCode::DimMismatch, "vector length does not match basis");
    reduce(v);
    std::size_t p = 0;
    while (p < len_ && Tr::is_zero(v[p])) ++p;
    if (p == len_) return false;
    const T inv = T(Tr::one_like(v[p])) / v[p];
    for (auto& x : v) {
      if (!Tr::is_zero(x)) x *= inv;
    }
    for (auto& row : rows_) {
      if (Tr::is_zero(row[p])) continue;
      const T f = row[p];
      for (std::size_t j = 0; j < len_; ++j) {
        if (!Tr::is_zero(v[j])) row[j] -= f * v[j];
      }
    }
    // keep rows sorted by pivot
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
  }

  /// Coordinates of v in the row basis, or nullopt if v is outside the span.
  std::optional<Vec<T>> coordinates(const Vec<T>& v) const {
    Vec<T> c;
    c.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) c.push_back(v[pivots_[r]]);
    Vec<T> w = v;
    reduce(w);
    if (!is_zero_vector(w)) return std::nullopt;
    return c;
  }

  friend bool operator==(const EchelonBasis& a, const EchelonBasis& b) {
    return a.len_ == b.len_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t len_;
  std::vector<Vec<T>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace invforge
