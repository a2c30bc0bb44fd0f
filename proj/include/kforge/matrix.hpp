#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kforge/errors.hpp"
#include "kforge/scalar.hpp"

namespace kforge {

/// Dense column vector of scalars.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : data_(n) {}
  Vector(std::initializer_list<Scalar> values) : data_(values) {}
  explicit Vector(std::vector<Scalar> values) : data_(std::move(values)) {}

  std::size_t size() const { return data_.size(); }
  Scalar& operator[](std::size_t i) { return data_[i]; }
  const Scalar& operator[](std::size_t i) const { return data_[i]; }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }
  std::span<const Scalar> values() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  Vector& operator+=(const Vector& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!o.data_[i].is_zero()) data_[i] += o.data_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_same_size(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!o.data_[i].is_zero()) data_[i] -= o.data_[i];
    return *this;
  }
  Vector& operator*=(const Scalar& s) {
    for (auto& x : data_)
      if (!x.is_zero()) x *= s;
    return *this;
  }
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, const Scalar& s) { return a *= s; }
  friend Vector operator*(const Scalar& s, Vector a) { return a *= s; }
  friend bool operator==(const Vector& a, const Vector& b) { return a.data_ == b.data_; }

 private:
  void require_same_size(const Vector& o) const {
    if (o.size() != size())
      throw InputError("vector size mismatch: " + std::to_string(size()) + " vs " + std::to_string(o.size()));
  }
  std::vector<Scalar> data_;
};

/// Dense row-major matrix of scalars. Zero-sized dimensions are legal.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix diagonal(const std::vector<Scalar>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }
  static Matrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw InputError("ragged matrix literal");
      std::size_t j = 0;
      for (const auto& x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const Vector& v) {
    if (v.size() != rows_) throw InputError("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  /// Conjugate transpose.
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero()) t(j, i) = (*this)(i, j).conj();
    return t;
  }
  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!o.data_[k].is_zero()) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!o.data_[k].is_zero()) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const Scalar& s) {
    for (auto& x : data_)
      if (!x.is_zero()) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw InputError("matrix product shape mismatch: " + a.shape_string() + " * " + b.shape_string());
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Scalar& bkj = b(k, j);
          if (!bkj.is_zero()) c(i, j) += aik * bkj;
        }
      }
    return c;
  }
  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size())
      throw InputError("matrix-vector shape mismatch: " + a.shape_string() + " * " + std::to_string(v.size()));
    Vector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a(i, k).is_zero() && !v[k].is_zero()) out[i] += a(i, k) * v[k];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      throw InputError("matrix shape mismatch: " + shape_string() + " vs " + o.shape_string());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Horizontal concatenation [a | b].
inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InputError("hstack row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

/// Reduced row echelon form together with its pivot columns.
struct EchelonForm {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination. Pivots are searched only among the first
/// `pivot_cols` columns (all columns by default), leftmost column first and
/// topmost available row first, which makes the result canonical.
inline EchelonForm reduced_echelon(Matrix m, std::optional<std::size_t> pivot_cols = std::nullopt) {
  const std::size_t limit = std::min(pivot_cols.value_or(m.cols()), m.cols());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  std::vector<std::size_t> support;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t r = row;
    while (r < m.rows() && m(r, col).is_zero()) ++r;
    if (r == m.rows()) continue;
    if (r != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(row, j));

    const Scalar inv = Scalar(1) / m(row, col);
    support.clear();
    for (std::size_t j = col; j < m.cols(); ++j)
      if (!m(row, j).is_zero()) {
        m(row, j) *= inv;
        support.push_back(j);
      }

    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Scalar factor = m(i, col);
      for (std::size_t j : support) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& a) { return reduced_echelon(a).pivots.size(); }

/// Solves A·X = B column by column. Returns nullopt if any column is
/// inconsistent. Free variables are set to zero.
inline std::optional<Matrix> solve_linear(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw InputError("solve_linear: A has " + std::to_string(a.rows()) + " rows but right-hand side has " +
                     std::to_string(b.rows()));
  EchelonForm ef = reduced_echelon(hstack(a, b), a.cols());
  const std::size_t r = ef.pivots.size();
  for (std::size_t i = r; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!ef.reduced(i, a.cols() + j).is_zero()) return std::nullopt;
  Matrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(ef.pivots[i], j) = ef.reduced(i, a.cols() + j);
  return x;
}

inline std::optional<Vector> solve_linear(const Matrix& a, const Vector& b) {
  Matrix rhs(b.size(), 1);
  rhs.set_column(0, b);
  auto x = solve_linear(a, rhs);
  if (!x) return std::nullopt;
  return x->column(0);
}

/// Null-space basis read off the reduced echelon form: one vector per free
/// column, in increasing column order, with that free coordinate equal to 1.
inline std::vector<Vector> kernel_basis(const Matrix& a) {
  EchelonForm ef = reduced_echelon(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : ef.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < ef.pivots.size(); ++i)
      if (!ef.reduced(i, f).is_zero()) v[ef.pivots[i]] = -ef.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline Matrix inverse(const Matrix& a) {
  if (!a.is_square()) throw InputError("inverse of non-square matrix " + a.shape_string());
  auto x = solve_linear(a, Matrix::identity(a.rows()));
  if (!x || rank(a) != a.rows()) throw InputError("matrix is singular");
  return *x;
}

struct HermitianReport {
  bool hermitian = false;
  bool positive_minors = false;
  /// First (i, j) with H(i, j) != conj(H(j, i)).
  std::optional<std::pair<std::size_t, std::size_t>> asymmetric_entry;
  /// 1-based order of the first leading principal minor that is not positive.
  std::optional<std::size_t> failing_minor;

  bool accepted() const { return hermitian && positive_minors; }
};

/// Checks H = H† and that every leading principal minor is real and
/// positive. Minors are the running products of the pivots of elimination
/// without row exchanges.
inline HermitianReport check_positive_definite_hermitian(const Matrix& h) {
  if (!h.is_square()) throw InputError("Hermitian check on non-square matrix " + h.shape_string());
  HermitianReport report;
  const std::size_t n = h.rows();
  report.hermitian = true;
  for (std::size_t i = 0; i < n && report.hermitian; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (h(i, j) != h(j, i).conj()) {
        report.hermitian = false;
        report.asymmetric_entry = {j, i};
        break;
      }

  Matrix m = h;
  Scalar minor = 1;
  report.positive_minors = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar pivot = m(k, k);
    minor *= pivot;
    if (!minor.is_real() || sgn(minor.re()) <= 0) {
      report.positive_minors = false;
      report.failing_minor = k + 1;
      break;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k).is_zero()) continue;
      const Scalar factor = m(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j)
        if (!m(k, j).is_zero()) m(i, j) -= factor * m(k, j);
    }
  }
  return report;
}

}  // namespace kforge
