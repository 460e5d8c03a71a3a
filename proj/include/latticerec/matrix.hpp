#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticerec/error.hpp"
#include "latticerec/exact.hpp"

namespace latticerec {

/// Dense row-major matrix over an exact field (Rational or ModP).
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const F& zero)
      : rows_(rows), cols_(cols), data_(rows * cols, zero) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<F> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
      fail(ErrorKind::kDimensionMismatch, "matrix data size does not match shape");
    }
  }

  static Matrix identity(std::size_t n, const F& one) {
    Matrix m(n, n, field_zero(one));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<F>>& rows) {
    if (rows.empty()) fail(ErrorKind::kInvalidArgument, "matrix needs at least one row");
    Matrix m(rows.size(), rows[0].size(), field_zero(rows[0].at(0)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) {
        fail(ErrorKind::kDimensionMismatch, "ragged matrix rows");
      }
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const F& any_entry() const { return data_.front(); }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) fail(ErrorKind::kDimensionMismatch, "matrix product shape mismatch");
    Matrix r(rows_, o.cols_, field_zero(any_entry()));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const F& a = (*this)(i, k);
        if (field_is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = r(i, j) + a * o(k, j);
      }
    }
    return r;
  }

  std::vector<F> apply(const std::vector<F>& x) const {
    if (x.size() != cols_) fail(ErrorKind::kDimensionMismatch, "matrix-vector shape mismatch");
    std::vector<F> y(rows_, field_zero(any_entry()));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) y[i] = y[i] + (*this)(i, j) * x[j];
    }
    return y;
  }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!(data_[i] == o.data_[i])) return false;
    }
    return true;
  }

  // First (row, col) where the two matrices differ, row-major.
  std::optional<std::pair<std::size_t, std::size_t>> first_difference(const Matrix& o) const {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!((*this)(i, j) == o(i, j))) return std::make_pair(i, j);
      }
    }
    return std::nullopt;
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const F& e = (*this)(i, j);
        if (i == j ? !(e == field_one(e)) : !field_is_zero(e)) return false;
      }
    }
    return true;
  }

  F determinant() const {
    if (!is_square()) fail(ErrorKind::kDimensionMismatch, "determinant of non-square matrix");
    Matrix a = *this;
    F det = field_one(any_entry());
    const std::size_t n = rows_;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && field_is_zero(a(pivot, col))) ++pivot;
      if (pivot == n) return field_zero(any_entry());
      if (pivot != col) {
        a.swap_rows(pivot, col);
        det = -det;
      }
      det = det * a(col, col);
      F inv = field_inverse(a(col, col));
      for (std::size_t r = col + 1; r < n; ++r) {
        if (field_is_zero(a(r, col))) continue;
        F factor = a(r, col) * inv;
        for (std::size_t c = col; c < n; ++c) a(r, c) = a(r, c) - factor * a(col, c);
      }
    }
    return det;
  }

  // Gauss-Jordan; nullopt when singular.
  std::optional<Matrix> inverse() const {
    if (!is_square()) fail(ErrorKind::kDimensionMismatch, "inverse of non-square matrix");
    const std::size_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(n, field_one(any_entry()));
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && field_is_zero(a(pivot, col))) ++pivot;
      if (pivot == n) return std::nullopt;
      a.swap_rows(pivot, col);
      inv.swap_rows(pivot, col);
      F scale = field_inverse(a(col, col));
      for (std::size_t c = 0; c < n; ++c) {
        a(col, c) = a(col, c) * scale;
        inv(col, c) = inv(col, c) * scale;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || field_is_zero(a(r, col))) continue;
        F factor = a(r, col);
        for (std::size_t c = 0; c < n; ++c) {
          a(r, c) = a(r, c) - factor * a(col, c);
          inv(r, c) = inv(r, c) - factor * inv(col, c);
        }
      }
    }
    return inv;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, field_zero(any_entry()));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  std::size_t rank() const {
    Matrix a = *this;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t pivot = row;
      while (pivot < rows_ && field_is_zero(a(pivot, col))) ++pivot;
      if (pivot == rows_) continue;
      a.swap_rows(pivot, row);
      F inv = field_inverse(a(row, col));
      for (std::size_t r = row + 1; r < rows_; ++r) {
        if (field_is_zero(a(r, col))) continue;
        F factor = a(r, col) * inv;
        for (std::size_t c = col; c < cols_; ++c) a(r, c) = a(r, c) - factor * a(row, c);
      }
      ++row;
    }
    return row;
  }

  // A nonzero vector v with A v = 0, if any.
  std::optional<std::vector<F>> kernel_vector() const {
    Matrix a = *this;
    const F zero = field_zero(any_entry());
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t pivot = row;
      while (pivot < rows_ && field_is_zero(a(pivot, col))) ++pivot;
      if (pivot == rows_) continue;
      a.swap_rows(pivot, row);
      F scale = field_inverse(a(row, col));
      for (std::size_t c = 0; c < cols_; ++c) a(row, c) = a(row, c) * scale;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row || field_is_zero(a(r, col))) continue;
        F factor = a(r, col);
        for (std::size_t c = 0; c < cols_; ++c) a(r, c) = a(r, c) - factor * a(row, c);
      }
      pivot_cols.push_back(col);
      ++row;
    }
    std::size_t free_col = cols_;
    for (std::size_t c = 0, p = 0; c < cols_; ++c) {
      if (p < pivot_cols.size() && pivot_cols[p] == c) {
        ++p;
      } else {
        free_col = c;
        break;
      }
    }
    if (free_col == cols_) return std::nullopt;
    std::vector<F> v(cols_, zero);
    v[free_col] = field_one(zero);
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -a(r, free_col);
    return v;
  }

 private:
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

using RationalMatrix = Matrix<Rational>;
using ModMatrix = Matrix<ModP>;

/// Binary exponentiation for k >= 0.
template <class F>
Matrix<F> power_nonnegative(const Matrix<F>& a, std::uint64_t k) {
  if (!a.is_square()) fail(ErrorKind::kDimensionMismatch, "power of non-square matrix");
  Matrix<F> result = Matrix<F>::identity(a.rows(), field_one(a.any_entry()));
  Matrix<F> base = a;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace latticerec
