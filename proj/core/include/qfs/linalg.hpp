#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qfs/error.hpp"

namespace qfs {

template <class F>
using Vec = std::vector<typename F::value_type>;

// Dense row-major matrix. The coefficient domain is passed explicitly to the
// algorithms below; every entry is interpreted in that one domain.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> row_vector(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void append_row(std::span<const T> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row length");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class F>
Matrix<typename F::value_type> identity_matrix(const F& field, std::size_t n) {
  Matrix<typename F::value_type> m(n, n, field.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

template <class F>
Matrix<typename F::value_type> diagonal_matrix(const F& field, const Vec<F>& diag) {
  Matrix<typename F::value_type> m(diag.size(), diag.size(), field.zero());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

template <class F>
Matrix<typename F::value_type> multiply(const F& field, const Matrix<typename F::value_type>& a,
                                        const Matrix<typename F::value_type>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix<typename F::value_type> out(a.rows(), b.cols(), field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (field.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) = field.add(out(i, j), field.mul(a(i, k), b(k, j)));
      }
    }
  }
  return out;
}

template <class F>
Vec<F> multiply(const F& field, const Matrix<typename F::value_type>& a, std::span<const typename F::value_type> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vec<F> out(a.rows(), field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[i] = field.add(out[i], field.mul(a(i, j), x[j]));
    }
  }
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

template <class T>
struct RowReduction {
  Matrix<T> matrix;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form; nonzero rows come first, each pivot is 1.
template <class F>
RowReduction<typename F::value_type> row_reduce(const F& field, Matrix<typename F::value_type> a) {
  RowReduction<typename F::value_type> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && field.is_zero(a(piv, c))) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    }
    const auto inv = field.inv(a(r, c));
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) = field.mul(a(r, j), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || field.is_zero(a(i, c))) continue;
      const auto factor = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) {
        a(i, j) = field.sub(a(i, j), field.mul(factor, a(r, j)));
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.matrix = std::move(a);
  return out;
}

template <class F>
std::size_t rank(const F& field, const Matrix<typename F::value_type>& a) {
  return row_reduce(field, a).rank;
}

// Basis of {x : A x = 0}, one vector per free column, in column order.
template <class F>
std::vector<Vec<F>> kernel_basis(const F& field, const Matrix<typename F::value_type>& a) {
  const auto red = row_reduce(field, a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : red.pivots) is_pivot[c] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(a.cols(), field.zero());
    v[free] = field.one();
    for (std::size_t i = 0; i < red.rank; ++i) {
      v[red.pivots[i]] = field.neg(red.matrix(i, free));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
struct AffineSolution {
  Vec<F> particular;
  std::vector<Vec<F>> kernel;
};

// Solves A x = b. Returns nullopt when the system is inconsistent.
template <class F>
std::optional<AffineSolution<F>> solve_linear(const F& field, const Matrix<typename F::value_type>& a,
                                              std::span<const typename F::value_type> b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  Matrix<typename F::value_type> aug(a.rows(), a.cols() + 1, field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto red = row_reduce(field, std::move(aug));
  if (!red.pivots.empty() && red.pivots.back() == a.cols()) return std::nullopt;
  AffineSolution<F> sol;
  sol.particular.assign(a.cols(), field.zero());
  for (std::size_t i = 0; i < red.rank; ++i) {
    sol.particular[red.pivots[i]] = red.matrix(i, a.cols());
  }
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : red.pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(a.cols(), field.zero());
    v[free] = field.one();
    for (std::size_t i = 0; i < red.rank; ++i) v[red.pivots[i]] = field.neg(red.matrix(i, free));
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

template <class F>
typename F::value_type determinant(const F& field, Matrix<typename F::value_type> a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  auto det = field.one();
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && field.is_zero(a(piv, c))) ++piv;
    if (piv == n) return field.zero();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = field.neg(det);
    }
    det = field.mul(det, a(c, c));
    const auto inv = field.inv(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (field.is_zero(a(i, c))) continue;
      const auto factor = field.mul(a(i, c), inv);
      for (std::size_t j = c; j < n; ++j) a(i, j) = field.sub(a(i, j), field.mul(factor, a(c, j)));
    }
  }
  return det;
}

// Throws Error(SingularTransform) when A is not invertible.
template <class F>
Matrix<typename F::value_type> inverse(const F& field, const Matrix<typename F::value_type>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  Matrix<typename F::value_type> aug(n, 2 * n, field.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = field.one();
  }
  const auto red = row_reduce(field, std::move(aug));
  if (red.rank < n || red.pivots[n - 1] != n - 1) {
    throw Error(ErrorCode::SingularTransform, "matrix is not invertible");
  }
  Matrix<typename F::value_type> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = red.matrix(i, n + j);
  return out;
}

}  // namespace qfs
