#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfs/linalg.hpp"

namespace qfs {

// A linear subspace of F^n held as its unique reduced row echelon basis.
template <class F>
class Subspace {
 public:
  using value_type = typename F::value_type;

  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span(const F& field, std::size_t ambient, const std::vector<Vec<F>>& vectors) {
    Matrix<value_type> m(0, ambient);
    for (const auto& v : vectors) m.append_row(v);
    return from_matrix(field, m);
  }

  static Subspace from_matrix(const F& field, const Matrix<value_type>& rows) {
    Subspace s(rows.cols());
    if (rows.rows() == 0) return s;
    auto red = row_reduce(field, rows);
    for (std::size_t i = 0; i < red.rank; ++i) s.basis_.append_row(red.matrix.row(i));
    s.pivots_ = std::move(red.pivots);
    return s;
  }

  static Subspace whole(const F& field, std::size_t n) {
    return from_matrix(field, identity_matrix(field, n));
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix<value_type>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Vec<F> vector(std::size_t i) const { return basis_.row_vector(i); }

  // Subtracts basis multiples so that the result vanishes at every pivot.
  Vec<F> reduce(const F& field, std::span<const value_type> v) const {
    Vec<F> out(v.begin(), v.end());
    for (std::size_t i = 0; i < dim(); ++i) {
      const auto c = out[pivots_[i]];
      if (field.is_zero(c)) continue;
      for (std::size_t j = 0; j < ambient_; ++j) out[j] = field.sub(out[j], field.mul(c, basis_(i, j)));
    }
    return out;
  }

  bool contains(const F& field, std::span<const value_type> v) const {
    if (v.size() != ambient_) throw Error(ErrorCode::DimensionMismatch, "vector length");
    for (const auto& x : reduce(field, v)) {
      if (!field.is_zero(x)) return false;
    }
    return true;
  }

  Subspace extended(const F& field, std::span<const value_type> v) const {
    Matrix<value_type> m = basis_;
    m.append_row(v);
    return from_matrix(field, m);
  }

  bool operator==(const Subspace&) const = default;

 private:
  std::size_t ambient_ = 0;
  Matrix<value_type> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace qfs
