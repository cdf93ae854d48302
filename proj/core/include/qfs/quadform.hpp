#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <type_traits>
#include <vector>

#include "qfs/echelon.hpp"
#include "qfs/field.hpp"
#include "qfs/linalg.hpp"
#include "qfs/rational.hpp"

namespace qfs {

// Homogeneous quadratic form sum_{i<=j} c_ij x_i x_j in n variables, stored as
// the upper triangle so that characteristic 2 needs no special casing.
template <class R>
class QuadraticForm {
 public:
  using ring_type = R;
  using value_type = typename R::value_type;

  QuadraticForm() = default;
  QuadraticForm(R ring, std::size_t n)
      : ring_(std::move(ring)), n_(n), c_(n * (n + 1) / 2, ring_.zero()) {}

  const R& ring() const { return ring_; }
  std::size_t n() const { return n_; }

  const value_type& coeff(std::size_t i, std::size_t j) const { return c_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, value_type v) { c_[index(i, j)] = std::move(v); }
  void add_to(std::size_t i, std::size_t j, const value_type& v) {
    auto& slot = c_[index(i, j)];
    slot = ring_.add(slot, v);
  }

  bool is_zero() const {
    for (const auto& c : c_) {
      if (!ring_.is_zero(c)) return false;
    }
    return true;
  }

  // Variables occurring in at least one monomial with nonzero coefficient.
  std::vector<bool> active_variables() const {
    std::vector<bool> active(n_, false);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        if (!ring_.is_zero(coeff(i, j))) active[i] = active[j] = true;
    return active;
  }

  std::span<const value_type> raw() const { return c_; }

  bool operator==(const QuadraticForm& o) const { return n_ == o.n_ && c_ == o.c_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    if (j >= n_) throw Error(ErrorCode::DimensionMismatch, "variable index out of range");
    return i * n_ - i * (i - 1) / 2 + (j - i);
  }

  R ring_{};
  std::size_t n_ = 0;
  std::vector<value_type> c_;
};

template <class R>
class FormSystem {
 public:
  using ring_type = R;
  using value_type = typename R::value_type;
  using form_type = QuadraticForm<R>;

  FormSystem() = default;
  FormSystem(R ring, std::size_t n) : ring_(std::move(ring)), n_(n) {}
  FormSystem(R ring, std::size_t n, std::vector<form_type> forms) : ring_(std::move(ring)), n_(n) {
    for (auto& f : forms) push_back(std::move(f));
  }

  void push_back(form_type q) {
    if (q.n() != n_) throw Error(ErrorCode::DimensionMismatch, "form has a different variable count");
    if (!(q.ring() == ring_)) throw Error(ErrorCode::FieldMismatch, "form over a different field");
    forms_.push_back(std::move(q));
  }

  const R& ring() const { return ring_; }
  std::size_t n() const { return n_; }
  std::size_t r() const { return forms_.size(); }
  const form_type& operator[](std::size_t i) const { return forms_[i]; }
  form_type& operator[](std::size_t i) { return forms_[i]; }
  const std::vector<form_type>& forms() const { return forms_; }

  std::vector<bool> active_variables() const {
    std::vector<bool> active(n_, false);
    for (const auto& q : forms_) {
      const auto a = q.active_variables();
      for (std::size_t i = 0; i < n_; ++i) active[i] = active[i] || a[i];
    }
    return active;
  }

  bool operator==(const FormSystem& o) const { return n_ == o.n_ && forms_ == o.forms_; }

 private:
  R ring_{};
  std::size_t n_ = 0;
  std::vector<form_type> forms_;
};

using FFForm = QuadraticForm<FiniteField>;
using FFSystem = FormSystem<FiniteField>;
using QForm = QuadraticForm<RationalField>;
using QSystem = FormSystem<RationalField>;
using QMatrix = Matrix<mpq_class>;

// ---------------------------------------------------------------------------
// Evaluation

template <class R>
typename R::value_type evaluate(const QuadraticForm<R>& q, std::span<const typename R::value_type> x) {
  if (x.size() != q.n()) throw Error(ErrorCode::DimensionMismatch, "point length differs from n");
  const R& ring = q.ring();
  auto sum = ring.zero();
  for (std::size_t i = 0; i < q.n(); ++i) {
    if (ring.is_zero(x[i])) continue;
    auto inner = ring.zero();
    for (std::size_t j = i; j < q.n(); ++j) {
      if (ring.is_zero(x[j])) continue;
      inner = ring.add(inner, ring.mul(q.coeff(i, j), x[j]));
    }
    sum = ring.add(sum, ring.mul(x[i], inner));
  }
  return sum;
}

template <class R>
Vec<R> evaluate(const FormSystem<R>& s, std::span<const typename R::value_type> x) {
  Vec<R> out;
  out.reserve(s.r());
  for (const auto& q : s.forms()) out.push_back(evaluate(q, x));
  return out;
}

// b(x, y) = q(x + y) - q(x) - q(y), expanded monomial by monomial.
template <class R>
typename R::value_type bilinear(const QuadraticForm<R>& q, std::span<const typename R::value_type> x,
                                std::span<const typename R::value_type> y) {
  if (x.size() != q.n() || y.size() != q.n()) {
    throw Error(ErrorCode::DimensionMismatch, "bilinear arguments must have length n");
  }
  const R& ring = q.ring();
  auto sum = ring.zero();
  for (std::size_t i = 0; i < q.n(); ++i) {
    for (std::size_t j = i; j < q.n(); ++j) {
      const auto& c = q.coeff(i, j);
      if (ring.is_zero(c)) continue;
      // For i == j this is 2 x_i y_i.
      const auto cross = ring.add(ring.mul(x[i], y[j]), ring.mul(x[j], y[i]));
      sum = ring.add(sum, ring.mul(c, cross));
    }
  }
  return sum;
}

// Row vector w with b(v, y) = sum_j w_j y_j.
template <class R>
Vec<R> bilinear_functional(const QuadraticForm<R>& q, std::span<const typename R::value_type> v) {
  const R& ring = q.ring();
  Vec<R> w(q.n(), ring.zero());
  for (std::size_t i = 0; i < q.n(); ++i) {
    for (std::size_t j = i; j < q.n(); ++j) {
      const auto& c = q.coeff(i, j);
      if (ring.is_zero(c)) continue;
      if (i == j) {
        const auto t = ring.mul(c, v[i]);
        w[i] = ring.add(w[i], ring.add(t, t));
      } else {
        w[j] = ring.add(w[j], ring.mul(c, v[i]));
        w[i] = ring.add(w[i], ring.mul(c, v[j]));
      }
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Transforms

// Returns q o M, i.e. the form y -> q(M y). M is n x n with columns the images
// of the new basis vectors.
template <class R>
QuadraticForm<R> compose(const QuadraticForm<R>& q, const Matrix<typename R::value_type>& m) {
  if (m.rows() != q.n()) throw Error(ErrorCode::DimensionMismatch, "transform rows must equal n");
  const R& ring = q.ring();
  const std::size_t n = q.n(), k = m.cols();
  QuadraticForm<R> out(ring, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto& c = q.coeff(i, j);
      if (ring.is_zero(c)) continue;
      for (std::size_t a = 0; a < k; ++a) {
        if (ring.is_zero(m(i, a)) && ring.is_zero(m(j, a))) continue;
        out.add_to(a, a, ring.mul(c, ring.mul(m(i, a), m(j, a))));
        for (std::size_t b = a + 1; b < k; ++b) {
          const auto t = ring.add(ring.mul(m(i, a), m(j, b)), ring.mul(m(i, b), m(j, a)));
          if (!ring.is_zero(t)) out.add_to(a, b, ring.mul(c, t));
        }
      }
    }
  }
  return out;
}

template <class R>
QuadraticForm<R> linear_combination(const FormSystem<R>& s, std::span<const typename R::value_type> a) {
  if (a.size() != s.r()) throw Error(ErrorCode::DimensionMismatch, "combination length differs from r");
  const R& ring = s.ring();
  QuadraticForm<R> out(ring, s.n());
  for (std::size_t k = 0; k < s.r(); ++k) {
    if (ring.is_zero(a[k])) continue;
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) {
        const auto& c = s[k].coeff(i, j);
        if (!ring.is_zero(c)) out.add_to(i, j, ring.mul(a[k], c));
      }
  }
  return out;
}

template <class R>
QuadraticForm<R> linear_combination(const FormSystem<R>& s, const Vec<R>& a) {
  return linear_combination(s, std::span<const typename R::value_type>(a));
}

// x -> M x. Throws SingularTransform for singular M.
template <class F>
FormSystem<F> apply_variable_change(const FormSystem<F>& s, const Matrix<typename F::value_type>& m) {
  if (m.rows() != s.n() || m.cols() != s.n()) throw Error(ErrorCode::DimensionMismatch, "M must be n x n");
  if (s.ring().is_zero(determinant(s.ring(), m))) {
    throw Error(ErrorCode::SingularTransform, "variable change is singular");
  }
  FormSystem<F> out(s.ring(), s.n());
  for (const auto& q : s.forms()) out.push_back(compose(q, m));
  return out;
}

// q -> P q. Throws SingularTransform for singular P.
template <class F>
FormSystem<F> apply_form_change(const FormSystem<F>& s, const Matrix<typename F::value_type>& p) {
  if (p.rows() != s.r() || p.cols() != s.r()) throw Error(ErrorCode::DimensionMismatch, "P must be r x r");
  if (s.ring().is_zero(determinant(s.ring(), p))) {
    throw Error(ErrorCode::SingularTransform, "form change is singular");
  }
  FormSystem<F> out(s.ring(), s.n());
  for (std::size_t i = 0; i < s.r(); ++i) out.push_back(linear_combination(s, p.row_vector(i)));
  return out;
}

// The system restricted to V, in the coordinates of V's echelon basis.
template <class F>
FormSystem<F> restrict(const FormSystem<F>& s, const Subspace<F>& v) {
  if (v.ambient() != s.n()) throw Error(ErrorCode::DimensionMismatch, "subspace ambient dimension");
  const auto m = transpose(v.basis());
  FormSystem<F> out(s.ring(), v.dim());
  for (const auto& q : s.forms()) out.push_back(compose(q, m));
  return out;
}

template <class F>
QuadraticForm<F> restrict(const QuadraticForm<F>& q, const Subspace<F>& v) {
  return compose(q, transpose(v.basis()));
}

// Symmetric Gram matrix G with q(x) = x^T G x / 2 (diagonal 2 c_ii). Only
// meaningful outside characteristic 2.
template <class R>
Matrix<typename R::value_type> gram_matrix(const QuadraticForm<R>& q) {
  const R& ring = q.ring();
  Matrix<typename R::value_type> g(q.n(), q.n(), ring.zero());
  for (std::size_t i = 0; i < q.n(); ++i) {
    g(i, i) = ring.add(q.coeff(i, i), q.coeff(i, i));
    for (std::size_t j = i + 1; j < q.n(); ++j) g(i, j) = g(j, i) = q.coeff(i, j);
  }
  return g;
}

// Matrix of the polar form b(e_i, e_j); alternating in characteristic 2.
template <class R>
Matrix<typename R::value_type> polar_matrix(const QuadraticForm<R>& q) {
  return gram_matrix(q);
}

template <class F>
struct RadicalInfo {
  Subspace<F> radical;
  std::size_t rank = 0;
};

// radical = {v : b(v, .) = 0 and q(v) = 0}; rank = n - dim(radical).
template <class F>
RadicalInfo<F> radical_and_rank(const QuadraticForm<F>& q) {
  const F& field = q.ring();
  const auto kernel = kernel_basis(field, polar_matrix(q));
  RadicalInfo<F> out;
  if constexpr (std::is_same_v<F, FiniteField>) {
    if (field.characteristic() == 2 && !kernel.empty()) {
      // On the polar kernel q is additive and Frobenius-semilinear:
      // q(sum a_i k_i) = sum a_i^2 q(k_i), so its zero set is the kernel of
      // the linear functional a -> sum a_i sqrt(q(k_i)).
      Matrix<std::uint32_t> functional(1, kernel.size(), 0);
      bool nonzero = false;
      for (std::size_t i = 0; i < kernel.size(); ++i) {
        functional(0, i) = field.frobenius_inverse(evaluate(q, std::span<const std::uint32_t>(kernel[i])));
        nonzero = nonzero || functional(0, i) != 0;
      }
      if (nonzero) {
        std::vector<Vec<F>> vectors;
        for (const auto& a : kernel_basis(field, functional)) {
          Vec<F> v(q.n(), 0);
          for (std::size_t i = 0; i < kernel.size(); ++i) {
            if (!a[i]) continue;
            for (std::size_t j = 0; j < q.n(); ++j) v[j] = field.add(v[j], field.mul(a[i], kernel[i][j]));
          }
          vectors.push_back(std::move(v));
        }
        out.radical = Subspace<F>::span(field, q.n(), vectors);
        out.rank = q.n() - out.radical.dim();
        return out;
      }
    }
  }
  out.radical = Subspace<F>::span(field, q.n(), kernel);
  out.rank = q.n() - out.radical.dim();
  return out;
}

template <class F>
struct EffectiveReduction {
  std::size_t m = 0;
  // Columns: m complement unit vectors, then the radical basis. q(B y) only
  // depends on the first m coordinates of y.
  Matrix<typename F::value_type> basis_change;
  QuadraticForm<F> reduced;
};

template <class F>
EffectiveReduction<F> reduce_effective_variables(const QuadraticForm<F>& q) {
  const F& field = q.ring();
  const auto rad = radical_and_rank(q);
  std::vector<bool> is_pivot(q.n(), false);
  for (auto c : rad.radical.pivots()) is_pivot[c] = true;
  EffectiveReduction<F> out;
  out.m = rad.rank;
  out.basis_change = Matrix<typename F::value_type>(q.n(), q.n(), field.zero());
  std::size_t col = 0;
  std::vector<std::size_t> complement;
  for (std::size_t c = 0; c < q.n(); ++c) {
    if (is_pivot[c]) continue;
    out.basis_change(c, col++) = field.one();
    complement.push_back(c);
  }
  for (std::size_t i = 0; i < rad.radical.dim(); ++i, ++col) {
    for (std::size_t j = 0; j < q.n(); ++j) out.basis_change(j, col) = rad.radical.basis()(i, j);
  }
  out.reduced = QuadraticForm<F>(field, out.m);
  for (std::size_t a = 0; a < out.m; ++a)
    for (std::size_t b = a; b < out.m; ++b) out.reduced.set(a, b, q.coeff(complement[a], complement[b]));
  return out;
}

// rank -> number of a in F_q^r with rank(Q_a) = rank. Throws TooLarge beyond
// 10^6 combinations.
std::map<std::size_t, std::uint64_t> rank_distribution(const FFSystem& s);

// ---------------------------------------------------------------------------
// Integral models

// Coefficientwise reduction; throws NonIntegral on a negative valuation.
FFSystem reduce_mod_p(const QSystem& s, std::uint32_t p);
FFForm reduce_mod_p(const QForm& q, std::uint32_t p);

// Integer lift with representatives in [0, p) (prime fields only).
QSystem lift_to_integers(const FFSystem& s);

long min_valuation(const QForm& q, std::uint32_t p);
long min_valuation(const QSystem& s, std::uint32_t p);

// Change of variables M (n x n) and of forms P (r x r) with exact rational
// entries and cached p-adic valuations of their determinants.
class TransformPair {
 public:
  TransformPair() = default;
  TransformPair(QMatrix m, QMatrix p_matrix, std::uint32_t p);

  static TransformPair identity(std::size_t n, std::size_t r, std::uint32_t p);

  const QMatrix& M() const { return m_; }
  const QMatrix& P() const { return p_matrix_; }
  std::uint32_t prime() const { return p_; }
  long vM() const { return v_m_; }
  long vP() const { return v_p_; }

  // Applies the pair: the result is P (S o M).
  QSystem apply(const QSystem& s) const;

  // (this then next): S -> next.P (this.P (S o this.M) o next.M).
  TransformPair then(const TransformPair& next) const;

 private:
  QMatrix m_;
  QMatrix p_matrix_;
  std::uint32_t p_ = 2;
  long v_m_ = 0;
  long v_p_ = 0;
};

QMatrix rational_diagonal(const std::vector<mpq_class>& diag);

}  // namespace qfs
