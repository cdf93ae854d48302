#include "qfs/quadform.hpp"

namespace qfs {

std::map<std::size_t, std::uint64_t> rank_distribution(const FFSystem& s) {
  const FiniteField& field = s.ring();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < s.r(); ++i) {
    total *= field.order();
    if (total > 1'000'000) throw Error(ErrorCode::TooLarge, "q^r exceeds 10^6 combinations");
  }
  std::map<std::size_t, std::uint64_t> histogram;
  Vec<FiniteField> a(s.r(), 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = s.r(); i-- > 0;) {
      a[i] = static_cast<std::uint32_t>(c % field.order());
      c /= field.order();
    }
    ++histogram[radical_and_rank(linear_combination(s, a)).rank];
  }
  return histogram;
}

FFForm reduce_mod_p(const QForm& q, std::uint32_t p) {
  const FiniteField field = FiniteField::prime(p);
  FFForm out(field, q.n());
  for (std::size_t i = 0; i < q.n(); ++i)
    for (std::size_t j = i; j < q.n(); ++j) {
      const auto& c = q.coeff(i, j);
      if (sgn(c) != 0) out.set(i, j, residue_mod_p(c, p));
    }
  return out;
}

FFSystem reduce_mod_p(const QSystem& s, std::uint32_t p) {
  FFSystem out(FiniteField::prime(p), s.n());
  for (const auto& q : s.forms()) out.push_back(reduce_mod_p(q, p));
  return out;
}

QSystem lift_to_integers(const FFSystem& s) {
  if (!s.ring().is_prime_field()) {
    throw Error(ErrorCode::FieldMismatch, "integer lifts are defined for prime fields only");
  }
  QSystem out(RationalField{}, s.n());
  for (const auto& q : s.forms()) {
    QForm lifted(RationalField{}, s.n());
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) lifted.set(i, j, mpq_class(q.coeff(i, j)));
    out.push_back(std::move(lifted));
  }
  return out;
}

long min_valuation(const QForm& q, std::uint32_t p) {
  long v = kInfiniteValuation;
  for (const auto& c : q.raw()) v = std::min(v, valuation(c, p));
  return v;
}

long min_valuation(const QSystem& s, std::uint32_t p) {
  long v = kInfiniteValuation;
  for (const auto& q : s.forms()) v = std::min(v, min_valuation(q, p));
  return v;
}

QMatrix rational_diagonal(const std::vector<mpq_class>& diag) {
  return diagonal_matrix(RationalField{}, diag);
}

TransformPair::TransformPair(QMatrix m, QMatrix p_matrix, std::uint32_t p)
    : m_(std::move(m)), p_matrix_(std::move(p_matrix)), p_(p) {
  if (m_.rows() != m_.cols() || p_matrix_.rows() != p_matrix_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "transform matrices must be square");
  }
  const RationalField q;
  const mpq_class det_m = determinant(q, m_);
  const mpq_class det_p = determinant(q, p_matrix_);
  if (sgn(det_m) == 0 || sgn(det_p) == 0) {
    throw Error(ErrorCode::SingularTransform, "transform pair has a singular matrix");
  }
  v_m_ = valuation(det_m, p_);
  v_p_ = valuation(det_p, p_);
}

TransformPair TransformPair::identity(std::size_t n, std::size_t r, std::uint32_t p) {
  const RationalField q;
  return TransformPair(identity_matrix(q, n), identity_matrix(q, r), p);
}

QSystem TransformPair::apply(const QSystem& s) const {
  if (s.n() != m_.rows() || s.r() != p_matrix_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "transform pair does not match the system shape");
  }
  return apply_form_change(apply_variable_change(s, m_), p_matrix_);
}

TransformPair TransformPair::then(const TransformPair& next) const {
  const RationalField q;
  return TransformPair(multiply(q, m_, next.m_), multiply(q, next.p_matrix_, p_matrix_), p_);
}

}  // namespace qfs
