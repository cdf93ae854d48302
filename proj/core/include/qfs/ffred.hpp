#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qfs/formlang.hpp"
#include "qfs/quadform.hpp"

namespace qfs {

// Quadratic form over K(T) with polynomial coefficients: (i, j) -> c(T),
// lowest power first.
template <class F>
struct FTForm {
  using value_type = typename F::value_type;

  F field;
  std::size_t n = 0;
  std::map<MonomialKey, std::vector<value_type>> coeffs;

  // Highest power of T with a nonzero coefficient (0 for constant forms).
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [key, poly] : coeffs)
      for (std::size_t e = 0; e < poly.size(); ++e)
        if (!field.is_zero(poly[e])) d = std::max(d, e);
    return d;
  }
};

template <class F>
struct ReductionResult {
  std::size_t n = 0;
  std::size_t d = 0;        // ansatz degree
  std::size_t D = 0;        // T-degree of the form
  std::size_t unknowns = 0; // N = n (d + 1)
  std::size_t forms = 0;    // R = 2d + D + 1
  // Form s is the coefficient of T^s in f(x(T)).
  FormSystem<F> system;
  // Unknown u is the coefficient of T^e in x_i: index_map[u] = (i, e).
  std::vector<std::pair<std::size_t, std::size_t>> index_map;

  std::size_t unknown(std::size_t i, std::size_t e) const { return i * (d + 1) + e; }
};

// Substitutes x_i(T) = sum_{e <= d} c_{i,e} T^e and collects powers of T.
template <class F>
ReductionResult<F> reduce_ft_form(const FTForm<F>& f, std::size_t d) {
  const F& field = f.field;
  ReductionResult<F> out;
  out.n = f.n;
  out.d = d;
  out.D = f.degree();
  out.unknowns = f.n * (d + 1);
  out.forms = 2 * d + out.D + 1;
  for (std::size_t i = 0; i < f.n; ++i)
    for (std::size_t e = 0; e <= d; ++e) out.index_map.emplace_back(i, e);

  std::vector<QuadraticForm<F>> forms(out.forms, QuadraticForm<F>(field, out.unknowns));
  for (const auto& [key, poly] : f.coeffs) {
    const auto [i, j] = key;
    for (std::size_t t = 0; t < poly.size(); ++t) {
      const auto& c = poly[t];
      if (field.is_zero(c)) continue;
      for (std::size_t e1 = 0; e1 <= d; ++e1) {
        for (std::size_t e2 = 0; e2 <= d; ++e2) {
          const std::size_t u = out.unknown(i, e1), w = out.unknown(j, e2);
          // For i == j the ordered pairs (e1, e2) and (e2, e1) land on the
          // same monomial; visit each unordered pair once.
          if (i == j && e2 < e1) continue;
          const auto coeff = (i == j && e1 != e2) ? field.add(c, c) : c;
          forms[t + e1 + e2].add_to(u, w, coeff);
        }
      }
    }
  }
  out.system = FormSystem<F>(field, out.unknowns, std::move(forms));
  return out;
}

// Coefficients of f(x(T)) for polynomial x_i(T).
template <class F>
std::vector<typename F::value_type> evaluate_ft(const FTForm<F>& f,
                                                const std::vector<std::vector<typename F::value_type>>& x) {
  const F& field = f.field;
  if (x.size() != f.n) throw Error(ErrorCode::DimensionMismatch, "one polynomial per variable expected");
  std::size_t top = 0;
  for (const auto& [key, poly] : f.coeffs) {
    top = std::max(top, poly.size() + x[key.first].size() + x[key.second].size());
  }
  std::vector<typename F::value_type> out(top, field.zero());
  for (const auto& [key, poly] : f.coeffs) {
    const auto& a = x[key.first];
    const auto& b = x[key.second];
    for (std::size_t t = 0; t < poly.size(); ++t) {
      if (field.is_zero(poly[t])) continue;
      for (std::size_t e1 = 0; e1 < a.size(); ++e1) {
        if (field.is_zero(a[e1])) continue;
        for (std::size_t e2 = 0; e2 < b.size(); ++e2) {
          out[t + e1 + e2] = field.add(out[t + e1 + e2], field.mul(poly[t], field.mul(a[e1], b[e2])));
        }
      }
    }
  }
  while (!out.empty() && field.is_zero(out.back())) out.pop_back();
  return out;
}

// Decodes c into x_i(T) and replays f(x(T)) = 0 exactly; throws NotAZero if
// the identity fails.
template <class F>
std::vector<std::vector<typename F::value_type>> solution_to_polynomials(const ReductionResult<F>& res,
                                                                         const FTForm<F>& f,
                                                                         std::span<const typename F::value_type> c) {
  if (c.size() != res.unknowns) throw Error(ErrorCode::DimensionMismatch, "solution length differs from N");
  std::vector<std::vector<typename F::value_type>> x(res.n, std::vector<typename F::value_type>(res.d + 1));
  for (std::size_t u = 0; u < res.unknowns; ++u) x[res.index_map[u].first][res.index_map[u].second] = c[u];
  if (!evaluate_ft(f, x).empty()) throw Error(ErrorCode::NotAZero, "f(x(T)) is not the zero polynomial");
  return x;
}

// Form number `index` of a document whose coefficients may involve T.
FTForm<FiniteField> ft_form_over_finite_field(const SystemDocument& doc, std::size_t index = 0);
FTForm<RationalField> ft_form_over_rationals(const SystemDocument& doc, std::size_t index = 0);

}  // namespace qfs
