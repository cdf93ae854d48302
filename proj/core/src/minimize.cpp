#include "qfs/minimize.hpp"

#include <functional>
#include <limits>

namespace qfs {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Minimized: return "minimized";
    case Verdict::NotMinimized: return "not-minimized";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(TransformClass c) {
  switch (c) {
    case TransformClass::Improving: return "improving";
    case TransformClass::Neutral: return "neutral";
    case TransformClass::Compliant: return "compliant";
  }
  return "neutral";
}

std::uint64_t gaussian_binomial(std::uint64_t q, std::size_t r, std::size_t k) {
  if (k > r) return 0;
  mpz_class num = 1, den = 1, qq = static_cast<unsigned long>(q);
  for (std::size_t i = 0; i < k; ++i) {
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), qq.get_mpz_t(), r - i);
    mpz_pow_ui(b.get_mpz_t(), qq.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  const mpz_class value = num / den;
  if (!value.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return value.get_ui();
}

namespace {

// Calls visit for every k x r reduced echelon matrix over F_q; stops when
// visit returns false.
void for_each_echelon(const FiniteField& field, std::size_t k, std::size_t r,
                      const std::function<bool(const Matrix<std::uint32_t>&)>& visit) {
  std::vector<std::size_t> pivots(k);
  const std::uint32_t q = field.order();
  std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t row, std::size_t from) -> bool {
    if (row == k) {
      std::vector<bool> is_pivot(r, false);
      for (auto c : pivots) is_pivot[c] = true;
      // Free slots: (row, column) with column after the row's pivot and not a pivot.
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = pivots[i] + 1; c < r; ++c)
          if (!is_pivot[c]) slots.emplace_back(i, c);
      Matrix<std::uint32_t> m(k, r, 0);
      for (std::size_t i = 0; i < k; ++i) m(i, pivots[i]) = 1;
      std::vector<std::uint32_t> digits(slots.size(), 0);
      while (true) {
        for (std::size_t s = 0; s < slots.size(); ++s) m(slots[s].first, slots[s].second) = digits[s];
        if (!visit(m)) return false;
        std::size_t s = slots.size();
        bool done = true;
        while (s-- > 0) {
          if (++digits[s] < q) {
            done = false;
            break;
          }
          digits[s] = 0;
        }
        if (done) return true;
      }
    }
    for (std::size_t c = from; c + (k - row) <= r; ++c) {
      pivots[row] = c;
      if (!choose(row + 1, c + 1)) return false;
    }
    return true;
  };
  choose(0, 0);
}

}  // namespace

FFSystem witness_forms(const FFSystem& s, const MinimizeWitness& w) {
  if (w.combination.cols() != s.r()) throw Error(ErrorCode::DimensionMismatch, "witness combination width");
  FFSystem out(s.ring(), s.n());
  for (std::size_t i = 0; i < w.combination.rows(); ++i) {
    const auto row = w.combination.row_vector(i);
    out.push_back(linear_combination(s, row));
  }
  return out;
}

MinimizeVerdict is_Fq_minimized(const FFSystem& s, const SubspaceSearchOptions& options) {
  const std::size_t r = s.r(), n = s.n();
  if (r == 0 || r > kMaxMinimizedForms) {
    throw Error(ErrorCode::PreconditionViolated, "the minimized check supports 1 <= r <= 4");
  }
  for (std::size_t k = 1; k <= r; ++k) {
    if (gaussian_binomial(s.ring().order(), r, k) > kMaxSpanSubspaces) {
      throw Error(ErrorCode::TooLarge, "too many subspaces of the form span to enumerate");
    }
  }
  MinimizeVerdict out;
  bool undecided = false;
  for (std::size_t k = 1; k <= r && !out.witness; ++k) {
    const std::size_t d = n >= 2 * k ? n - 2 * k : 0;
    for_each_echelon(s.ring(), k, r, [&](const Matrix<std::uint32_t>& a) {
      MinimizeWitness w;
      w.k = k;
      w.combination = a;
      const auto res = find_totally_singular(witness_forms(s, w), d, options);
      ++out.subspaces_checked;
      out.nodes += res.nodes;
      if (res.found) {
        w.v = *res.found;
        out.witness = std::move(w);
        return false;
      }
      if (!res.certified) undecided = true;
      return true;
    });
  }
  if (out.witness) out.status = Verdict::NotMinimized;
  else out.status = undecided ? Verdict::Unknown : Verdict::Minimized;
  return out;
}

TransformCheck check_transform(const QSystem& s, std::uint32_t p, const TransformPair& t) {
  TransformCheck out;
  const QSystem image = t.apply(s);
  out.integral = min_valuation(image, p) >= 0;
  out.score = static_cast<long>(s.n()) * t.vP() + 2 * static_cast<long>(s.r()) * t.vM();
  out.classification = out.score < 0   ? TransformClass::Improving
                       : out.score == 0 ? TransformClass::Neutral
                                        : TransformClass::Compliant;
  return out;
}

TransformPair witness_to_transform(const QSystem& s, std::uint32_t p, const MinimizeWitness& w) {
  const std::size_t n = s.n(), r = s.r(), k = w.k;
  if (k == 0 || k > r || w.combination.rows() != k || w.v.ambient() != n || 2 * k > n || w.v.dim() != n - 2 * k) {
    throw Error(ErrorCode::WitnessInvalid, "witness has inconsistent dimensions");
  }
  const FFSystem reduced = reduce_mod_p(s, p);
  if (!vanishes_on(witness_forms(reduced, w), w.v)) {
    throw Error(ErrorCode::WitnessInvalid, "witness forms do not vanish on V modulo p");
  }
  const auto comb = row_reduce(reduced.ring(), w.combination);
  if (comb.rank != k) throw Error(ErrorCode::WitnessInvalid, "witness combination is not of rank k");

  // M = B Diag(p,...,p,1,...,1): B holds the 2k complement unit vectors, then
  // the lifted basis of V.
  std::vector<bool> v_pivot(n, false);
  for (auto c : w.v.pivots()) v_pivot[c] = true;
  QMatrix m(n, n, mpq_class(0));
  std::size_t col = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (v_pivot[c]) continue;
    m(c, col++) = p;
  }
  for (std::size_t i = 0; i < w.v.dim(); ++i, ++col)
    for (std::size_t j = 0; j < n; ++j) m(j, col) = w.v.basis()(i, j);

  // P = Diag(1/p,...,1/p,1,...,1) A': the witness rows first, then unit rows
  // for the non-pivot form indices.
  std::vector<bool> a_pivot(r, false);
  for (auto c : comb.pivots) a_pivot[c] = true;
  QMatrix pm(r, r, mpq_class(0));
  const mpq_class inv_p(1, p);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r; ++j) pm(i, j) = mpq_class(comb.matrix(i, j)) * inv_p;
  std::size_t row = k;
  for (std::size_t j = 0; j < r; ++j) {
    if (!a_pivot[j]) pm(row++, j) = 1;
  }
  TransformPair t(std::move(m), std::move(pm), p);
  if (!check_transform(s, p, t).integral) {
    throw Error(ErrorCode::WitnessInvalid, "witness transform does not give an integral system");
  }
  return t;
}

Subspace<FiniteField> saturated_radical_mod_p(const QSystem& s, std::uint32_t p) {
  const RationalField qf;
  const std::size_t n = s.n();
  QMatrix stacked(0, n);
  for (const auto& q : s.forms()) {
    const auto g = gram_matrix(q);
    for (std::size_t i = 0; i < n; ++i) stacked.append_row(g.row(i));
  }
  auto rows = kernel_basis(qf, stacked);
  const FiniteField fp = FiniteField::prime(p);
  for (auto& v : rows) {
    long mv = kInfiniteValuation;
    for (const auto& c : v) mv = std::min(mv, valuation(c, p));
    const mpq_class scale = pow_p(p, -mv);
    for (auto& c : v) c *= scale;
  }
  // Replace a row by (sum c_j w_j)/p while the reductions are dependent;
  // each replacement enlarges the lattice, so the loop terminates.
  while (!rows.empty()) {
    Matrix<std::uint32_t> cols(n, rows.size(), 0);
    for (std::size_t j = 0; j < rows.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) cols(i, j) = residue_mod_p(rows[j][i], p);
    const auto dep = kernel_basis(fp, cols);
    if (dep.empty()) break;
    const auto& c = dep.front();
    std::size_t target = 0;
    while (c[target] == 0) ++target;
    std::vector<mpq_class> combo(n, mpq_class(0));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!c[j]) continue;
      for (std::size_t i = 0; i < n; ++i) combo[i] += mpq_class(c[j]) * rows[j][i];
    }
    for (auto& x : combo) x /= p;
    rows[target] = std::move(combo);
  }
  std::vector<std::vector<std::uint32_t>> reduced;
  for (const auto& v : rows) {
    std::vector<std::uint32_t> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = residue_mod_p(v[i], p);
    reduced.push_back(std::move(r));
  }
  return Subspace<FiniteField>::span(fp, n, reduced);
}

namespace {

inline constexpr std::uint64_t kMaxRadicalEnumeration = 1'000'000;

enum class MoveSearch { Found, None, Unknown };

std::optional<TransformPair> content_move(const QSystem& s, std::uint32_t p) {
  const RationalField qf;
  for (std::size_t i = 0; i < s.r(); ++i) {
    const long v = min_valuation(s[i], p);
    if (v >= 1 && v != kInfiniteValuation) {
      QMatrix pm = identity_matrix(qf, s.r());
      pm(i, i) = pow_p(p, -v);
      return TransformPair(identity_matrix(qf, s.n()), std::move(pm), p);
    }
  }
  return std::nullopt;
}

// Rescales a direction v of the common polar radical mod p, outside the exact
// radical, with q_i(v) = 0 mod p^2 for every form: M = B Diag(..., 1/p, ...)
// where B replaces the unit column at v's leading index by v.
std::optional<TransformPair> radical_move(const QSystem& s, std::uint32_t p) {
  const std::size_t n = s.n();
  const FiniteField fp = FiniteField::prime(p);
  const FFSystem reduced = reduce_mod_p(s, p);
  Matrix<std::uint32_t> stacked(0, n);
  for (const auto& q : reduced.forms()) {
    const auto pm = polar_matrix(q);
    for (std::size_t i = 0; i < n; ++i) stacked.append_row(pm.row(i));
  }
  const auto kernel = kernel_basis(fp, stacked);
  if (kernel.empty()) return std::nullopt;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    if (total > kMaxRadicalEnumeration / p) return std::nullopt;
    total *= p;
  }
  const auto exact = saturated_radical_mod_p(s, p);
  const mpq_class p2 = mpq_class(p) * p;
  std::vector<std::uint32_t> coeffs(kernel.size());
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = kernel.size(); i-- > 0;) {
      coeffs[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    std::vector<std::uint32_t> v(n, 0);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      if (!coeffs[i]) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = fp.add(v[j], fp.mul(coeffs[i], kernel[i][j]));
    }
    std::size_t lead = 0;
    while (lead < n && v[lead] == 0) ++lead;
    if (lead == n || v[lead] != 1) continue;
    if (exact.contains(fp, v)) continue;
    std::vector<mpq_class> lifted(v.begin(), v.end());
    bool ok = true;
    for (const auto& q : s.forms()) {
      const mpq_class value = evaluate(q, std::span<const mpq_class>(lifted));
      if (sgn(value) != 0 && valuation(value, p) < 2) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const RationalField qf;
    QMatrix m = identity_matrix(qf, n);
    for (std::size_t j = 0; j < n; ++j) m(j, lead) = lifted[j] / p;
    return TransformPair(std::move(m), identity_matrix(qf, s.r()), p);
  }
  return std::nullopt;
}

void require_independent(const QSystem& s) {
  const RationalField qf;
  const std::size_t width = s.n() * (s.n() + 1) / 2;
  QMatrix coeffs(0, width);
  for (const auto& q : s.forms()) coeffs.append_row(q.raw());
  if (rank(qf, coeffs) < s.r()) {
    throw Error(ErrorCode::DegenerateSystem, "the forms are linearly dependent over Q");
  }
}

}  // namespace

MinimizeResult minimize_heuristic(const QSystem& s, std::uint32_t p, std::size_t max_iter,
                                  const SubspaceSearchOptions& options) {
  if (!is_prime(p)) throw Error(ErrorCode::BadField, "p must be prime");
  if (s.r() == 0) throw Error(ErrorCode::DegenerateSystem, "empty system");
  require_independent(s);
  const RationalField qf;
  const std::size_t n = s.n(), r = s.r();

  MinimizeResult out;
  QMatrix content = identity_matrix(qf, r);
  for (std::size_t i = 0; i < r; ++i) content(i, i) = pow_p(p, -min_valuation(s[i], p));
  out.normalization = TransformPair(identity_matrix(qf, n), std::move(content), p);
  out.model = out.normalization.apply(s);
  out.total = out.normalization;

  auto apply_step = [&](std::string kind, std::size_t k, const TransformPair& t) {
    MinimizeStep step;
    step.kind = std::move(kind);
    step.k = k;
    step.transform = t;
    step.check = check_transform(out.model, p, t);
    if (!step.check.integral || step.check.classification != TransformClass::Improving) {
      throw Error(ErrorCode::WitnessInvalid, "minimization step is not an integral improving transform");
    }
    out.model = t.apply(out.model);
    out.total = out.total.then(t);
    out.steps.push_back(std::move(step));
  };

  for (std::size_t iter = 0;; ++iter) {
    std::optional<MinimizeVerdict> verdict;
    if (r <= kMaxMinimizedForms) {
      try {
        verdict = is_Fq_minimized(reduce_mod_p(out.model, p), options);
        out.final_verdict = verdict->status;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLarge) throw;
      }
    }
    if (iter == max_iter) {
      out.converged = false;
      out.stop_reason = "iteration limit reached";
      break;
    }
    if (auto t = content_move(out.model, p)) {
      apply_step("content", 1, *t);
      continue;
    }
    if (verdict && verdict->witness && n > 4 * r) {
      apply_step("subspace", verdict->witness->k, witness_to_transform(out.model, p, *verdict->witness));
      continue;
    }
    if (auto t = radical_move(out.model, p)) {
      apply_step("radical", 1, *t);
      continue;
    }
    if (!verdict || verdict->status == Verdict::Unknown) {
      out.converged = false;
      out.stop_reason = verdict ? "subspace search budget exhausted" : "form span too large for the minimized check";
    } else {
      out.converged = true;
      out.stop_reason = verdict->minimized() ? "reduction is minimized; no improving transform applies"
                                             : "no improving transform applies (n <= 4r)";
    }
    break;
  }
  return out;
}

}  // namespace qfs
