#include "qfs/hensel.hpp"

#include <algorithm>
#include <sstream>

namespace qfs {

std::string to_base_p_digits(const mpz_class& x, std::uint32_t p, std::uint32_t k) {
  mpz_class v = x;
  std::vector<unsigned long> digits;
  for (std::uint32_t i = 0; i < k; ++i) {
    digits.push_back(mpz_fdiv_ui(v.get_mpz_t(), p));
    mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), p);
  }
  std::ostringstream out;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (p > 10 && i + 1 != digits.size()) out << ':';
    out << digits[i];
  }
  return out.str();
}

long residual_valuation(const QSystem& s, std::span<const mpz_class> x, std::uint32_t p) {
  std::vector<mpq_class> xq(x.begin(), x.end());
  long v = kInfiniteValuation;
  for (const auto& q : s.forms()) v = std::min(v, valuation(evaluate(q, std::span<const mpq_class>(xq)), p));
  return v;
}

namespace {

// Solves A d = b over Z/p^k for A invertible mod p (pivots chosen as units).
std::vector<mpz_class> solve_unit_system(const ResidueRing& ring, Matrix<mpz_class> a, std::vector<mpz_class> b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && !ring.is_unit(a(piv, c))) ++piv;
    if (piv == n) throw Error(ErrorCode::SingularSeed, "Jacobian minor is not invertible mod p");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      std::swap(b[piv], b[c]);
    }
    const auto inv = ring.inv(a(c, c));
    for (std::size_t j = 0; j < n; ++j) a(c, j) = ring.mul(a(c, j), inv);
    b[c] = ring.mul(b[c], inv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || ring.is_zero(a(i, c))) continue;
      const auto f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) a(i, j) = ring.sub(a(i, j), ring.mul(f, a(c, j)));
      b[i] = ring.sub(b[i], ring.mul(f, b[c]));
    }
  }
  return b;
}

FormSystem<ResidueRing> to_residues(const QSystem& s, const ResidueRing& ring) {
  FormSystem<ResidueRing> out(ring, s.n());
  for (const auto& q : s.forms()) {
    QuadraticForm<ResidueRing> f(ring, s.n());
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) f.set(i, j, ring.from_rational(q.coeff(i, j)));
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

PadicVector lift_nonsingular(const QSystem& s, std::uint32_t p, std::span<const std::uint32_t> seed, std::uint32_t k) {
  if (seed.size() != s.n()) throw Error(ErrorCode::DimensionMismatch, "seed length differs from n");
  if (k == 0) throw Error(ErrorCode::PreconditionViolated, "precision must be at least 1");
  if (min_valuation(s, p) < 0) throw Error(ErrorCode::NonIntegral, "system is not p-integral");
  const FFSystem reduced = reduce_mod_p(s, p);
  for (auto c : seed) {
    if (c >= p) throw Error(ErrorCode::DimensionMismatch, "seed coordinates must lie in [0, p)");
  }
  for (auto v : evaluate(reduced, seed)) {
    if (v != 0) throw Error(ErrorCode::NotAZero, "seed is not a common zero mod p");
  }
  const auto jac = row_reduce(reduced.ring(), jacobian_at(reduced, seed));
  if (jac.rank < s.r()) throw Error(ErrorCode::SingularSeed, "Jacobian at the seed has rank < r");

  PadicVector out;
  out.p = p;
  out.k = k;
  out.seed.assign(seed.begin(), seed.end());
  // Pivot columns of the echelon form are the lexicographically first
  // independent column set.
  out.columns = jac.pivots;
  out.coords.assign(seed.begin(), seed.end());

  std::uint32_t prec = 1;
  while (prec < k) {
    const std::uint32_t next = std::min<std::uint32_t>(2 * prec, k);
    const ResidueRing ring(p, next);
    const auto sys = to_residues(s, ring);
    std::vector<mpz_class> x;
    for (const auto& c : out.coords) x.push_back(ring.reduce(c));
    const auto values = evaluate(sys, std::span<const mpz_class>(x));
    const auto j = jacobian_at(sys, std::span<const mpz_class>(x));
    Matrix<mpz_class> minor(s.r(), s.r());
    for (std::size_t i = 0; i < s.r(); ++i)
      for (std::size_t c = 0; c < s.r(); ++c) minor(i, c) = j(i, out.columns[c]);
    std::vector<mpz_class> rhs;
    for (const auto& v : values) rhs.push_back(ring.neg(v));
    const auto delta = solve_unit_system(ring, std::move(minor), std::move(rhs));
    for (std::size_t c = 0; c < s.r(); ++c) {
      auto& slot = x[out.columns[c]];
      slot = ring.add(slot, delta[c]);
    }
    out.coords = std::move(x);
    ++out.iterations;
    prec = next;
    if (residual_valuation(s, out.coords, p) < static_cast<long>(prec)) {
      throw Error(ErrorCode::PreconditionViolated, "Newton step failed to double the precision");
    }
  }
  return out;
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::NoNonsingularSeed: return "no-nonsingular-seed";
    case SolveStatus::Unknown: return "unknown";
  }
  return "unknown";
}

SolveResult padic_solve(const QSystem& s, std::uint32_t p, std::uint32_t k, const SolveOptions& options) {
  SolveResult out;
  out.minimization = minimize_heuristic(s, p, options.max_iter, options.search);
  const QSystem& model = out.minimization.model;
  const FFSystem reduced = reduce_mod_p(model, p);

  NonsingularSearch search;
  try {
    search = find_nonsingular_zero(reduced);
    out.seed_search_exhaustive = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooLarge) throw;
    EnumerateOptions sampled;
    sampled.sampling = true;
    sampled.samples = options.samples;
    sampled.seed = options.seed;
    search = find_nonsingular_zero(reduced, sampled);
    out.seed_search_exhaustive = false;
  }

  if (!search.zero) {
    if (!out.minimization.converged) {
      out.status = SolveStatus::Unknown;
      out.note = "minimization did not converge and no nonsingular seed was found";
    } else if (out.seed_search_exhaustive) {
      out.status = SolveStatus::NoNonsingularSeed;
      out.note = "no nonsingular zero mod p exists for the minimized model; this does not prove "
                 "that the system has only the trivial zero over Q_p";
    } else {
      out.status = SolveStatus::Unknown;
      out.note = "sampled seed search found no nonsingular zero mod p";
    }
    return out;
  }

  // Map y -> M y back to the input, scale to a primitive integral vector and
  // raise the working precision until the input residual reaches k.
  const QMatrix& m = out.minimization.total.M();
  std::uint32_t work = k;
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto lifted = lift_nonsingular(model, p, search.zero->point, work);
    std::vector<mpq_class> y(lifted.coords.begin(), lifted.coords.end());
    auto x = multiply(RationalField{}, m, std::span<const mpq_class>(y));
    long mv = kInfiniteValuation;
    for (const auto& c : x) mv = std::min(mv, valuation(c, p));
    if (mv == kInfiniteValuation) throw Error(ErrorCode::PreconditionViolated, "lifted zero maps to 0");
    const mpq_class scale = pow_p(p, -mv);
    for (auto& c : x) c *= scale;
    long resid = kInfiniteValuation;
    for (const auto& q : s.forms()) resid = std::min(resid, valuation(evaluate(q, std::span<const mpq_class>(x)), p));
    if (resid >= static_cast<long>(k)) {
      const ResidueRing ring(p, k);
      PadicVector sol;
      sol.p = p;
      sol.k = k;
      sol.iterations = lifted.iterations;
      sol.columns = lifted.columns;
      for (const auto& c : x) {
        const auto r = ring.from_rational(c);
        sol.coords.push_back(r);
        sol.seed.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(r.get_mpz_t(), p)));
      }
      out.model_solution = std::move(lifted);
      out.solution = std::move(sol);
      out.status = SolveStatus::Solved;
      out.note = out.minimization.converged ? "nonsingular seed lifted by Newton iteration"
                                            : "nonsingular seed lifted although minimization did not converge";
      return out;
    }
    work += static_cast<std::uint32_t>(static_cast<long>(k) - resid);
  }
  throw Error(ErrorCode::PreconditionViolated, "could not reach the requested precision on the input system");
}

}  // namespace qfs
