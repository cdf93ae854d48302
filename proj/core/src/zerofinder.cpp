#include "qfs/zerofinder.hpp"

#include <functional>

namespace qfs {

namespace {

std::uint64_t checked_power(std::uint64_t base, std::size_t exponent, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (total > cap / base) return cap + 1;
    total *= base;
  }
  return total;
}

// Prefix recursion: coordinates are fixed from the left while each form keeps
// its value on the fixed prefix and the linear coefficients of the remaining
// variables. A form whose last active variable is fixed prunes the branch as
// soon as its value is nonzero.
template <class R>
class PrefixEnumerator {
 public:
  using value_type = typename R::value_type;
  // Returns false to stop the enumeration.
  using Visitor = std::function<bool(const std::vector<value_type>&)>;

  PrefixEnumerator(const FormSystem<R>& s, std::vector<value_type> elements, bool projective)
      : s_(s), ring_(s.ring()), elements_(std::move(elements)), projective_(projective) {
    const std::size_t n = s.n(), r = s.r();
    last_.assign(r, -1);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          if (!ring_.is_zero(s[k].coeff(i, j))) last_[k] = std::max<long>(last_[k], static_cast<long>(j));
    values_.assign(n + 1, std::vector<value_type>(r, ring_.zero()));
    linear_.assign(n + 1, std::vector<std::vector<value_type>>(r, std::vector<value_type>(n, ring_.zero())));
    x_.assign(n, ring_.zero());
  }

  std::uint64_t leaves() const { return leaves_; }

  void run(const Visitor& visit) {
    visit_ = &visit;
    stopped_ = false;
    recurse(0, true);
  }

 private:
  void recurse(std::size_t depth, bool all_zero) {
    const std::size_t n = s_.n(), r = s_.r();
    if (depth == n) {
      ++leaves_;
      if (projective_ && all_zero) return;
      for (std::size_t k = 0; k < r; ++k)
        if (!ring_.is_zero(values_[n][k])) return;
      if (!(*visit_)(x_)) stopped_ = true;
      return;
    }
    const std::size_t choices = projective_ && all_zero ? std::min<std::size_t>(2, elements_.size()) : elements_.size();
    for (std::size_t c = 0; c < choices && !stopped_; ++c) {
      const value_type& a = elements_[c];
      x_[depth] = a;
      bool pruned = false;
      for (std::size_t k = 0; k < r; ++k) {
        const auto& q = s_[k];
        auto& v = values_[depth + 1][k];
        v = values_[depth][k];
        if (!ring_.is_zero(a)) {
          v = ring_.add(v, ring_.mul(a, ring_.add(linear_[depth][k][depth], ring_.mul(q.coeff(depth, depth), a))));
        }
        if (last_[k] <= static_cast<long>(depth) && !ring_.is_zero(v)) {
          pruned = true;
          break;
        }
        auto& next = linear_[depth + 1][k];
        const auto& cur = linear_[depth][k];
        for (std::size_t j = depth + 1; j < n; ++j) {
          next[j] = ring_.is_zero(a) ? cur[j] : ring_.add(cur[j], ring_.mul(q.coeff(depth, j), a));
        }
      }
      if (pruned) continue;
      recurse(depth + 1, all_zero && ring_.is_zero(a));
    }
  }

  const FormSystem<R>& s_;
  R ring_;
  std::vector<value_type> elements_;
  bool projective_;
  std::vector<long> last_;
  std::vector<std::vector<value_type>> values_;
  std::vector<std::vector<std::vector<value_type>>> linear_;
  std::vector<value_type> x_;
  const Visitor* visit_ = nullptr;
  bool stopped_ = false;
  std::uint64_t leaves_ = 0;
};

// Shared bookkeeping for emitted zeros. Returns false when the limit is hit.
bool record_zero(EnumerationResult& out, const EnumerateOptions& options, ZeroReport report, std::size_t r) {
  ++out.count;
  const bool nonsingular = report.jacobian_rank == r;
  if (nonsingular) ++out.nonsingular;
  if (options.count_only) return true;
  if (options.nonsingular_only && !nonsingular) return true;
  out.zeros.push_back(std::move(report));
  if (options.limit && out.zeros.size() >= *options.limit) {
    out.truncated = true;
    return false;
  }
  return true;
}

bool needs_rank(const EnumerateOptions& options) { return !options.count_only || options.nonsingular_only; }

ZeroReport make_report(const FFSystem& s, std::vector<std::uint32_t> point, std::size_t jac_rank) {
  ZeroReport z;
  z.values = evaluate(s, std::span<const std::uint32_t>(point));
  for (auto v : z.values) {
    if (v != 0) throw Error(ErrorCode::NotAZero, "emitted point does not vanish");
  }
  z.point = std::move(point);
  z.jacobian_rank = jac_rank;
  z.singular = jac_rank < s.r();
  return z;
}

EnumerationResult enumerate_binary(const FFSystem& s, const EnumerateOptions& options) {
  const BinarySystem b(s);
  const std::size_t n = s.n(), r = s.r();
  EnumerationResult out;
  std::uint64_t values = 0;  // bit k set when form k is nonzero at x
  const std::uint64_t end = n == 64 ? 0 : (std::uint64_t{1} << n);
  std::uint64_t x = 0;
  // Lexicographic order: x = 0, 1, 2, ... with x_1 as the most significant bit.
  while (true) {
    ++out.visited;
    if (values == 0 && !(options.projective && x == 0)) {
      const std::size_t jr = needs_rank(options) ? b.jacobian_rank(x) : 0;
      ZeroReport z;
      if (options.count_only) {
        z.jacobian_rank = jr;
      } else {
        z = make_report(s, b.unpack(x), jr);
      }
      if (!record_zero(out, options, std::move(z), r)) return out;
    }
    if (x + 1 == end) break;
    // Increment: clear the trailing ones, then set the next zero bit.
    std::uint64_t carry = ~x & (x + 1);
    for (std::uint64_t m = x & (carry - 1); true;) {
      const std::uint64_t low = m ? (m & -m) : carry;
      const std::size_t i = n - 1 - static_cast<std::size_t>(std::countr_zero(low));
      for (std::size_t k = 0; k < r; ++k) {
        if (b.flip_delta(k, i, x)) values ^= std::uint64_t{1} << k;
      }
      x ^= low;
      if (!m) break;
      m &= m - 1;
    }
  }
  return out;
}

EnumerationResult enumerate_sampled(const FFSystem& s, const EnumerateOptions& options) {
  EnumerationResult out;
  out.exhaustive = false;
  out.seed = options.seed;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, s.ring().order() - 1);
  std::vector<std::uint32_t> x(s.n());
  for (std::uint64_t t = 0; t < options.samples; ++t) {
    bool nonzero = false;
    for (auto& c : x) {
      c = dist(rng);
      nonzero = nonzero || c != 0;
    }
    ++out.visited;
    if (!nonzero && options.projective) continue;
    bool zero = true;
    for (const auto& q : s.forms()) {
      if (evaluate(q, std::span<const std::uint32_t>(x)) != 0) {
        zero = false;
        break;
      }
    }
    if (!zero) continue;
    const std::size_t jr = needs_rank(options) ? jacobian_rank(s, x) : 0;
    ZeroReport z;
    if (options.count_only) z.jacobian_rank = jr;
    else z = make_report(s, x, jr);
    if (!record_zero(out, options, std::move(z), s.r())) break;
  }
  return out;
}

}  // namespace

std::size_t jacobian_rank(const FFSystem& s, std::span<const std::uint32_t> x) {
  return rank(s.ring(), jacobian_at(s, x));
}

EnumerationResult enumerate_common_zeros(const FFSystem& s, const EnumerateOptions& options) {
  if (options.sampling) return enumerate_sampled(s, options);
  const FiniteField& field = s.ring();
  if (checked_power(field.order(), s.n(), kMaxEnumeration) > kMaxEnumeration) {
    throw Error(ErrorCode::TooLarge, "q^n exceeds the exhaustive enumeration cap of 10^8");
  }
  if (field.is_binary() && !options.generic_only && s.n() <= 63 && s.r() <= 64) {
    return enumerate_binary(s, options);
  }
  std::vector<std::uint32_t> elements(field.order());
  for (std::uint32_t i = 0; i < field.order(); ++i) elements[i] = i;
  PrefixEnumerator<FiniteField> en(s, std::move(elements), options.projective);
  EnumerationResult out;
  en.run([&](const std::vector<std::uint32_t>& x) {
    const std::size_t jr = needs_rank(options) ? jacobian_rank(s, x) : 0;
    ZeroReport z;
    if (options.count_only) z.jacobian_rank = jr;
    else z = make_report(s, x, jr);
    return record_zero(out, options, std::move(z), s.r());
  });
  out.visited = en.leaves();
  return out;
}

EnumerationResult enumerate_common_zeros_mod_pk(const QSystem& s, std::uint32_t p, std::uint32_t k,
                                                const EnumerateOptions& options) {
  const ResidueRing ring(p, k);
  if (ring.modulus() > kMaxEnumeration ||
      checked_power(ring.modulus().get_ui(), s.n(), kMaxEnumeration) > kMaxEnumeration) {
    throw Error(ErrorCode::TooLarge, "(p^k)^n exceeds the exhaustive enumeration cap of 10^8");
  }
  FormSystem<ResidueRing> sys(ring, s.n());
  for (const auto& q : s.forms()) {
    QuadraticForm<ResidueRing> f(ring, s.n());
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) f.set(i, j, ring.from_rational(q.coeff(i, j)));
    sys.push_back(std::move(f));
  }
  const FFSystem mod_p = reduce_mod_p(s, p);
  std::vector<mpz_class> elements;
  for (unsigned long i = 0; i < ring.modulus().get_ui(); ++i) elements.emplace_back(i);
  PrefixEnumerator<ResidueRing> en(sys, std::move(elements), options.projective);
  EnumerationResult out;
  en.run([&](const std::vector<mpz_class>& x) {
    std::vector<std::uint32_t> point, residue;
    for (const auto& c : x) {
      point.push_back(static_cast<std::uint32_t>(c.get_ui()));
      residue.push_back(static_cast<std::uint32_t>(c.get_ui() % p));
    }
    ZeroReport z;
    z.jacobian_rank = needs_rank(options) ? jacobian_rank(mod_p, residue) : 0;
    z.singular = z.jacobian_rank < s.r();
    z.values.assign(s.r(), 0);
    z.point = std::move(point);
    return record_zero(out, options, std::move(z), s.r());
  });
  out.visited = en.leaves();
  return out;
}

mpz_class count_zeros_exact(const FFForm& q) {
  const FiniteField& field = q.ring();
  const mpz_class qq = field.order();
  const std::size_t n = q.n();
  auto power = [&](std::size_t e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), qq.get_mpz_t(), e);
    return out;
  };

  if (field.characteristic() != 2) {
    const auto red = reduce_effective_variables(q);
    const std::size_t m = red.m;
    if (m == 0) return power(n);
    mpz_class core;
    if (m % 2 == 1) {
      core = power(m - 1);
    } else {
      // Delta = det(Gram)/2^m is the discriminant of a diagonalization.
      auto delta = determinant(field, gram_matrix(red.reduced));
      const auto half = field.inv(field.from_int(2));
      for (std::size_t i = 0; i < m; ++i) delta = field.mul(delta, half);
      if ((m / 2) % 2 == 1) delta = field.neg(delta);
      const int eta = field.quadratic_character(delta);
      core = power(m - 1) + eta * (power(m / 2) - power(m / 2 - 1));
    }
    return core * power(n - m);
  }

  const auto kernel = kernel_basis(field, polar_matrix(q));
  for (const auto& k : kernel) {
    if (evaluate(q, std::span<const std::uint32_t>(k)) != 0) return power(n - 1);
  }
  // q vanishes on the polar kernel; the complement coordinates carry a
  // nondegenerate alternating form, reduced to a symplectic basis.
  const auto ker_space = Subspace<FiniteField>::span(field, n, kernel);
  std::vector<bool> is_pivot(n, false);
  for (auto c : ker_space.pivots()) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> pool;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    std::vector<std::uint32_t> v(n, 0);
    v[c] = 1;
    pool.push_back(std::move(v));
  }
  auto b = [&](const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
    return bilinear(q, std::span<const std::uint32_t>(x), std::span<const std::uint32_t>(y));
  };
  std::uint32_t arf = 0;
  std::size_t s = 0;
  while (!pool.empty()) {
    auto u = pool.back();
    pool.pop_back();
    std::size_t idx = 0;
    while (idx < pool.size() && b(u, pool[idx]) == 0) ++idx;
    if (idx == pool.size()) throw Error(ErrorCode::PreconditionViolated, "polar form degenerate off its kernel");
    auto v = pool[idx];
    pool.erase(pool.begin() + static_cast<long>(idx));
    const auto scale = field.inv(b(u, v));
    for (auto& c : v) c = field.mul(c, scale);
    for (auto& w : pool) {
      const auto wv = b(w, v), wu = b(w, u);
      for (std::size_t j = 0; j < n; ++j) {
        w[j] = field.add(field.sub(w[j], field.mul(wv, u[j])), field.mul(wu, v[j]));
      }
    }
    arf = field.add(arf, field.mul(evaluate(q, std::span<const std::uint32_t>(u)),
                                   evaluate(q, std::span<const std::uint32_t>(v))));
    ++s;
  }
  const int eps = field.absolute_trace(arf) == 0 ? 1 : -1;
  const mpz_class core = s == 0 ? mpz_class(1) : power(2 * s - 1) + eps * (power(s) - power(s - 1));
  return core * power(kernel.size());
}

ChevalleyWarningResult chevalley_warning_check(const FFSystem& s) {
  if (!s.ring().is_prime_field()) {
    throw Error(ErrorCode::PreconditionViolated, "Chevalley-Warning check needs a prime field");
  }
  if (s.n() <= 2 * s.r()) {
    throw Error(ErrorCode::PreconditionViolated, "n <= 2r: the Chevalley-Warning congruence does not apply");
  }
  EnumerateOptions opts;
  opts.count_only = true;
  const auto res = enumerate_common_zeros(s, opts);
  return {res.count, res.count % s.ring().characteristic() == 0};
}

NonsingularSearch find_nonsingular_zero(const FFSystem& s, const EnumerateOptions& options) {
  EnumerateOptions opts = options;
  opts.count_only = false;
  opts.nonsingular_only = true;
  opts.limit = 1;
  const auto res = enumerate_common_zeros(s, opts);
  NonsingularSearch out;
  out.visited = res.visited;
  if (!res.zeros.empty()) out.zero = res.zeros.front();
  else out.certified = res.exhaustive;
  return out;
}

// ---------------------------------------------------------------------------

BinarySystem::BinarySystem(const FFSystem& s) : n_(s.n()) {
  if (!s.ring().is_binary()) throw Error(ErrorCode::FieldMismatch, "bit-packed path needs F_2");
  if (n_ == 0 || n_ > 63) throw Error(ErrorCode::TooLarge, "bit-packed path supports 1 <= n <= 63");
  for (const auto& q : s.forms()) {
    std::vector<bool> d(n_, false);
    std::vector<std::uint64_t> nb(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      d[i] = q.coeff(i, i) != 0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (q.coeff(i, j) == 0) continue;
        nb[i] |= bit(j);
        nb[j] |= bit(i);
      }
    }
    diag_.push_back(std::move(d));
    neighbours_.push_back(std::move(nb));
  }
}

bool BinarySystem::evaluate(std::size_t k, std::uint64_t x) const {
  bool v = false;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(x & bit(i))) continue;
    v ^= diag_[k][i];
    // Count each off-diagonal pair once through its larger index.
    const std::uint64_t higher = bit(i) - 1;
    v ^= std::popcount(x & neighbours_[k][i] & higher) & 1;
  }
  return v;
}

std::uint64_t BinarySystem::gradient(std::size_t k, std::uint64_t x) const {
  std::uint64_t g = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (std::popcount(x & neighbours_[k][j]) & 1) g |= bit(j);
  }
  return g;
}

std::size_t BinarySystem::jacobian_rank(std::uint64_t x) const {
  std::vector<std::uint64_t> rows;
  rows.reserve(r());
  for (std::size_t k = 0; k < r(); ++k) rows.push_back(gradient(k, x));
  return binary_rank(std::move(rows));
}

std::uint64_t BinarySystem::pack(std::span<const std::uint32_t> x) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < n_; ++i)
    if (x[i]) out |= bit(i);
  return out;
}

std::vector<std::uint32_t> BinarySystem::unpack(std::uint64_t x) const {
  std::vector<std::uint32_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = (x & bit(i)) ? 1 : 0;
  return out;
}

std::size_t binary_rank(std::vector<std::uint64_t> rows) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] == 0) continue;
    ++rank;
    const std::uint64_t pivot = rows[i] & -rows[i];
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j] & pivot) rows[j] ^= rows[i];
    }
  }
  return rank;
}

}  // namespace qfs
