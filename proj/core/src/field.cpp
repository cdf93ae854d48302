#include "qfs/field.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace qfs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::BadField: return "BadField";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonIntegral: return "NonIntegral";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::WitnessInvalid: return "WitnessInvalid";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::SingularSeed: return "SingularSeed";
    case ErrorCode::NotAZero: return "NotAZero";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime and small, Fermat is fine.
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of f modulo g over F_p; g nonzero.
Poly poly_mod(Poly f, const Poly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint32_t lead_inv = inv_mod(g.back(), p);
  while (f.size() >= g.size()) {
    const std::uint64_t factor = std::uint64_t{f.back()} * lead_inv % p;
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      const std::uint64_t sub = factor * g[i] % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  return f;
}

}  // namespace

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly_in) {
  Poly f = poly_in;
  for (auto& c : f) c %= p;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  // Every monic polynomial of degree d in [1, deg/2].
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

FieldDesc FieldDesc::prime_field(std::uint32_t p) {
  FieldDesc d;
  d.kind = FieldKind::PrimeField;
  d.p = p;
  return d;
}

FieldDesc FieldDesc::extension_field(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  FieldDesc d;
  d.kind = FieldKind::ExtensionField;
  d.p = p;
  for (auto& c : modulus) c %= (p == 0 ? 1 : p);
  d.modulus = std::move(modulus);
  d.e = d.modulus.empty() ? 0 : static_cast<std::uint32_t>(d.modulus.size() - 1);
  return d;
}

FieldDesc FieldDesc::mod_pk(std::uint32_t p, std::uint32_t k) {
  FieldDesc d;
  d.kind = FieldKind::ModPkRing;
  d.p = p;
  d.k = k;
  return d;
}

FieldDesc FieldDesc::padic(std::uint32_t p, std::uint32_t k) {
  FieldDesc d;
  d.kind = FieldKind::PadicRational;
  d.p = p;
  d.k = k;
  return d;
}

std::uint64_t FieldDesc::order() const {
  if (!is_finite_field()) return 0;
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) q *= p;
  return q;
}

void FieldDesc::validate() const {
  if (p > (1u << 31) || !is_prime(p)) {
    throw Error(ErrorCode::BadField, std::to_string(p) + " is not a prime <= 2^31");
  }
  switch (kind) {
    case FieldKind::PrimeField:
      if (e != 1) throw Error(ErrorCode::BadField, "prime field must have e = 1");
      break;
    case FieldKind::ExtensionField: {
      if (modulus.empty() || modulus.back() % p == 0 || e + 1 != modulus.size()) {
        throw Error(ErrorCode::BadField, "extension modulus must have nonzero leading coefficient");
      }
      if (e < 1 || e > 8) throw Error(ErrorCode::BadField, "extension degree must be in [1, 8]");
      if (order() > FiniteField::kMaxOrder) {
        throw Error(ErrorCode::BadField, "field order exceeds 2^16");
      }
      if (!is_irreducible(p, modulus)) {
        throw Error(ErrorCode::BadField, "extension modulus is reducible over F_" + std::to_string(p));
      }
      break;
    }
    case FieldKind::ModPkRing:
    case FieldKind::PadicRational:
      if (k < 1) throw Error(ErrorCode::BadField, "precision exponent must be >= 1");
      break;
  }
}

// ---------------------------------------------------------------------------

FiniteField::FiniteField(const FieldDesc& desc_in) {
  if (!desc_in.is_finite_field()) {
    throw Error(ErrorCode::BadField, "FiniteField requires a prime or extension field");
  }
  // Validation (irreducibility in particular) is not free; share one Impl per
  // descriptor.
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::shared_ptr<const Impl>> cache;

  FieldDesc desc = desc_in;
  if (desc.kind == FieldKind::ExtensionField && desc.e == 1) {
    desc = FieldDesc::prime_field(desc.p);
  }
  const auto key = std::make_pair(desc.p, desc.kind == FieldKind::PrimeField
                                              ? std::vector<std::uint32_t>{}
                                              : desc.modulus);
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) {
    impl_ = it->second;
    return;
  }
  desc.validate();
  if (desc.order() > kMaxOrder) throw Error(ErrorCode::BadField, "field order exceeds 2^16");

  auto impl = std::make_shared<Impl>();
  impl->desc = desc;
  impl->q = static_cast<std::uint32_t>(desc.order());
  if (desc.kind == FieldKind::ExtensionField) {
    const std::uint32_t lead_inv = inv_mod(desc.modulus.back(), desc.p);
    impl->monic.resize(desc.modulus.size());
    for (std::size_t i = 0; i < desc.modulus.size(); ++i) {
      impl->monic[i] = static_cast<std::uint32_t>(std::uint64_t{desc.modulus[i]} * lead_inv % desc.p);
    }
  }
  impl_ = impl;
  if (desc.kind == FieldKind::ExtensionField && impl->q <= 256) {
    std::vector<std::uint16_t> table(std::size_t{impl->q} * impl->q);
    for (std::uint32_t a = 0; a < impl->q; ++a) {
      for (std::uint32_t b = 0; b < impl->q; ++b) {
        table[std::size_t{a} * impl->q + b] = static_cast<std::uint16_t>(mul_slow(a, b));
      }
    }
    impl->mul_table = std::move(table);
  }
  cache.emplace(key, impl_);
}

FiniteField::value_type FiniteField::from_int(long long v) const {
  const long long p = impl_->desc.p;
  long long r = v % p;
  if (r < 0) r += p;
  return static_cast<value_type>(r);
}

FiniteField::value_type FiniteField::from_coefficients(const std::vector<std::uint32_t>& coeffs) const {
  const std::uint32_t p = impl_->desc.p;
  if (impl_->desc.e == 1) {
    std::uint64_t v = coeffs.empty() ? 0 : coeffs[0] % p;
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
      if (coeffs[i] % p != 0) {
        throw Error(ErrorCode::FieldMismatch, "polynomial literal in a prime field");
      }
    }
    return static_cast<value_type>(v);
  }
  Poly f(coeffs.begin(), coeffs.end());
  for (auto& c : f) c %= p;
  f = poly_mod(f, impl_->monic, p);
  value_type code = 0, scale = 1;
  for (std::uint32_t c : f) {
    code += c * scale;
    scale *= p;
  }
  return code;
}

std::vector<std::uint32_t> FiniteField::coefficients(value_type a) const {
  const std::uint32_t p = impl_->desc.p;
  std::vector<std::uint32_t> out(impl_->desc.e, 0);
  for (std::uint32_t i = 0; i < impl_->desc.e; ++i) {
    out[i] = a % p;
    a /= p;
  }
  return out;
}

FiniteField::value_type FiniteField::add_slow(value_type a, value_type b) const {
  const std::uint32_t p = impl_->desc.p;
  value_type out = 0, scale = 1;
  for (std::uint32_t i = 0; i < impl_->desc.e; ++i) {
    out += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return out;
}

FiniteField::value_type FiniteField::neg_slow(value_type a) const {
  const std::uint32_t p = impl_->desc.p;
  value_type out = 0, scale = 1;
  for (std::uint32_t i = 0; i < impl_->desc.e; ++i) {
    out += ((p - a % p) % p) * scale;
    a /= p;
    scale *= p;
  }
  return out;
}

FiniteField::value_type FiniteField::mul_slow(value_type a, value_type b) const {
  const std::uint32_t p = impl_->desc.p;
  const std::uint32_t e = impl_->desc.e;
  const auto ca = coefficients(a);
  const auto cb = coefficients(b);
  std::vector<std::uint64_t> prod(2 * e - 1, 0);
  for (std::uint32_t i = 0; i < e; ++i) {
    if (!ca[i]) continue;
    for (std::uint32_t j = 0; j < e; ++j) {
      prod[i + j] = (prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p;
    }
  }
  // Reduce by the monic modulus from the top down.
  const auto& m = impl_->monic;
  for (std::size_t d = prod.size(); d-- > e;) {
    const std::uint64_t c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (std::uint32_t i = 0; i < e; ++i) {
      prod[d - e + i] = (prod[d - e + i] + (p - c) * m[i]) % p;
    }
  }
  value_type out = 0, scale = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    out += static_cast<value_type>(prod[i]) * scale;
    scale *= p;
  }
  return out;
}

FiniteField::value_type FiniteField::pow(value_type a, std::uint64_t exponent) const {
  value_type result = one();
  value_type base = a;
  while (exponent) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

FiniteField::value_type FiniteField::inv(value_type a) const {
  if (a == 0) throw Error(ErrorCode::ZeroInverse, "inverse of 0 in F_" + std::to_string(impl_->q));
  if (impl_->desc.e == 1) return inv_mod(a, impl_->q);
  return pow(a, impl_->q - 2);
}

int FiniteField::quadratic_character(value_type a) const {
  if (a == 0) return 0;
  if (impl_->desc.p == 2) return 1;
  return pow(a, (impl_->q - 1) / 2) == one() ? 1 : -1;
}

bool FiniteField::is_square(value_type a) const { return quadratic_character(a) >= 0; }

FiniteField::value_type FiniteField::frobenius_inverse(value_type a) const {
  if (impl_->desc.p != 2) {
    throw Error(ErrorCode::PreconditionViolated, "frobenius_inverse is for characteristic 2");
  }
  // x -> x^2 is bijective; its inverse is x -> x^(q/2).
  return pow(a, impl_->q / 2);
}

std::uint32_t FiniteField::absolute_trace(value_type a) const {
  value_type sum = 0, power = a;
  for (std::uint32_t i = 0; i < impl_->desc.e; ++i) {
    sum = add(sum, power);
    power = pow(power, impl_->desc.p);
  }
  // The trace lies in the prime subfield, i.e. it is a constant polynomial.
  return sum;
}

std::string FiniteField::to_string(value_type a) const {
  if (impl_->desc.e == 1) return std::to_string(a);
  const auto c = coefficients(a);
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (!c[i]) continue;
    if (!first) out << " + ";
    first = false;
    out << c[i];
    if (i == 1) out << "*t";
    if (i > 1) out << "*t^" << i;
  }
  if (first) return "0";
  return "(" + out.str() + ")";
}

// ---------------------------------------------------------------------------

ResidueRing::ResidueRing(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
  if (!is_prime(p)) throw Error(ErrorCode::BadField, std::to_string(p) + " is not prime");
  if (k < 1) throw Error(ErrorCode::BadField, "precision exponent must be >= 1");
  mpz_ui_pow_ui(modulus_.get_mpz_t(), p, k);
}

ResidueRing::value_type ResidueRing::reduce(const mpz_class& v) const {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
  return r;
}

bool ResidueRing::is_unit(const value_type& a) const {
  return mpz_divisible_ui_p(a.get_mpz_t(), p_) == 0;
}

ResidueRing::value_type ResidueRing::inv(const value_type& a) const {
  const mpz_class r = reduce(a);
  if (r == 0) throw Error(ErrorCode::ZeroInverse, "inverse of 0 in Z/p^k");
  if (!is_unit(r)) throw Error(ErrorCode::NonUnit, r.get_str() + " is not a unit mod " + modulus_.get_str());
  mpz_class out;
  mpz_invert(out.get_mpz_t(), r.get_mpz_t(), modulus_.get_mpz_t());
  return out;
}

ResidueRing::value_type ResidueRing::from_rational(const mpq_class& v) const {
  const mpz_class& den = v.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), p_)) {
    throw Error(ErrorCode::NonIntegral, v.get_str() + " is not p-integral for p = " + std::to_string(p_));
  }
  mpz_class den_inv;
  mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), modulus_.get_mpz_t());
  return reduce(v.get_num() * den_inv);
}

}  // namespace qfs
