#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qfs/error.hpp"

namespace qfs {

enum class FieldKind { PrimeField, ExtensionField, ModPkRing, PadicRational };

// Describes a coefficient domain. `modulus` lists the coefficients of the
// defining polynomial from the constant term upwards (extension fields only);
// `k` is the precision exponent for Z/p^k and Q_p.
struct FieldDesc {
  FieldKind kind = FieldKind::PrimeField;
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::vector<std::uint32_t> modulus;
  std::uint32_t k = 1;

  static constexpr std::uint32_t kDefaultPadicPrecision = 20;

  static FieldDesc prime_field(std::uint32_t p);
  static FieldDesc extension_field(std::uint32_t p, std::vector<std::uint32_t> modulus);
  static FieldDesc mod_pk(std::uint32_t p, std::uint32_t k);
  static FieldDesc padic(std::uint32_t p, std::uint32_t k = kDefaultPadicPrecision);

  // Throws Error(BadField) when an invariant fails.
  void validate() const;

  bool is_finite_field() const {
    return kind == FieldKind::PrimeField || kind == FieldKind::ExtensionField;
  }
  // Number of elements of a finite field; 0 otherwise.
  std::uint64_t order() const;

  bool operator==(const FieldDesc&) const = default;
};

bool is_prime(std::uint64_t n);

// Irreducibility of a polynomial over F_p (coefficients low to high) by
// exhaustive search for monic divisors of degree <= deg/2.
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly);

// F_q for q = p^e <= 2^16. Elements are integer codes sum_i c_i p^i where c_i
// is the coefficient of t^i in the polynomial representative.
class FiniteField {
 public:
  using value_type = std::uint32_t;

  static constexpr std::uint64_t kMaxOrder = 1u << 16;

  // F_2.
  FiniteField() : FiniteField(FieldDesc::prime_field(2)) {}
  explicit FiniteField(const FieldDesc& desc);
  static FiniteField prime(std::uint32_t p) { return FiniteField(FieldDesc::prime_field(p)); }

  const FieldDesc& desc() const { return impl_->desc; }
  std::uint32_t characteristic() const { return impl_->desc.p; }
  std::uint32_t degree() const { return impl_->desc.e; }
  std::uint32_t order() const { return impl_->q; }
  bool is_prime_field() const { return impl_->desc.e == 1; }
  bool is_binary() const { return impl_->q == 2; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const;
  value_type from_coefficients(const std::vector<std::uint32_t>& coeffs) const;
  std::vector<std::uint32_t> coefficients(value_type a) const;

  bool is_zero(value_type a) const { return a == 0; }
  bool equal(value_type a, value_type b) const { return a == b; }

  value_type add(value_type a, value_type b) const {
    if (impl_->desc.e == 1) {
      value_type s = a + b;
      return s >= impl_->q ? s - impl_->q : s;
    }
    if (impl_->desc.p == 2) return a ^ b;
    return add_slow(a, b);
  }
  value_type neg(value_type a) const {
    if (impl_->desc.e == 1) return a == 0 ? 0 : impl_->q - a;
    if (impl_->desc.p == 2) return a;
    return neg_slow(a);
  }
  value_type sub(value_type a, value_type b) const { return add(a, neg(b)); }
  value_type mul(value_type a, value_type b) const {
    if (impl_->desc.e == 1) {
      return static_cast<value_type>(std::uint64_t{a} * b % impl_->q);
    }
    if (!impl_->mul_table.empty()) return impl_->mul_table[a * impl_->q + b];
    return mul_slow(a, b);
  }
  // Throws Error(ZeroInverse) for a = 0.
  value_type inv(value_type a) const;
  value_type pow(value_type a, std::uint64_t exponent) const;

  // Quadratic character for odd characteristic: 0, +1 or -1.
  int quadratic_character(value_type a) const;
  bool is_square(value_type a) const;
  // The unique square root in characteristic 2 (inverse Frobenius).
  value_type frobenius_inverse(value_type a) const;
  // Absolute trace down to F_p, returned as an integer in [0, p).
  std::uint32_t absolute_trace(value_type a) const;

  std::string to_string(value_type a) const;

  bool operator==(const FiniteField& other) const {
    return impl_ == other.impl_ || impl_->desc == other.impl_->desc;
  }

 private:
  struct Impl {
    FieldDesc desc;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> monic;  // monic modulus, length e+1
    std::vector<std::uint16_t> mul_table;
  };

  value_type add_slow(value_type a, value_type b) const;
  value_type neg_slow(value_type a) const;
  value_type mul_slow(value_type a, value_type b) const;

  std::shared_ptr<const Impl> impl_;
};

// Q with exact GMP rationals. The p used for valuations travels separately.
class RationalField {
 public:
  using value_type = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(mpz_class(std::to_string(v))); }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw Error(ErrorCode::ZeroInverse, "inverse of 0 in Q");
    return 1 / a;
  }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  bool operator==(const RationalField&) const { return true; }
};

// Z/p^k with arbitrary-precision residues in [0, p^k).
class ResidueRing {
 public:
  using value_type = mpz_class;

  ResidueRing(std::uint32_t p, std::uint32_t k);

  std::uint32_t prime() const { return p_; }
  std::uint32_t exponent() const { return k_; }
  const mpz_class& modulus() const { return modulus_; }

  value_type zero() const { return 0; }
  value_type one() const { return modulus_ == 1 ? mpz_class(0) : mpz_class(1); }
  value_type reduce(const mpz_class& v) const;
  // Rationals whose denominator is a unit map to the corresponding residue;
  // throws Error(NonIntegral) otherwise.
  value_type from_rational(const mpq_class& v) const;
  value_type from_int(long long v) const { return reduce(mpz_class(std::to_string(v))); }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }
  bool is_unit(const value_type& a) const;
  value_type add(const value_type& a, const value_type& b) const { return reduce(a + b); }
  value_type sub(const value_type& a, const value_type& b) const { return reduce(a - b); }
  value_type neg(const value_type& a) const { return reduce(-a); }
  value_type mul(const value_type& a, const value_type& b) const { return reduce(a * b); }
  // Throws ZeroInverse for 0 and NonUnit when p divides a.
  value_type inv(const value_type& a) const;
  std::string to_string(const value_type& a) const { return a.get_str(); }
  bool operator==(const ResidueRing& o) const { return p_ == o.p_ && k_ == o.k_; }

 private:
  std::uint32_t p_;
  std::uint32_t k_;
  mpz_class modulus_;
};

}  // namespace qfs
