#include "qfs/rational.hpp"

#include "qfs/error.hpp"

namespace qfs {

long valuation(const mpz_class& x, std::uint32_t p) {
  if (x == 0) return kInfiniteValuation;
  mpz_class t = x;
  long v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

long valuation(const mpq_class& x, std::uint32_t p) {
  if (sgn(x) == 0) return kInfiniteValuation;
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

mpq_class unit_part(const mpq_class& x, std::uint32_t p) {
  if (sgn(x) == 0) throw Error(ErrorCode::ZeroArgument, "unit part of 0");
  return x / pow_p(p, valuation(x, p));
}

mpq_class pow_p(std::uint32_t p, long exponent) {
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), p, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return mpq_class(power);
  mpq_class out(1, power);
  out.canonicalize();
  return out;
}

std::uint32_t residue_mod_p(const mpq_class& x, std::uint32_t p) {
  const mpz_class& den = x.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
    throw Error(ErrorCode::NonIntegral, x.get_str() + " is not " + std::to_string(p) + "-integral");
  }
  const mpz_class pz = p;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
  mpz_class r = x.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
  return static_cast<std::uint32_t>(r.get_ui());
}

bool parse_rational(const std::string& text, mpq_class& out) {
  if (text.empty()) return false;
  try {
    mpq_class v(text, 10);
    if (sgn(v.get_den()) == 0) return false;
    v.canonicalize();
    out = v;
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace qfs
