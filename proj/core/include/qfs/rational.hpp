#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

namespace qfs {

// v_p(0) is reported as +infinity.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

long valuation(const mpz_class& x, std::uint32_t p);
long valuation(const mpq_class& x, std::uint32_t p);

// Unit part u of x = p^v u (sign kept); requires x != 0.
mpq_class unit_part(const mpq_class& x, std::uint32_t p);

mpq_class pow_p(std::uint32_t p, long exponent);

// Residue of a p-integral rational modulo p, in [0, p).
std::uint32_t residue_mod_p(const mpq_class& x, std::uint32_t p);

// Parse "a" or "a/b" into a rational; returns false on malformed input.
bool parse_rational(const std::string& text, mpq_class& out);

}  // namespace qfs
