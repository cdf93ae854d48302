#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "qfs/quadform.hpp"

namespace qfs {

// Partial derivatives of every form at x: entry (i, j) is dq_i/dx_j. Uses the
// formal rule, so d(x_j^2)/dx_j = 2 x_j vanishes in characteristic 2.
template <class R>
Matrix<typename R::value_type> jacobian_at(const FormSystem<R>& s, std::span<const typename R::value_type> x) {
  if (x.size() != s.n()) throw Error(ErrorCode::DimensionMismatch, "point length differs from n");
  Matrix<typename R::value_type> j(0, s.n());
  for (const auto& q : s.forms()) j.append_row(bilinear_functional(q, x));
  return j;
}

struct ZeroReport {
  std::vector<std::uint32_t> point;
  std::size_t jacobian_rank = 0;
  bool singular = true;
  std::vector<std::uint32_t> values;
};

struct EnumerateOptions {
  bool count_only = false;
  bool nonsingular_only = false;
  // Stop after this many reported zeros (the count is then partial).
  std::optional<std::uint64_t> limit;
  // One representative per projective class; the first nonzero coordinate is 1.
  bool projective = false;
  // Random sampling instead of exhaustive enumeration.
  bool sampling = false;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  // Force the generic path over F_2 (used by differential tests).
  bool generic_only = false;
};

struct EnumerationResult {
  std::uint64_t count = 0;
  std::uint64_t nonsingular = 0;
  std::uint64_t visited = 0;
  std::vector<ZeroReport> zeros;
  bool exhaustive = true;
  bool truncated = false;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kMaxEnumeration = 100'000'000;

// Common zeros over F_q. Exhaustive mode covers all q^n points (or the
// projective classes) and throws TooLarge beyond kMaxEnumeration; sampling mode
// draws random points from a seeded generator.
EnumerationResult enumerate_common_zeros(const FFSystem& s, const EnumerateOptions& options = {});

// Common zeros over Z/p^k by exhaustive enumeration of residues. A zero is
// nonsingular when its Jacobian has rank r modulo p.
EnumerationResult enumerate_common_zeros_mod_pk(const QSystem& s, std::uint32_t p, std::uint32_t k,
                                                const EnumerateOptions& options = {});

std::size_t jacobian_rank(const FFSystem& s, std::span<const std::uint32_t> x);

// Affine zero count from the classification of q (rank, radical, and the
// discriminant or Arf class of the nondegenerate part).
mpz_class count_zeros_exact(const FFForm& q);

struct ChevalleyWarningResult {
  std::uint64_t count = 0;
  bool congruent = false;
};

// Throws PreconditionViolated when n <= 2r or the field is not prime.
ChevalleyWarningResult chevalley_warning_check(const FFSystem& s);

struct NonsingularSearch {
  std::optional<ZeroReport> zero;
  // True when the absence of a nonsingular zero is certified by exhaustion.
  bool certified = false;
  std::uint64_t visited = 0;
};

NonsingularSearch find_nonsingular_zero(const FFSystem& s, const EnumerateOptions& options = {});

// Bit-packed F_2 representation: point bit (n-1-i) holds x_{i+1}, so counting
// upwards visits points in lexicographic order.
class BinarySystem {
 public:
  explicit BinarySystem(const FFSystem& s);

  std::size_t n() const { return n_; }
  std::size_t r() const { return diag_.size(); }

  std::uint64_t bit(std::size_t i) const { return std::uint64_t{1} << (n_ - 1 - i); }
  // Value of form k at the packed point x.
  bool evaluate(std::size_t k, std::uint64_t x) const;
  // Change of form k when coordinate i flips, given x before the flip.
  bool flip_delta(std::size_t k, std::size_t i, std::uint64_t x) const {
    return diag_[k][i] ^ (std::popcount(x & neighbours_[k][i]) & 1);
  }
  // Packed gradient row of form k at x.
  std::uint64_t gradient(std::size_t k, std::uint64_t x) const;
  std::size_t jacobian_rank(std::uint64_t x) const;

  std::uint64_t pack(std::span<const std::uint32_t> x) const;
  std::vector<std::uint32_t> unpack(std::uint64_t x) const;

 private:
  std::size_t n_;
  std::vector<std::vector<bool>> diag_;
  std::vector<std::vector<std::uint64_t>> neighbours_;
};

// Rank of packed F_2 row vectors.
std::size_t binary_rank(std::vector<std::uint64_t> rows);

}  // namespace qfs
