#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qfs/minimize.hpp"
#include "qfs/zerofinder.hpp"

namespace qfs {

// Residues modulo p^k with the mod-p seed they were lifted from.
struct PadicVector {
  std::uint32_t p = 2;
  std::uint32_t k = 1;
  std::vector<mpz_class> coords;
  std::vector<std::uint32_t> seed;
  std::size_t iterations = 0;
  // Coordinates moved by Newton's method; the others stay at their seed value.
  std::vector<std::size_t> columns;

  bool operator==(const PadicVector&) const = default;
};

// Base-p digits of x mod p^k, most significant first. Digits are separated by
// ':' when p > 10.
std::string to_base_p_digits(const mpz_class& x, std::uint32_t p, std::uint32_t k);

// Lifts a nonsingular zero mod p of a p-integral system to a zero mod p^k by
// Newton iteration with precision doubling. Throws NonIntegral, NotAZero
// (seed is not a zero mod p) and SingularSeed (Jacobian rank < r).
PadicVector lift_nonsingular(const QSystem& s, std::uint32_t p, std::span<const std::uint32_t> seed, std::uint32_t k);

// Smallest v_p(q_i(x)) over the forms, for an integer vector x.
long residual_valuation(const QSystem& s, std::span<const mpz_class> x, std::uint32_t p);

enum class SolveStatus { Solved, NoNonsingularSeed, Unknown };

std::string_view to_string(SolveStatus s);

struct SolveOptions {
  std::size_t max_iter = kDefaultMaxIterations;
  SubspaceSearchOptions search;
  // Used when the mod-p seed search exceeds the exhaustive cap.
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  MinimizeResult minimization;
  // Zero of the minimized model and the corresponding zero of the input.
  std::optional<PadicVector> model_solution;
  std::optional<PadicVector> solution;
  bool seed_search_exhaustive = false;
  std::string note;
};

// Minimize, reduce mod p, look for a nonsingular zero and lift it. A missing
// seed is never reported as insolubility over Q_p.
SolveResult padic_solve(const QSystem& s, std::uint32_t p, std::uint32_t k, const SolveOptions& options = {});

}  // namespace qfs
