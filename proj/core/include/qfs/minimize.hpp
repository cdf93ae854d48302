#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfs/quadform.hpp"
#include "qfs/subspace.hpp"

namespace qfs {

enum class Verdict { Minimized, NotMinimized, Unknown };

std::string_view to_string(Verdict v);

// k forms of the span (rows of an RREF k x r matrix over F_q) vanishing on V,
// where dim V = n - 2k.
struct MinimizeWitness {
  std::size_t k = 0;
  Matrix<std::uint32_t> combination;
  Subspace<FiniteField> v;
};

struct MinimizeVerdict {
  Verdict status = Verdict::Unknown;
  std::optional<MinimizeWitness> witness;
  std::uint64_t nodes = 0;
  std::uint64_t subspaces_checked = 0;
  bool minimized() const { return status == Verdict::Minimized; }
};

// Number of k-dimensional subspaces of F_q^r (Gaussian binomial), saturating
// at UINT64_MAX.
std::uint64_t gaussian_binomial(std::uint64_t q, std::size_t r, std::size_t k);

inline constexpr std::size_t kMaxMinimizedForms = 4;
inline constexpr std::uint64_t kMaxSpanSubspaces = 10'000;

// No k forms of the span can be annihilated by setting 2k variables to zero.
// Requires r <= 4 and at most 10^4 subspaces of the span per k. A search that
// runs out of budget yields Unknown, never a false verdict.
MinimizeVerdict is_Fq_minimized(const FFSystem& s, const SubspaceSearchOptions& options = {});

// The forms of the span selected by a witness.
FFSystem witness_forms(const FFSystem& s, const MinimizeWitness& w);

enum class TransformClass { Improving, Neutral, Compliant };

std::string_view to_string(TransformClass c);

struct TransformCheck {
  bool integral = false;
  TransformClass classification = TransformClass::Neutral;
  // n vP + 2r vM; negative means improving.
  long score = 0;
};

TransformCheck check_transform(const QSystem& s, std::uint32_t p, const TransformPair& t);

// Pair that moves V to the last n - 2k coordinates, multiplies the first 2k by
// p and divides the k witness forms by p. Throws WitnessInvalid when the
// witness does not replay on the reduction of s.
TransformPair witness_to_transform(const QSystem& s, std::uint32_t p, const MinimizeWitness& w);

struct MinimizeStep {
  std::string kind;  // "content", "subspace" or "radical"
  std::size_t k = 0;
  TransformPair transform;
  TransformCheck check;
};

struct MinimizeResult {
  QSystem model;
  // Division of each form by its p-content, applied before the loop.
  TransformPair normalization;
  std::vector<MinimizeStep> steps;
  // Composite with total.apply(input) == model.
  TransformPair total;
  bool converged = false;
  Verdict final_verdict = Verdict::Unknown;
  std::string stop_reason;
};

inline constexpr std::size_t kDefaultMaxIterations = 64;

// Repeatedly applies improving transforms found from the reduction mod p:
// content removal, subspace witnesses (improving when n > 4r) and rescaling of
// a common radical direction v with q_i(v) = 0 mod p^2. Stops when no move
// applies (converged) or after max_iter steps. Throws DegenerateSystem when
// the forms are linearly dependent over Q (in particular when one is zero).
MinimizeResult minimize_heuristic(const QSystem& s, std::uint32_t p, std::size_t max_iter = kDefaultMaxIterations,
                                  const SubspaceSearchOptions& options = {});

// Reduction mod p of the p-integral vectors in the common radical of the
// system over Q (zero in the typical, nondegenerate case).
Subspace<FiniteField> saturated_radical_mod_p(const QSystem& s, std::uint32_t p);

}  // namespace qfs
