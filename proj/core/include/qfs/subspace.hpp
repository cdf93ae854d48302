#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qfs/echelon.hpp"
#include "qfs/quadform.hpp"

namespace qfs {

// True iff every form restricts to the zero form on V.
template <class F>
bool vanishes_on(const FormSystem<F>& s, const Subspace<F>& v) {
  const auto restricted = restrict(s, v);
  for (const auto& q : restricted.forms()) {
    if (!q.is_zero()) return false;
  }
  return true;
}

// Upper bound on the affine solution sets walked by extend_basis_step.
inline constexpr std::uint64_t kMaxCandidateSet = 10'000'000;

// All e outside V with b_i(v_j, e) = 0 for every form and basis vector of V and
// q_i(e) = 0, one per extension V + span(e): e vanishes at V's pivots and its
// first nonzero coordinate is 1.
template <class F>
std::vector<Vec<F>> extend_basis_step(const FormSystem<F>& s, const Subspace<F>& v) {
  const F& field = s.ring();
  const std::size_t n = s.n();
  Matrix<typename F::value_type> conditions(0, n);
  for (const auto& q : s.forms()) {
    for (std::size_t j = 0; j < v.dim(); ++j) {
      const auto row = v.vector(j);
      conditions.append_row(bilinear_functional(q, std::span<const typename F::value_type>(row)));
    }
  }
  for (auto c : v.pivots()) {
    Vec<F> unit(n, field.zero());
    unit[c] = field.one();
    conditions.append_row(unit);
  }
  const auto kernel = kernel_basis(field, conditions);
  std::vector<Vec<F>> out;
  if (kernel.empty()) return out;

  // Every nonzero kernel vector arises from exactly one combination; keep the
  // ones whose first nonzero coordinate is 1.
  const std::uint64_t q = static_cast<std::uint64_t>(field.order());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    if (total > kMaxCandidateSet / q) throw Error(ErrorCode::TooLarge, "candidate set exceeds the enumeration cap");
    total *= q;
  }
  std::vector<typename F::value_type> coeffs(kernel.size());
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = kernel.size(); i-- > 0;) {
      coeffs[i] = static_cast<typename F::value_type>(c % q);
      c /= q;
    }
    Vec<F> e(n, field.zero());
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      if (field.is_zero(coeffs[i])) continue;
      for (std::size_t j = 0; j < n; ++j) e[j] = field.add(e[j], field.mul(coeffs[i], kernel[i][j]));
    }
    std::size_t lead = 0;
    while (lead < n && field.is_zero(e[lead])) ++lead;
    if (lead == n || e[lead] != field.one()) continue;
    bool ok = true;
    for (const auto& form : s.forms()) {
      if (!field.is_zero(evaluate(form, std::span<const typename F::value_type>(e)))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const Vec<F>& a, const Vec<F>& b) {
    // Earlier leading coordinate first, then lexicographic.
    std::size_t la = 0, lb = 0;
    while (la < a.size() && a[la] == 0) ++la;
    while (lb < b.size() && b[lb] == 0) ++lb;
    if (la != lb) return la < lb;
    return a < b;
  });
  return out;
}

struct SubspaceSearchOptions {
  // Candidate vectors tested before the search gives up uncertified.
  std::uint64_t node_budget = 200'000'000;
  bool factor_inactive = true;
  // Force the generic path over F_2 (used by differential tests).
  bool generic_only = false;
};

struct SubspaceSearchResult {
  std::optional<Subspace<FiniteField>> found;
  // For NotFound: true when the whole canonical search tree was exhausted.
  bool certified = false;
  bool budget_exhausted = false;
  std::uint64_t nodes = 0;
  std::size_t active_variables = 0;
};

// Searches for a d-dimensional subspace on which every form vanishes. The tree
// walks reduced echelon bases with increasing pivots, so each subspace is
// visited at most once. Variables absent from every form are factored out.
SubspaceSearchResult find_totally_singular(const FFSystem& s, std::size_t d, const SubspaceSearchOptions& options = {});

// Number of d-dimensional totally singular subspaces, counted by the same tree
// (test and diagnostics helper).
std::uint64_t count_totally_singular(const FFSystem& s, std::size_t d, const SubspaceSearchOptions& options = {});

struct BetaExploration {
  std::size_t r = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  // Trials at n whose system vanishes on an (m+1)-dimensional subspace.
  std::size_t found = 0;
  std::size_t certified_missing = 0;
  std::size_t undecided = 0;
  bool guarantee_holds() const { return found == trials; }
  // Trials at n - 1 run to look for counterexamples.
  std::size_t witness_trials = 0;
  std::size_t witnesses = 0;
  std::optional<FFSystem> first_witness;
};

// Random r-form systems in n variables over the field: an empirical check of
// whether every one vanishes on a linear space of projective dimension m.
BetaExploration explore_beta(std::size_t r, const FiniteField& field, std::size_t m, std::size_t n, std::size_t trials,
                             std::uint64_t seed, const SubspaceSearchOptions& options = {});

FFSystem random_system(const FiniteField& field, std::size_t r, std::size_t n, std::uint64_t seed);

}  // namespace qfs
