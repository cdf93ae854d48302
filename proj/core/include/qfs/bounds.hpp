#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qfs {

enum class BoundRule { Base1, Base2, Ind1, Ind2, D2, Chain, LowerBlock };

std::string_view to_string(BoundRule rule);

// One step of a bound derivation. Targets are beta(r) (m empty) or beta(r, m).
struct BoundDerivation {
  std::size_t r = 0;
  std::optional<std::uint64_t> m;
  std::uint64_t value = 0;
  BoundRule rule = BoundRule::Base1;
  std::size_t k = 0;  // ind1 split
  std::vector<std::shared_ptr<const BoundDerivation>> children;

  std::string target() const;
  std::size_t node_count() const;
};

using DerivationPtr = std::shared_ptr<const BoundDerivation>;

inline constexpr std::size_t kMaxBoundRank = 10'000;

// Memoized minimum over base-1, base-2, chain and ind1(k) followed by ind2 or
// d2. Ties go to the derivation with fewer nodes, then to rule order.
class BoundEngine {
 public:
  DerivationPtr upper_bound(std::size_t r);
  DerivationPtr upper_bound_subspace(std::size_t r, std::uint64_t m);
  std::uint64_t value(std::size_t r);

 private:
  struct Choice {
    BoundRule rule = BoundRule::Base1;
    std::size_t k = 0;
    bool via_d2 = false;
  };
  void extend(std::size_t r);

  std::vector<std::uint64_t> value_{0};
  std::vector<std::size_t> nodes_{0};
  std::vector<Choice> choice_{Choice{}};
  std::vector<DerivationPtr> memo_{nullptr};
};

DerivationPtr upper_bound(std::size_t r);
DerivationPtr upper_bound_subspace(std::size_t r, std::uint64_t m);

std::uint64_t lower_bound(std::size_t r);

// Leaf tagged lower-block: r anisotropic quaternaries on disjoint variables
// (see block_witness) give a system in 4r variables with only the trivial zero.
DerivationPtr lower_bound_derivation(std::size_t r);

// The older quadratic bound: 2r^2 for even r, 2r^2 + 2 for odd r.
std::uint64_t martin_bound(std::size_t r);

struct BoundRow {
  std::size_t r = 0;
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  std::uint64_t martin = 0;
  std::string rule;  // e.g. "chain", "ind1(2)+ind2"
};

std::vector<BoundRow> bound_table(std::size_t r_max);

// Label of the rule applied at the root, e.g. "ind1(1)+ind2".
std::string rule_label(const BoundDerivation& d);

// Conditional results reported next to the table, each with its hypothesis.
std::vector<std::string> bound_annotations();

// Recomputes a derivation bottom-up; returns the value or nullopt when a node
// disagrees with its children.
std::optional<std::uint64_t> recheck(const BoundDerivation& d);

// Indented rule tree, one node per line: "<target> = <value> [<rule>]".
std::string format_trace(const BoundDerivation& d);

}  // namespace qfs
