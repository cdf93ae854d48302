#include "qfs/bounds.hpp"

#include <mutex>
#include <sstream>
#include <tuple>

#include "qfs/error.hpp"

namespace qfs {

std::string_view to_string(BoundRule rule) {
  switch (rule) {
    case BoundRule::Base1: return "base-1";
    case BoundRule::Base2: return "base-2";
    case BoundRule::Ind1: return "ind1";
    case BoundRule::Ind2: return "ind2";
    case BoundRule::D2: return "d2";
    case BoundRule::Chain: return "chain";
    case BoundRule::LowerBlock: return "lower-block";
  }
  return "?";
}

std::string BoundDerivation::target() const {
  std::string s = "beta(" + std::to_string(r) + ";Qp";
  if (m) s += "," + std::to_string(*m);
  return s + ")";
}

std::size_t BoundDerivation::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c->node_count();
  return n;
}

namespace {

void check_rank(std::size_t r) {
  if (r < 1 || r > kMaxBoundRank) {
    throw Error(ErrorCode::PreconditionViolated, "r must lie in [1, " + std::to_string(kMaxBoundRank) + "]");
  }
}

DerivationPtr make_node(std::size_t r, std::optional<std::uint64_t> m, std::uint64_t value, BoundRule rule,
                        std::size_t k, std::vector<DerivationPtr> children) {
  auto d = std::make_shared<BoundDerivation>();
  d->r = r;
  d->m = m;
  d->value = value;
  d->rule = rule;
  d->k = k;
  d->children = std::move(children);
  return d;
}

DerivationPtr d2_leaf(std::uint64_t m) { return make_node(2, m, 2 * m + 8, BoundRule::D2, 0, {}); }

}  // namespace

void BoundEngine::extend(std::size_t r) {
  while (value_.size() <= r) {
    const std::size_t s = value_.size();
    std::uint64_t best = 0;
    std::size_t best_nodes = 0;
    Choice best_choice;
    // Candidates are visited in tie-break order, so only strict improvements
    // replace the incumbent.
    auto offer = [&](std::uint64_t v, std::size_t nodes, Choice c) {
      if (best_nodes == 0 || std::tie(v, nodes) < std::tie(best, best_nodes)) {
        best = v;
        best_nodes = nodes;
        best_choice = c;
      }
    };
    if (s == 1) offer(4, 1, {BoundRule::Base1, 0, false});
    if (s == 2) offer(8, 1, {BoundRule::Base2, 0, false});
    if (s >= 3) offer(2 * value_[s - 2] + 8, 1 + nodes_[s - 2], {BoundRule::Chain, 0, false});
    for (std::size_t k = 1; k < s; ++k) {
      const std::size_t j = s - k;
      const std::uint64_t m = value_[k];
      if (j == 2) offer(2 * m + 8, 2 + nodes_[k], {BoundRule::Ind1, k, true});
      offer((j + 1) * m + value_[j], 2 + nodes_[k] + nodes_[j], {BoundRule::Ind1, k, false});
    }
    value_.push_back(best);
    nodes_.push_back(best_nodes);
    choice_.push_back(best_choice);
    memo_.push_back(nullptr);
  }
}

std::uint64_t BoundEngine::value(std::size_t r) {
  check_rank(r);
  extend(r);
  return value_[r];
}

DerivationPtr BoundEngine::upper_bound(std::size_t r) {
  check_rank(r);
  extend(r);
  if (memo_[r]) return memo_[r];
  const Choice c = choice_[r];
  DerivationPtr d;
  switch (c.rule) {
    case BoundRule::Base1:
    case BoundRule::Base2:
      d = make_node(r, std::nullopt, value_[r], c.rule, 0, {});
      break;
    case BoundRule::Chain:
      d = make_node(r, std::nullopt, value_[r], c.rule, 0, {upper_bound(r - 2)});
      break;
    default: {
      const auto inner = upper_bound(c.k);
      const std::size_t j = r - c.k;
      const DerivationPtr sub =
          c.via_d2 ? d2_leaf(inner->value)
                   : make_node(j, inner->value, (j + 1) * inner->value + value_[j], BoundRule::Ind2, 0,
                               {upper_bound(j)});
      d = make_node(r, std::nullopt, sub->value, BoundRule::Ind1, c.k, {inner, sub});
      break;
    }
  }
  memo_[r] = d;
  return d;
}

DerivationPtr BoundEngine::upper_bound_subspace(std::size_t r, std::uint64_t m) {
  const auto base = upper_bound(r);
  const std::uint64_t via_ind2 = (r + 1) * m + base->value;
  if (r == 2 && 2 * m + 8 <= via_ind2) return d2_leaf(m);
  return make_node(r, m, via_ind2, BoundRule::Ind2, 0, {base});
}

namespace {

std::mutex engine_mutex;

BoundEngine& shared_engine() {
  static BoundEngine engine;
  return engine;
}

}  // namespace

DerivationPtr upper_bound(std::size_t r) {
  std::lock_guard lock(engine_mutex);
  return shared_engine().upper_bound(r);
}

DerivationPtr upper_bound_subspace(std::size_t r, std::uint64_t m) {
  std::lock_guard lock(engine_mutex);
  return shared_engine().upper_bound_subspace(r, m);
}

std::uint64_t lower_bound(std::size_t r) {
  if (r < 1) throw Error(ErrorCode::PreconditionViolated, "r must be at least 1");
  return 4 * static_cast<std::uint64_t>(r);
}

DerivationPtr lower_bound_derivation(std::size_t r) {
  return make_node(r, std::nullopt, lower_bound(r), BoundRule::LowerBlock, 0, {});
}

std::uint64_t martin_bound(std::size_t r) {
  const std::uint64_t sq = 2 * static_cast<std::uint64_t>(r) * r;
  return r % 2 == 0 ? sq : sq + 2;
}

std::string rule_label(const BoundDerivation& d) {
  if (d.rule != BoundRule::Ind1) return std::string(to_string(d.rule));
  return "ind1(" + std::to_string(d.k) + ")+" + std::string(to_string(d.children.at(1)->rule));
}

std::vector<BoundRow> bound_table(std::size_t r_max) {
  if (r_max > kMaxBoundRank) throw Error(ErrorCode::PreconditionViolated, "table limit exceeds 10^4");
  std::lock_guard lock(engine_mutex);
  auto& engine = shared_engine();
  std::vector<BoundRow> rows;
  rows.reserve(r_max);
  for (std::size_t r = 1; r <= r_max; ++r) {
    const auto d = engine.upper_bound(r);
    rows.push_back({r, lower_bound(r), d->value, martin_bound(r), rule_label(*d)});
  }
  return rows;
}

std::vector<std::string> bound_annotations() {
  return {
      "beta(r;K) = 4r for a p-adic field K whose residue field has at least (2r)^r elements (conditional)",
      "beta(1;Qp(T)) = 8, and beta(1;Qp(T1,...,Tk)) = 2^(2+k) in general (reported, not derived here)",
  };
}

std::optional<std::uint64_t> recheck(const BoundDerivation& d) {
  std::vector<std::uint64_t> kids;
  for (const auto& c : d.children) {
    auto v = recheck(*c);
    if (!v) return std::nullopt;
    kids.push_back(*v);
  }
  std::optional<std::uint64_t> expect;
  switch (d.rule) {
    case BoundRule::Base1:
      if (d.r == 1 && !d.m && kids.empty()) expect = 4;
      break;
    case BoundRule::Base2:
      if (d.r == 2 && !d.m && kids.empty()) expect = 8;
      break;
    case BoundRule::LowerBlock:
      if (!d.m && kids.empty()) expect = 4 * static_cast<std::uint64_t>(d.r);
      break;
    case BoundRule::D2:
      if (d.r == 2 && d.m && kids.empty()) expect = 2 * *d.m + 8;
      break;
    case BoundRule::Chain:
      if (!d.m && kids.size() == 1 && d.r >= 3 && d.children[0]->r == d.r - 2 && !d.children[0]->m)
        expect = 2 * kids[0] + 8;
      break;
    case BoundRule::Ind2:
      if (d.m && kids.size() == 1 && d.children[0]->r == d.r && !d.children[0]->m)
        expect = (d.r + 1) * *d.m + kids[0];
      break;
    case BoundRule::Ind1: {
      if (d.m || kids.size() != 2 || d.k < 1 || d.k >= d.r) break;
      const auto& inner = *d.children[0];
      const auto& outer = *d.children[1];
      if (inner.r == d.k && !inner.m && outer.r == d.r - d.k && outer.m && *outer.m == kids[0]) expect = kids[1];
      break;
    }
  }
  if (!expect || *expect != d.value) return std::nullopt;
  return expect;
}

namespace {

void write_trace(std::ostringstream& os, const BoundDerivation& d, std::size_t depth) {
  os << std::string(2 * depth, ' ') << d.target() << " = " << d.value << " [" << to_string(d.rule);
  if (d.rule == BoundRule::Ind1) os << "(" << d.k << ")";
  os << "]\n";
  for (const auto& c : d.children) write_trace(os, *c, depth + 1);
}

}  // namespace

std::string format_trace(const BoundDerivation& d) {
  std::ostringstream os;
  write_trace(os, d, 0);
  return os.str();
}

}  // namespace qfs
