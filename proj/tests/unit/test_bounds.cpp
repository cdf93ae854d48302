#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "qfs/bounds.hpp"
#include "qfs/error.hpp"

using namespace qfs;

namespace {

// Re-derives the value of a derivation node from its rule and its children's
// own claimed values, and requires the children to be sound as well.
bool sound(const BoundDerivation& d) {
  for (const auto& c : d.children)
    if (!sound(*c)) return false;
  const auto& ch = d.children;
  switch (d.rule) {
    case BoundRule::Base1: return d.r == 1 && d.value == 4 && ch.empty();
    case BoundRule::Base2: return d.r == 2 && d.value == 8 && ch.empty();
    case BoundRule::LowerBlock: return d.value == 4 * d.r && ch.empty();
    case BoundRule::D2: return d.r == 2 && d.m && d.value == 2 * *d.m + 8 && ch.empty();
    case BoundRule::Chain:
      return ch.size() == 1 && ch[0]->r + 2 == d.r && !ch[0]->m && d.value == 2 * ch[0]->value + 8;
    case BoundRule::Ind2:
      return d.m && ch.size() == 1 && ch[0]->r == d.r && !ch[0]->m && d.value == (d.r + 1) * *d.m + ch[0]->value;
    case BoundRule::Ind1:
      return ch.size() == 2 && ch[0]->r == d.k && !ch[0]->m && ch[1]->r + d.k == d.r && ch[1]->m &&
             *ch[1]->m == ch[0]->value && d.value == ch[1]->value;
  }
  return false;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("small values and rules") {
    const std::uint64_t expected[] = {4, 8, 16, 24, 40, 56, 84, 112, 148};
    for (std::size_t r = 1; r <= 9; ++r) CHECK(upper_bound(r)->value == expected[r - 1]);
    CHECK(upper_bound(1)->rule == BoundRule::Base1);
    CHECK(upper_bound(2)->rule == BoundRule::Base2);
    CHECK(rule_label(*upper_bound(3)) == "chain");
    CHECK(rule_label(*upper_bound(7)) == "ind1(1)+ind2");
    CHECK(lower_bound(3) == 12);
    CHECK(upper_bound(3)->value == 16);
  }

  TEST_CASE("values match the top-down oracle and the piecewise formula") {
    std::map<std::size_t, std::uint64_t> memo;
    for (std::size_t r = 1; r <= 400; ++r) {
      const std::uint64_t v = upper_bound(r)->value;
      CHECK(v == oracle::beta_upper(r, memo));
      if (r >= 8) CHECK(v == 2 * r * r - (r % 2 == 0 ? 16 : 14));
    }
  }

  TEST_CASE("every derivation is sound") {
    for (std::size_t r = 1; r <= 200; ++r) {
      const auto d = upper_bound(r);
      CHECK(sound(*d));
      CHECK(recheck(*d) == d->value);
    }
    for (std::uint64_t m : {1u, 4u, 16u, 100u}) {
      for (std::size_t r = 1; r <= 6; ++r) {
        const auto d = upper_bound_subspace(r, m);
        CHECK(sound(*d));
        CHECK(d->m == m);
      }
    }
    CHECK(upper_bound_subspace(2, 4)->value == 16);
  }

  TEST_CASE("recheck rejects a tampered derivation") {
    auto d = std::make_shared<BoundDerivation>(*upper_bound(5));
    d->value -= 1;
    CHECK_FALSE(recheck(*d));
  }

  TEST_CASE("monotone and bracketed up to 10^4") {
    const auto rows = bound_table(kMaxBoundRank);
    REQUIRE(rows.size() == kMaxBoundRank);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].lower == 4 * rows[i].r);
      CHECK(rows[i].lower <= rows[i].upper);
      if (i > 0) CHECK(rows[i - 1].upper <= rows[i].upper);
      if (rows[i].r >= 8) CHECK(rows[i].martin - rows[i].upper == 16);
    }
    CHECK_THROWS_AS(upper_bound(0), Error);
    CHECK_THROWS_AS(upper_bound(kMaxBoundRank + 1), Error);
  }

  TEST_CASE("older quadratic bound") {
    CHECK(martin_bound(1) == 4);
    CHECK(martin_bound(2) == 8);
    CHECK(martin_bound(3) == 20);
    CHECK(martin_bound(4) == 32);
  }

  TEST_CASE("trace layout") {
    CHECK(format_trace(*upper_bound(3)) == "beta(3;Qp) = 16 [chain]\n  beta(1;Qp) = 4 [base-1]\n");
    CHECK(format_trace(*upper_bound(7)) ==
          "beta(7;Qp) = 84 [ind1(1)]\n"
          "  beta(1;Qp) = 4 [base-1]\n"
          "  beta(6;Qp,4) = 84 [ind2]\n"
          "    beta(6;Qp) = 56 [chain]\n"
          "      beta(4;Qp) = 24 [chain]\n"
          "        beta(2;Qp) = 8 [base-2]\n");
    CHECK(format_trace(*upper_bound_subspace(2, 4)) == "beta(2;Qp,4) = 16 [d2]\n");
  }
}
