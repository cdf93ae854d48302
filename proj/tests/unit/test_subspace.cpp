#include <doctest.h>

#include <random>

#include "support.hpp"
#include "qfs/subspace.hpp"

using namespace qfs;
using namespace testing_support;

namespace {

std::vector<std::vector<unsigned>> rows_of(const Subspace<FiniteField>& v) {
  std::vector<std::vector<unsigned>> rows;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const auto row = v.vector(i);
    rows.emplace_back(row.begin(), row.end());
  }
  return rows;
}

}  // namespace

TEST_SUITE("subspace") {
  TEST_CASE("found subspaces replay and counts match enumeration") {
    std::mt19937_64 rng(61);
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      const oracle::PolyField g(p, {});
      for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = p == 2 ? 5 : 4;
        const std::vector<oracle::FieldCoeffs> forms{random_field_coeffs(rng, n, p)};
        const FFSystem s = to_ff_system(f, forms, n);
        for (std::size_t d = 1; d <= 2; ++d) {
          const auto expected = oracle::count_totally_singular(g, forms, n, d);
          CHECK(count_totally_singular(s, d) == expected);
          SubspaceSearchOptions unfactored;
          unfactored.factor_inactive = false;
          CHECK(count_totally_singular(s, d, unfactored) == expected);
          const auto res = find_totally_singular(s, d);
          if (expected == 0) {
            CHECK_FALSE(res.found);
            CHECK(res.certified);
          } else {
            REQUIRE(res.found);
            CHECK(res.found->dim() == d);
            CHECK(vanishes_on(s, *res.found));
            CHECK(oracle::vanishes_on_span(g, forms, n, rows_of(*res.found)));
          }
        }
      }
    }
  }

  TEST_CASE("the canonical tree visits each subspace once") {
    // The zero form vanishes on every subspace, so the count is the number of
    // subspaces of F_2^n.
    const FiniteField f = FiniteField::prime(2);
    for (std::size_t n = 1; n <= 5; ++n) {
      FFSystem s(f, n);
      s.push_back(FFForm(f, n));
      SubspaceSearchOptions opts;
      opts.factor_inactive = false;
      for (std::size_t d = 1; d <= n; ++d) CHECK(count_totally_singular(s, d, opts) == oracle::count_subspaces(n, d, 2));
    }
  }

  TEST_CASE("inactive variables are factored exactly") {
    std::mt19937_64 rng(67);
    const FiniteField f = FiniteField::prime(2);
    for (int trial = 0; trial < 50; ++trial) {
      // Two random forms on x1..x4 padded with two unused variables.
      auto a = random_field_coeffs(rng, 4, 2), b = random_field_coeffs(rng, 4, 2);
      for (auto* c : {&a, &b}) {
        for (auto& row : *c) row.resize(6, 0);
        c->resize(6, std::vector<unsigned>(6, 0));
      }
      const FFSystem s = to_ff_system(f, {a, b}, 6);
      for (std::size_t d = 2; d <= 4; ++d) {
        SubspaceSearchOptions plain;
        plain.factor_inactive = false;
        const auto x = find_totally_singular(s, d), y = find_totally_singular(s, d, plain);
        CHECK(x.found.has_value() == y.found.has_value());
        if (x.found) CHECK(vanishes_on(s, *x.found));
      }
    }
  }

  TEST_CASE("binary and generic searches agree") {
    std::mt19937_64 rng(71);
    const FiniteField f = FiniteField::prime(2);
    for (int trial = 0; trial < 30; ++trial) {
      const FFSystem s = to_ff_system(f, {random_field_coeffs(rng, 6, 2), random_field_coeffs(rng, 6, 2)}, 6);
      SubspaceSearchOptions generic;
      generic.generic_only = true;
      for (std::size_t d = 1; d <= 3; ++d) CHECK(count_totally_singular(s, d) == count_totally_singular(s, d, generic));
    }
  }

  TEST_CASE("extension steps are exactly the vectors that keep the system vanishing") {
    std::mt19937_64 rng(73);
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      const oracle::PolyField g(p, {});
      for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4;
        const std::vector<oracle::FieldCoeffs> forms{random_field_coeffs(rng, n, p)};
        const FFSystem s = to_ff_system(f, forms, n);
        const auto start = find_totally_singular(s, 1);
        if (!start.found) continue;
        const auto& v = *start.found;
        std::size_t expected = 0;
        oracle::for_each_vector(n, p, [&](const std::vector<long long>& xs) {
          std::vector<std::uint32_t> x(xs.begin(), xs.end());
          if (std::all_of(x.begin(), x.end(), [](auto c) { return c == 0; })) return;
          // One representative per extension: zero at V's pivots, leading coefficient 1.
          const auto lead = std::find_if(x.begin(), x.end(), [](auto c) { return c != 0; });
          if (*lead != 1) return;
          for (auto c : v.pivots())
            if (x[c] != 0) return;
          auto rows = rows_of(v);
          rows.emplace_back(x.begin(), x.end());
          if (oracle::vanishes_on_span(g, forms, n, rows)) ++expected;
        });
        const auto steps = extend_basis_step(s, v);
        CHECK(steps.size() == expected);
        for (const auto& w : steps) CHECK(vanishes_on(s, v.extended(f, w)));
      }
    }
  }

  TEST_CASE("the pair Q1+Q3, Q2+Q3 has no 4-dimensional totally singular subspace") {
    const FFSystem triple = to_finite_system(load_corpus("f2-triple.qfs"));
    const FiniteField f = FiniteField::prime(2);
    FFSystem pair(f, triple.n());
    pair.push_back(linear_combination(triple, Vec<FiniteField>{1, 0, 1}));
    pair.push_back(linear_combination(triple, Vec<FiniteField>{0, 1, 1}));
    const auto active = pair.active_variables();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < active.size(); ++i)
      if (active[i]) keep.push_back(i);
    REQUIRE(keep.size() == 8);
    const auto res = find_totally_singular(pair, 4 + (pair.n() - 8));
    CHECK_FALSE(res.found);
    CHECK(res.certified);
    CHECK(res.active_variables == 8);
  }

  TEST_CASE("random systems over F_3 in 7 variables contain a plane") {
    const FiniteField f = FiniteField::prime(3);
    const auto ex = explore_beta(2, f, 1, 7, 20, 11);
    CHECK(ex.guarantee_holds());
    CHECK(ex.trials == 20);
  }
}
