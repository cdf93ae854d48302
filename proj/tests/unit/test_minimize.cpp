#include <doctest.h>

#include <random>

#include "support.hpp"
#include "qfs/minimize.hpp"

using namespace qfs;
using namespace testing_support;

namespace {

// Random system over F_p with a planted witness: the first k forms vanish on
// the coordinate subspace spanned by the last n - 2k unit vectors.
FFSystem planted(std::mt19937_64& rng, const FiniteField& f, std::size_t r, std::size_t n, std::size_t k) {
  FFSystem s(f, n);
  for (std::size_t i = 0; i < r; ++i) {
    auto c = random_field_coeffs(rng, n, f.order());
    if (i < k)
      for (std::size_t a = 2 * k; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) c[a][b] = 0;
    s.push_back(to_ff_form(f, c));
  }
  return apply_variable_change(s, random_invertible(rng, f, n));
}

}  // namespace

TEST_SUITE("minimize") {
  TEST_CASE("Gaussian binomials count subspaces") {
    for (unsigned q : {2u, 3u})
      for (std::size_t r = 1; r <= 4; ++r)
        for (std::size_t k = 0; k <= r; ++k) CHECK(gaussian_binomial(q, r, k) == oracle::count_subspaces(r, k, q));
    CHECK(gaussian_binomial(2, 3, 1) == 7);
    CHECK(gaussian_binomial(2, 3, 2) == 7);
    CHECK(gaussian_binomial(2, 3, 3) == 1);
    CHECK(gaussian_binomial(2, 3, 4) == 0);
  }

  TEST_CASE("verdicts agree with the brute-force definition") {
    std::mt19937_64 rng(83);
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      const oracle::PolyField g(p, {});
      for (int trial = 0; trial < 40; ++trial) {
        const std::size_t r = 1 + trial % 2, n = p == 2 ? 5 : 4;
        std::vector<oracle::FieldCoeffs> forms;
        for (std::size_t i = 0; i < r; ++i) forms.push_back(random_field_coeffs(rng, n, p));
        const FFSystem s = to_ff_system(f, forms, n);
        const auto verdict = is_Fq_minimized(s);
        REQUIRE(verdict.status != Verdict::Unknown);
        CHECK(verdict.minimized() == oracle::is_minimized_brute(g, forms, n));
      }
    }
  }

  TEST_CASE("witnesses replay") {
    std::mt19937_64 rng(89);
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = 1 + trial % 2;
        const FFSystem s = planted(rng, f, 2, 6, k);
        const auto verdict = is_Fq_minimized(s);
        REQUIRE(verdict.status == Verdict::NotMinimized);
        REQUIRE(verdict.witness);
        const auto& w = *verdict.witness;
        CHECK(w.v.dim() == s.n() - 2 * w.k);
        CHECK(vanishes_on(witness_forms(s, w), w.v));
      }
    }
  }

  TEST_CASE("witness transforms are integral with score k(4r - n)") {
    std::mt19937_64 rng(97);
    for (unsigned p : {2u, 3u, 5u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 20; ++trial) {
        const FFSystem s = planted(rng, f, 1, 6, 1);
        const QSystem lifted = lift_to_integers(s);
        const auto verdict = is_Fq_minimized(s);
        REQUIRE(verdict.witness);
        const auto t = witness_to_transform(lifted, p, *verdict.witness);
        const auto check = check_transform(lifted, p, t);
        const long k = static_cast<long>(verdict.witness->k);
        CHECK(check.integral);
        CHECK(t.vM() == 2 * k);
        CHECK(t.vP() == -k);
        CHECK(check.score == k * (4 * 1 - 6));
        CHECK(check.classification == TransformClass::Improving);
        const QSystem moved = t.apply(lifted);
        for (const auto& q : moved.forms())
          for (const auto& c : q.raw()) CHECK(valuation(c, p) >= 0);
      }
    }
  }

  TEST_CASE("verdicts are invariant under unimodular changes") {
    std::mt19937_64 rng(101);
    const FiniteField f = FiniteField::prime(3);
    for (int trial = 0; trial < 20; ++trial) {
      const FFSystem s = to_ff_system(f, {random_field_coeffs(rng, 5, 3), random_field_coeffs(rng, 5, 3)}, 5);
      const auto a = is_Fq_minimized(s);
      const FFSystem t = apply_form_change(apply_variable_change(s, random_invertible(rng, f, 5)), random_invertible(rng, f, 2));
      CHECK(is_Fq_minimized(t).status == a.status);
    }
  }

  TEST_CASE("the F_2 triple is minimized") {
    const FFSystem s = to_finite_system(load_corpus("f2-triple.qfs"));
    const auto verdict = is_Fq_minimized(s);
    CHECK(verdict.status == Verdict::Minimized);
    CHECK(verdict.subspaces_checked == 15);
  }

  TEST_CASE("Q_3 worked example") {
    const QSystem s = to_rational_system(load_corpus("q3-example.qfs"));
    const RationalField q;
    QMatrix m = identity_matrix(q, 5);
    m(4, 4) = mpq_class(1, 3);
    const TransformPair t(m, identity_matrix(q, 1), 3);
    const auto check = check_transform(s, 3, t);
    CHECK(check.integral);
    CHECK(check.classification == TransformClass::Improving);
    CHECK(check.score == 5 * 0 + 2 * (-1));
    CHECK(t.apply(s) == to_rational_system(load_corpus("q3-model.qfs")));

    const auto res = minimize_heuristic(s, 3);
    CHECK(res.converged);
    CHECK(res.steps.size() == 1);
    CHECK(res.model == to_rational_system(load_corpus("q3-model.qfs")));
    CHECK(res.total.apply(s) == res.model);
    CHECK(is_Fq_minimized(reduce_mod_p(res.model, 3)).minimized());
    CHECK(reduce_mod_p(s, 3) == to_finite_system(load_corpus("q3-reduction.qfs")));
  }

  TEST_CASE("non-improving and non-integral transforms are classified") {
    const QSystem s = to_rational_system(load_corpus("q3-model.qfs"));
    const RationalField q;
    QMatrix m = identity_matrix(q, 5);
    m(4, 4) = mpq_class(1, 3);
    CHECK_FALSE(check_transform(s, 3, TransformPair(m, identity_matrix(q, 1), 3)).integral);
    const auto id = check_transform(s, 3, TransformPair::identity(5, 1, 3));
    CHECK(id.integral);
    CHECK(id.score == 0);
    CHECK(id.classification == TransformClass::Neutral);
  }

  TEST_CASE("dependent forms are rejected") {
    const QSystem s = to_rational_system(parse_system("field Qp 3\nvars 3\nform a = x1^2\nform b = 2*x1^2\n"));
    CHECK_THROWS_AS(minimize_heuristic(s, 3), Error);
  }
}
