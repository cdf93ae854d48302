#include <doctest.h>

#include <random>

#include "support.hpp"
#include "qfs/quadform.hpp"

using namespace qfs;
using testing_support::from_ff_form;
using testing_support::random_field_coeffs;
using testing_support::random_invertible;
using testing_support::to_ff_form;

namespace {

std::vector<std::uint32_t> random_point(std::mt19937_64& rng, const FiniteField& f, std::size_t n) {
  std::uniform_int_distribution<std::uint32_t> d(0, f.order() - 1);
  std::vector<std::uint32_t> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// n - log_q of the number of v with q(v + w) = q(w) for every w.
std::size_t brute_rank(const FiniteField& f, const FFForm& q) {
  const std::size_t n = q.n();
  std::uint64_t radical = 0;
  oracle::for_each_vector(n, f.order(), [&](const std::vector<long long>& vs) {
    std::vector<std::uint32_t> v(vs.begin(), vs.end());
    bool in = true;
    oracle::for_each_vector(n, f.order(), [&](const std::vector<long long>& ws) {
      if (!in) return;
      std::vector<std::uint32_t> w(ws.begin(), ws.end()), s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = f.add(v[i], w[i]);
      if (evaluate(q, std::span<const std::uint32_t>(s)) != evaluate(q, std::span<const std::uint32_t>(w))) in = false;
    });
    if (in) ++radical;
  });
  std::size_t dim = 0;
  while (radical > 1) {
    radical /= f.order();
    ++dim;
  }
  return n - dim;
}

}  // namespace

TEST_SUITE("quadform") {
  TEST_CASE("composition evaluates q at M y") {
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {2u, 3u, 5u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 100; ++trial) {
        const FFForm q = to_ff_form(f, random_field_coeffs(rng, 4, p));
        const auto m = random_invertible(rng, f, 4);
        const FFForm qm = compose(q, m);
        const auto y = random_point(rng, f, 4);
        const auto my = multiply(f, m, std::span<const std::uint32_t>(y));
        CHECK(evaluate(qm, std::span<const std::uint32_t>(y)) == evaluate(q, std::span<const std::uint32_t>(my)));
      }
    }
  }

  TEST_CASE("variable changes compose as a group action") {
    std::mt19937_64 rng(5);
    const FiniteField f = FiniteField::prime(3);
    for (int trial = 0; trial < 50; ++trial) {
      FFSystem s(f, 4);
      s.push_back(to_ff_form(f, random_field_coeffs(rng, 4, 3)));
      s.push_back(to_ff_form(f, random_field_coeffs(rng, 4, 3)));
      const auto m1 = random_invertible(rng, f, 4), m2 = random_invertible(rng, f, 4);
      CHECK(apply_variable_change(apply_variable_change(s, m1), m2) == apply_variable_change(s, multiply(f, m1, m2)));
    }
    Matrix<std::uint32_t> singular(4, 4, 0);
    FFSystem s(f, 4);
    s.push_back(FFForm(f, 4));
    CHECK_THROWS_AS(apply_variable_change(s, singular), Error);
  }

  TEST_CASE("scaling by p then by 1/p^2 on forms restores the system") {
    const QSystem s = to_rational_system(parse_system("field Qp 3\nvars 3\nform q = x1^2 + 2*x1*x2 - 5*x3^2\n"));
    const RationalField q;
    const TransformPair up(diagonal_matrix(q, Vec<RationalField>(3, mpq_class(3))), identity_matrix(q, 1), 3);
    const TransformPair down(identity_matrix(q, 3), diagonal_matrix(q, Vec<RationalField>(1, mpq_class(1, 9))), 3);
    CHECK(down.apply(up.apply(s)) == s);
    CHECK(up.then(down).apply(s) == s);
    CHECK(up.vM() == 3);
    CHECK(down.vP() == -2);
  }

  TEST_CASE("polar form is symmetric, bilinear and recovers q") {
    std::mt19937_64 rng(9);
    for (std::uint32_t p : {2u, 3u, 7u}) {
      const FiniteField f = FiniteField::prime(p);
      std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
      for (int trial = 0; trial < 100; ++trial) {
        const FFForm q = to_ff_form(f, random_field_coeffs(rng, 3, p));
        const auto x = random_point(rng, f, 3), y = random_point(rng, f, 3), z = random_point(rng, f, 3);
        const auto sx = std::span<const std::uint32_t>(x), sy = std::span<const std::uint32_t>(y);
        CHECK(bilinear(q, sx, sy) == bilinear(q, sy, sx));
        const std::uint32_t a = d(rng);
        std::vector<std::uint32_t> ay_z(3), xy(3);
        for (int i = 0; i < 3; ++i) {
          ay_z[i] = f.add(f.mul(a, y[i]), z[i]);
          xy[i] = f.add(x[i], y[i]);
        }
        CHECK(bilinear(q, sx, std::span<const std::uint32_t>(ay_z)) ==
              f.add(f.mul(a, bilinear(q, sx, sy)), bilinear(q, sx, std::span<const std::uint32_t>(z))));
        // q(x + y) = q(x) + q(y) + b(x, y).
        CHECK(evaluate(q, std::span<const std::uint32_t>(xy)) ==
              f.add(f.add(evaluate(q, sx), evaluate(q, sy)), bilinear(q, sx, sy)));
      }
    }
  }

  TEST_CASE("rank agrees with the brute-force radical") {
    std::mt19937_64 rng(13);
    const FiniteField f4(FieldDesc::extension_field(2, {1, 1, 1}));
    for (const FiniteField& f : {FiniteField::prime(2), FiniteField::prime(3), f4}) {
      for (int trial = 0; trial < 60; ++trial) {
        const FFForm q = to_ff_form(f, random_field_coeffs(rng, 3, f.order()));
        CHECK(radical_and_rank(q).rank == brute_rank(f, q));
      }
    }
  }

  TEST_CASE("radical in characteristic 2 uses the quadratic form itself") {
    const FiniteField f = FiniteField::prime(2);
    FFForm a(f, 3);
    a.set(0, 1, 1);
    a.set(2, 2, 1);
    const auto ra = radical_and_rank(a);
    CHECK(ra.rank == 3);
    FFForm b(f, 2);
    b.set(0, 0, 1);
    const auto rb = radical_and_rank(b);
    CHECK(rb.rank == 1);
    CHECK(rb.radical.dim() == 1);
  }

  TEST_CASE("rank is invariant under invertible variable changes") {
    std::mt19937_64 rng(17);
    for (std::uint32_t p : {2u, 3u, 5u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 60; ++trial) {
        const FFForm q = to_ff_form(f, random_field_coeffs(rng, 5, p));
        CHECK(radical_and_rank(q).rank == radical_and_rank(compose(q, random_invertible(rng, f, 5))).rank);
      }
    }
  }

  TEST_CASE("rank distribution is invariant under form changes") {
    std::mt19937_64 rng(19);
    const FiniteField f = FiniteField::prime(3);
    for (int trial = 0; trial < 20; ++trial) {
      FFSystem s(f, 4);
      for (int k = 0; k < 3; ++k) s.push_back(to_ff_form(f, random_field_coeffs(rng, 4, 3)));
      const auto dist = rank_distribution(s);
      std::uint64_t total = 0;
      for (const auto& [r, c] : dist) total += c;
      CHECK(total == 27);
      CHECK(rank_distribution(apply_form_change(s, random_invertible(rng, f, 3))) == dist);
      CHECK(rank_distribution(apply_variable_change(s, random_invertible(rng, f, 4))) == dist);
    }
  }

  TEST_CASE("effective-variable reduction preserves values") {
    std::mt19937_64 rng(23);
    for (std::uint32_t p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 60; ++trial) {
        // Low rank: a random form in 2 variables pulled back to 4.
        FFForm small = to_ff_form(f, random_field_coeffs(rng, 2, p));
        Matrix<std::uint32_t> proj(2, 4, 0);
        std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 4; ++j) proj(i, j) = d(rng);
        const FFForm q = compose(small, proj);
        const auto red = reduce_effective_variables(q);
        CHECK(red.m <= 2);
        const auto y = random_point(rng, f, 4);
        std::vector<std::uint32_t> head(y.begin(), y.begin() + red.m);
        const auto by = multiply(f, red.basis_change, std::span<const std::uint32_t>(y));
        CHECK(evaluate(q, std::span<const std::uint32_t>(by)) == evaluate(red.reduced, std::span<const std::uint32_t>(head)));
      }
    }
  }

  TEST_CASE("reduction mod p requires p-integral coefficients") {
    const QSystem s = to_rational_system(parse_system("field Qp 3\nvars 2\nform q = 1/3*x1^2 + x2^2\n"));
    CHECK_THROWS_AS(reduce_mod_p(s, 3), Error);
    const FFSystem r = reduce_mod_p(s, 5);
    CHECK(r[0].coeff(0, 0) == 2);
    CHECK(min_valuation(s, 3) == -1);
  }
}
