#include <doctest.h>

#include <random>

#include "support.hpp"
#include "qfs/zerofinder.hpp"

using namespace qfs;
using namespace testing_support;

namespace {

FiniteField f4() { return FiniteField(FieldDesc::extension_field(2, {1, 1, 1})); }

oracle::PolyField oracle_field(const FiniteField& f) {
  std::vector<unsigned> modulus(f.desc().modulus.begin(), f.desc().modulus.end());
  return oracle::PolyField(f.characteristic(), modulus);
}

// Forms whose coefficients are the base-q digits of code.
oracle::FieldCoeffs form_from_code(std::uint64_t code, std::size_t n, unsigned q) {
  oracle::FieldCoeffs c(n, std::vector<unsigned>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      c[i][j] = static_cast<unsigned>(code % q);
      code /= q;
    }
  return c;
}

// Jacobian rank of an F_p system at x by plain Gaussian elimination.
std::size_t brute_jacobian_rank(const std::vector<oracle::FieldCoeffs>& forms, const std::vector<unsigned>& x, unsigned p) {
  const std::size_t n = x.size();
  std::vector<std::vector<long long>> rows;
  for (const auto& c : forms) {
    std::vector<long long> g(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      long long v = 2 * c[k][k] * x[k];
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) v += (j < k ? c[j][k] : c[k][j]) * x[j];
      g[k] = oracle::mod(v, p);
    }
    rows.push_back(g);
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    long long inv = 1;
    while ((rows[rank][col] * inv) % p != 1) ++inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const long long f = rows[i][col] * inv % p;
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = oracle::mod(rows[i][j] - f * rows[rank][j], p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_SUITE("zerofinder") {
  TEST_CASE("exact count matches enumeration for every ternary form over F_2 and F_3") {
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      const oracle::PolyField g(p, {});
      const std::uint64_t total = oracle::ipow(p, 6);
      for (std::uint64_t code = 0; code < total; ++code) {
        const auto c = form_from_code(code, 3, p);
        CHECK(count_zeros_exact(to_ff_form(f, c)) == oracle::count_common_zeros(g, {c}, 3));
      }
    }
  }

  TEST_CASE("exact count matches enumeration on random larger forms") {
    std::mt19937_64 rng(31);
    for (const FiniteField& f : {FiniteField::prime(2), FiniteField::prime(3), f4(), FiniteField::prime(5)}) {
      const auto g = oracle_field(f);
      for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = f.order() <= 3 ? 5 : 4;
        const auto c = random_field_coeffs(rng, n, f.order());
        CHECK(count_zeros_exact(to_ff_form(f, c)) == oracle::count_common_zeros(g, {c}, n));
      }
    }
  }

  TEST_CASE("enumeration counts and Jacobian ranks match the oracle") {
    std::mt19937_64 rng(37);
    for (const FiniteField& f : {FiniteField::prime(2), FiniteField::prime(3), f4()}) {
      const auto g = oracle_field(f);
      for (int trial = 0; trial < 30; ++trial) {
        const std::vector<oracle::FieldCoeffs> forms{random_field_coeffs(rng, 4, f.order()),
                                                     random_field_coeffs(rng, 4, f.order())};
        const FFSystem s = to_ff_system(f, forms, 4);
        const auto res = enumerate_common_zeros(s);
        CHECK(res.count == oracle::count_common_zeros(g, forms, 4));
        // The generic path prunes prefixes on which a form is already nonzero.
        CHECK(res.visited <= static_cast<std::uint64_t>(oracle::ipow(f.order(), 4)));
        CHECK(res.visited >= res.count);
        if (f.is_prime_field()) {
          for (const auto& z : res.zeros) {
            std::vector<unsigned> x(z.point.begin(), z.point.end());
            CHECK(z.jacobian_rank == brute_jacobian_rank(forms, x, f.order()));
            CHECK(z.singular == (z.jacobian_rank < 2));
          }
        }
      }
    }
  }

  TEST_CASE("binary and generic paths agree over F_2") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
      const std::vector<oracle::FieldCoeffs> forms{random_field_coeffs(rng, 8, 2), random_field_coeffs(rng, 8, 2),
                                                   random_field_coeffs(rng, 8, 2)};
      const FFSystem s = to_ff_system(FiniteField::prime(2), forms, 8);
      EnumerateOptions generic;
      generic.generic_only = true;
      const auto a = enumerate_common_zeros(s), b = enumerate_common_zeros(s, generic);
      CHECK(a.count == b.count);
      CHECK(a.nonsingular == b.nonsingular);
      REQUIRE(a.zeros.size() == b.zeros.size());
      for (std::size_t i = 0; i < a.zeros.size(); ++i) {
        CHECK(a.zeros[i].point == b.zeros[i].point);
        CHECK(a.zeros[i].jacobian_rank == b.zeros[i].jacobian_rank);
      }
    }
  }

  TEST_CASE("Chevalley-Warning holds for random systems with n > 2r") {
    std::mt19937_64 rng(43);
    for (unsigned p : {2u, 3u, 5u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = p == 5 ? 2 : 3;
        const std::size_t n = 2 * r + 1;
        std::vector<oracle::FieldCoeffs> forms;
        for (std::size_t k = 0; k < r; ++k) forms.push_back(random_field_coeffs(rng, n, p));
        const auto cw = chevalley_warning_check(to_ff_system(f, forms, n));
        CHECK(cw.congruent);
        CHECK(cw.count % p == 0);
        CHECK(cw.count >= p);
      }
    }
    FFSystem small(FiniteField::prime(2), 2);
    small.push_back(FFForm(FiniteField::prime(2), 2));
    CHECK_THROWS_AS(chevalley_warning_check(small), Error);
  }

  TEST_CASE("zero counts are invariant under invertible variable changes") {
    std::mt19937_64 rng(47);
    for (unsigned p : {2u, 3u}) {
      const FiniteField f = FiniteField::prime(p);
      for (int trial = 0; trial < 20; ++trial) {
        const FFSystem s = to_ff_system(f, {random_field_coeffs(rng, 5, p), random_field_coeffs(rng, 5, p)}, 5);
        const FFSystem t = apply_variable_change(s, random_invertible(rng, f, 5));
        const auto a = enumerate_common_zeros(s), b = enumerate_common_zeros(t);
        CHECK(a.count == b.count);
        CHECK(a.nonsingular == b.nonsingular);
      }
    }
  }

  TEST_CASE("projective and sampling modes") {
    const FiniteField f = FiniteField::prime(3);
    const FFSystem s = to_finite_system(parse_system("field Fq 3\nvars 3\nform q = x1^2 + x2^2 - x3^2\n"));
    EnumerateOptions proj;
    proj.projective = true;
    const auto affine = enumerate_common_zeros(s), classes = enumerate_common_zeros(s, proj);
    CHECK(affine.count == 1 + classes.count * 2);
    for (const auto& z : classes.zeros) {
      const auto lead = std::find_if(z.point.begin(), z.point.end(), [](auto v) { return v != 0; });
      REQUIRE(lead != z.point.end());
      CHECK(*lead == 1);
    }
    EnumerateOptions sample;
    sample.sampling = true;
    sample.samples = 500;
    sample.seed = 5;
    const auto x = enumerate_common_zeros(s, sample), y = enumerate_common_zeros(s, sample);
    CHECK_FALSE(x.exhaustive);
    CHECK(x.count == y.count);
    CHECK(x.visited == 500);
    (void)f;
  }

  TEST_CASE("F_2 triple has only singular common zeros") {
    const FFSystem s = to_finite_system(load_corpus("f2-triple.qfs"));
    const auto res = enumerate_common_zeros(s);
    CHECK(res.visited == 8192);
    CHECK(res.count > 1);
    CHECK(res.count % 2 == 0);
    CHECK(res.nonsingular == 0);
    for (const auto& z : res.zeros) CHECK(z.jacobian_rank <= 2);
    const auto search = find_nonsingular_zero(s);
    CHECK_FALSE(search.zero);
    CHECK(search.certified);
    CHECK(res.count == oracle::count_common_zeros(oracle::PolyField(2, {}), from_ff_system(s), 13));
  }

  TEST_CASE("nonsingular zeros are found when they exist") {
    const FFSystem s = to_finite_system(parse_system("field Fq 3\nvars 3\nform q = x1^2 + x2^2 - x3^2\n"));
    const auto search = find_nonsingular_zero(s);
    REQUIRE(search.zero);
    CHECK_FALSE(search.zero->singular);
    CHECK(evaluate(s, std::span<const std::uint32_t>(search.zero->point))[0] == 0);
  }

  TEST_CASE("zeros modulo p^k match plain enumeration") {
    std::mt19937_64 rng(53);
    for (unsigned p : {2u, 3u}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto c = random_int_coeffs(rng, 3, -6, 6);
        QSystem s(RationalField{}, 3);
        s.push_back(to_q_form(c));
        const long long m = p * p;
        std::uint64_t expected = 0;
        oracle::for_each_vector(3, m, [&](const std::vector<long long>& x) {
          if (oracle::eval_mod(c, x, m) == 0) ++expected;
        });
        CHECK(enumerate_common_zeros_mod_pk(s, p, 2).count == expected);
      }
    }
  }
}
