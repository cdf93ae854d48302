#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qfs/field.hpp"
#include "qfs/linalg.hpp"
#include "qfs/rational.hpp"

using namespace qfs;

namespace {

std::vector<FieldDesc> small_fields() {
  std::vector<FieldDesc> out;
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 31u, 61u}) out.push_back(FieldDesc::prime_field(p));
  out.push_back(FieldDesc::extension_field(2, {1, 1, 1}));
  out.push_back(FieldDesc::extension_field(2, {1, 1, 0, 1}));
  out.push_back(FieldDesc::extension_field(3, {1, 0, 1}));
  out.push_back(FieldDesc::extension_field(2, {1, 1, 0, 0, 1}));
  out.push_back(FieldDesc::extension_field(5, {2, 0, 1}));
  out.push_back(FieldDesc::extension_field(3, {1, 2, 0, 1}));
  return out;
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("every nonzero element has an inverse") {
    for (const auto& desc : small_fields()) {
      const FiniteField f(desc);
      CHECK_THROWS_AS(f.inv(0), Error);
      for (std::uint32_t a = 1; a < f.order(); ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    }
  }

  TEST_CASE("table arithmetic matches polynomial arithmetic") {
    for (const auto& desc : small_fields()) {
      const FiniteField f(desc);
      std::vector<unsigned> modulus(desc.modulus.begin(), desc.modulus.end());
      const oracle::PolyField g(desc.p, modulus);
      REQUIRE(g.q() == f.order());
      for (std::uint32_t a = 0; a < f.order(); ++a) {
        CHECK(f.neg(a) == g.neg(a));
        for (std::uint32_t b = 0; b < f.order(); ++b) {
          CHECK(f.add(a, b) == g.add(a, b));
          CHECK(f.mul(a, b) == g.mul(a, b));
        }
      }
    }
  }

  TEST_CASE("reducible moduli are rejected") {
    CHECK_THROWS_AS(FiniteField(FieldDesc::extension_field(2, {1, 0, 1})), Error);
    CHECK_THROWS_AS(FiniteField(FieldDesc::prime_field(9)), Error);
    CHECK(is_irreducible(2, {1, 1, 1}));
    CHECK_FALSE(is_irreducible(3, {2, 0, 1}));
  }

  TEST_CASE("quadratic character and square roots in characteristic 2") {
    const FiniteField f5 = FiniteField::prime(5);
    CHECK(f5.quadratic_character(0) == 0);
    CHECK(f5.quadratic_character(4) == 1);
    CHECK(f5.quadratic_character(2) == -1);
    const FiniteField f8(FieldDesc::extension_field(2, {1, 1, 0, 1}));
    for (std::uint32_t a = 0; a < 8; ++a) {
      const auto s = f8.frobenius_inverse(a);
      CHECK(f8.mul(s, s) == a);
    }
  }

  TEST_CASE("row reduction is idempotent and rank plus nullity is the column count") {
    std::mt19937_64 rng(7);
    for (std::uint32_t p : {2u, 3u, 5u}) {
      const FiniteField f = FiniteField::prime(p);
      std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
      std::uniform_int_distribution<std::size_t> dims(1, 6);
      for (int trial = 0; trial < 200; ++trial) {
        Matrix<std::uint32_t> a(dims(rng), dims(rng), 0);
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = d(rng);
        const auto once = row_reduce(f, a);
        const auto twice = row_reduce(f, once.matrix);
        CHECK(once.matrix == twice.matrix);
        const auto kernel = kernel_basis(f, a);
        CHECK(once.rank + kernel.size() == a.cols());
        for (const auto& v : kernel) {
          for (auto x : multiply(f, a, std::span<const std::uint32_t>(v))) CHECK(x == 0);
        }
      }
    }
  }

  TEST_CASE("solve_linear over F_3") {
    const FiniteField f = FiniteField::prime(3);
    const auto a = Matrix<std::uint32_t>::from_rows({{1, 1, 0}, {0, 1, 1}}, 3);
    const std::vector<std::uint32_t> b{1, 2};
    const auto sol = solve_linear(f, a, std::span<const std::uint32_t>(b));
    REQUIRE(sol);
    CHECK(multiply(f, a, std::span<const std::uint32_t>(sol->particular)) == b);
    CHECK(sol->kernel.size() == 1);
    const auto inconsistent = Matrix<std::uint32_t>::from_rows({{1, 1}, {1, 1}}, 2);
    const std::vector<std::uint32_t> c{0, 1};
    CHECK_FALSE(solve_linear(f, inconsistent, std::span<const std::uint32_t>(c)));
  }

  TEST_CASE("residue ring units") {
    const ResidueRing r(3, 4);
    CHECK(r.modulus() == 81);
    CHECK(r.mul(r.inv(mpz_class(5)), mpz_class(5)) == 1);
    CHECK_THROWS_AS(r.inv(mpz_class(6)), Error);
  }

  TEST_CASE("valuations are additive") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-5000, 5000);
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
      for (int trial = 0; trial < 250; ++trial) {
        long a = d(rng), b = d(rng);
        if (a == 0) a = 1;
        if (b == 0) b = -1;
        const mpq_class x(a, 7), y(b, 12);
        CHECK(valuation(mpq_class(x * y), p) == valuation(x, p) + valuation(y, p));
        CHECK(valuation(mpz_class(a), p) == oracle::vp(mpz_class(a), p));
      }
      CHECK(valuation(mpq_class(0), p) == kInfiniteValuation);
    }
  }
}
