#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fuzz.hpp"
#include "support.hpp"
#include "qfs/formlang.hpp"

using namespace qfs;

using fuzz::mutate;
using fuzz::random_document;

TEST_SUITE("formlang") {
  TEST_CASE("first form of the F_2 triple") {
    const auto doc = parse_system("field Fq 2\nvars 4\nform q1 = x1*x2 + x3^2 + x3*x4 + x4^2\n");
    const FFSystem s = to_finite_system(doc);
    REQUIRE(s.r() == 1);
    CHECK(s[0].coeff(0, 1) == 1);
    CHECK(s[0].coeff(2, 2) == 1);
    CHECK(s[0].coeff(2, 3) == 1);
    CHECK(s[0].coeff(3, 3) == 1);
    CHECK(s[0].coeff(0, 0) == 0);
  }

  TEST_CASE("rational coefficients are kept exactly") {
    const auto doc = parse_system("field Qp 3\nvars 3\nform q = x1^2 - 3*x2*x3\n");
    const QSystem s = to_rational_system(doc);
    CHECK(s[0].coeff(0, 0) == 1);
    CHECK(s[0].coeff(1, 2) == -3);
    const auto nine = parse_system("field Qp 3\nvars 5\nform q = 9*x5^2\n");
    CHECK(serialize_system(nine).find("9*x5^2") != std::string::npos);
  }

  TEST_CASE("coefficients over F_q are reduced mod p") {
    const FFSystem s = to_finite_system(parse_system("field Fq 3\nvars 2\nform q = 7*x1^2 - x2^2\n"));
    CHECK(s[0].coeff(0, 0) == 1);
    CHECK(s[0].coeff(1, 1) == 2);
  }

  TEST_CASE("integers with leading zeros are decimal") {
    const auto s = to_rational_system(parse_system("field Qp 3\nvars 2\nform q = 08*x1^2 - 010*x1*x2\n"));
    CHECK(s[0].coeff(0, 0) == 8);
    CHECK(s[0].coeff(0, 1) == -10);
  }

  TEST_CASE("zero form serializes as 0") {
    const auto doc = parse_system("field Fq 2\nvars 2\nform z = 0\n");
    CHECK(serialize_system(doc).find("form z = 0\n") != std::string::npos);
  }

  TEST_CASE("errors carry codes and positions") {
    auto code_of = [](const std::string& text) {
      try {
        parse_system(text);
      } catch (const ParseError& e) {
        CHECK(e.line() >= 1);
        CHECK(e.column() >= 1);
        return e.code();
      }
      FAIL("document was accepted: " << text);
      return ErrorCode::SyntaxError;
    };
    CHECK(code_of("field Fq 2\nvars 2\nform q = x1\n") == ErrorCode::NonHomogeneous);
    CHECK(code_of("field Fq 2\nvars 2\nform q = x1*x2*x1\n") == ErrorCode::NonHomogeneous);
    CHECK(code_of("field Fq 2\nvars 2\nform q = x3^2\n") == ErrorCode::UnknownVariable);
    CHECK(code_of("field Fq 4\nvars 2\nform q = x1^2\n") == ErrorCode::BadField);
    CHECK(code_of("field Fq 2 poly=1,0,1\nvars 2\nform q = x1^2\n") == ErrorCode::BadField);
    CHECK(code_of("field Fq 2\nvars 2\nform q = x1^2 +\n") == ErrorCode::SyntaxError);
    CHECK(code_of("field Fq 2\nvars 2\nform q = x1^2\nform q = x2^2\n") == ErrorCode::SyntaxError);
    CHECK(code_of("vars 2\nform q = x1^2\n") == ErrorCode::SyntaxError);
    try {
      parse_system("field Fq 2\nvars 2\nform q = x1^2 $ x2^2\n");
      FAIL("accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 15);
    }
  }

  TEST_CASE("corpus documents roundtrip") {
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(QFS_TEST_CORPUS_DIR)) {
      if (entry.path().extension() != ".qfs") continue;
      ++files;
      const auto doc = parse_system(testing_support::read_file(entry.path().string()));
      const auto text = serialize_system(doc);
      CHECK(parse_system(text) == doc);
      CHECK(serialize_system(parse_system(text)) == text);
    }
    CHECK(files >= 10);
  }

  TEST_CASE("fuzzed documents roundtrip") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
      const std::string text = random_document(rng);
      CAPTURE(text);
      const auto doc = parse_system(text);
      const auto canonical = serialize_system(doc);
      CHECK(parse_system(canonical) == doc);
      CHECK(serialize_system(parse_system(canonical)) == canonical);
    }
  }

  TEST_CASE("mutated documents parse or fail with a positioned error") {
    std::mt19937_64 rng(99);
    int rejected = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const std::string text = mutate(rng, random_document(rng));
      CAPTURE(text);
      try {
        const auto doc = parse_system(text);
        CHECK(parse_system(serialize_system(doc)) == doc);
      } catch (const ParseError& e) {
        ++rejected;
        CHECK(e.line() >= 1);
        CHECK(e.column() >= 1);
      } catch (const std::exception& e) {
        FAIL("unpositioned exception: " << e.what());
      }
    }
    CHECK(rejected > 500);
  }
}
