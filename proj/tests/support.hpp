#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qfs/formlang.hpp"
#include "qfs/quadform.hpp"

namespace testing_support {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(QFS_TEST_CORPUS_DIR) + "/" + name; }

inline qfs::SystemDocument load_corpus(const std::string& name) { return qfs::parse_system(read_file(corpus_path(name))); }

inline qfs::FFForm to_ff_form(const qfs::FiniteField& f, const oracle::FieldCoeffs& c) {
  qfs::FFForm q(f, c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i; j < c.size(); ++j) q.set(i, j, c[i][j]);
  return q;
}

inline qfs::FFSystem to_ff_system(const qfs::FiniteField& f, const std::vector<oracle::FieldCoeffs>& forms, std::size_t n) {
  qfs::FFSystem s(f, n);
  for (const auto& c : forms) s.push_back(to_ff_form(f, c));
  return s;
}

inline oracle::FieldCoeffs from_ff_form(const qfs::FFForm& q) {
  oracle::FieldCoeffs c(q.n(), std::vector<unsigned>(q.n(), 0));
  for (std::size_t i = 0; i < q.n(); ++i)
    for (std::size_t j = i; j < q.n(); ++j) c[i][j] = q.coeff(i, j);
  return c;
}

inline std::vector<oracle::FieldCoeffs> from_ff_system(const qfs::FFSystem& s) {
  std::vector<oracle::FieldCoeffs> out;
  for (const auto& q : s.forms()) out.push_back(from_ff_form(q));
  return out;
}

inline qfs::QForm to_q_form(const oracle::Coeffs& c) {
  qfs::QForm q(qfs::RationalField{}, c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i; j < c.size(); ++j) q.set(i, j, mpq_class(static_cast<long>(c[i][j])));
  return q;
}

inline oracle::FieldCoeffs random_field_coeffs(std::mt19937_64& rng, std::size_t n, unsigned q) {
  std::uniform_int_distribution<unsigned> d(0, q - 1);
  oracle::FieldCoeffs c(n, std::vector<unsigned>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) c[i][j] = d(rng);
  return c;
}

inline oracle::Coeffs random_int_coeffs(std::mt19937_64& rng, std::size_t n, long long lo, long long hi) {
  std::uniform_int_distribution<long long> d(lo, hi);
  oracle::Coeffs c = oracle::zero_coeffs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) c[i][j] = d(rng);
  return c;
}

// Random invertible n x n matrix over F_q.
inline qfs::Matrix<std::uint32_t> random_invertible(std::mt19937_64& rng, const qfs::FiniteField& f, std::size_t n) {
  std::uniform_int_distribution<std::uint32_t> d(0, f.order() - 1);
  while (true) {
    qfs::Matrix<std::uint32_t> m(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    if (qfs::rank(f, m) == n) return m;
  }
}

}  // namespace testing_support
