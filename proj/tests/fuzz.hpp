#pragma once

#include <cstdlib>
#include <random>
#include <sstream>
#include <string>

// Random well-formed .qfs documents and random edits of them.
namespace fuzz {

inline std::string random_document(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::ostringstream os;
  if (pick(rng) == 0) os << "# generated\n";
  bool rational = false, ext = false;
  switch (pick(rng)) {
    case 0: os << "field Fq 2\n"; break;
    case 1: os << "field Fq 5\n"; break;
    case 2: os << "field Fq 2 poly=1,1,1\n"; ext = true; break;
    case 3: os << "field Qp 3\n"; rational = true; break;
    case 4: os << "field Zpk 2 5\n"; break;
    default: os << "field Qp 7 prec=12\n"; rational = true; break;
  }
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  os << "vars " << n << "\n";
  const int r = std::uniform_int_distribution<int>(1, 3)(rng);
  std::uniform_int_distribution<int> var(1, n), coeff(-30, 30), terms(0, 5);
  for (int k = 0; k < r; ++k) {
    os << "form f" << k << " =";
    const int t = terms(rng);
    if (t == 0) os << " 0";
    for (int i = 0; i < t; ++i) {
      int c = coeff(rng);
      if (c == 0) c = 1;
      os << (i == 0 ? (c < 0 ? " -" : " ") : (c < 0 ? " - " : " + "));
      if (ext && pick(rng) < 2) {
        os << "(t + " << std::abs(c) % 2 << ")*";
      } else if (std::abs(c) != 1 || pick(rng) < 2) {
        os << std::abs(c);
        if (rational && pick(rng) == 0) os << "/" << std::uniform_int_distribution<int>(1, 9)(rng);
        os << "*";
      }
      const int a = var(rng), b = var(rng);
      if (a == b && pick(rng) < 3) os << "x" << a << "^2";
      else os << "x" << a << "*x" << b;
    }
    os << "\n";
  }
  return os.str();
}

inline std::string mutate(std::mt19937_64& rng, std::string text) {
  static const std::string alphabet = "x0123456789+-*/^()=,# tTqfieldvarsormFQpZk\n";
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  const int edits = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int e = 0; e < edits && !text.empty(); ++e) {
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
    switch (op(rng)) {
      case 0: text.erase(at, 1); break;
      case 1: text.insert(at, 1, alphabet[ch(rng)]); break;
      case 2: text[at] = alphabet[ch(rng)]; break;
      default: text.insert(at, text.substr(at, std::min<std::size_t>(4, text.size() - at))); break;
    }
  }
  return text;
}

}  // namespace fuzz
