#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qfs/quadform.hpp"

namespace qfs {

struct Diagonalization {
  std::vector<mpq_class> diagonal;
  // q(M x) = sum_i diagonal[i] x_i^2.
  QMatrix m;
};

// Symmetric elimination over Q; nonzero entries come first.
Diagonalization diagonalize(const QForm& q);

// Canonical representative of the square class of a != 0 in Q_p: p^{0|1}
// times 1 or the least non-residue (odd p), or times 1, 3, 5, 7 (p = 2).
mpq_class square_class(const mpq_class& a, std::uint32_t p);

bool is_square_qp(const mpq_class& a, std::uint32_t p);

// Hilbert symbol (a, b)_p in {+1, -1}. Throws ZeroArgument for a or b = 0.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, std::uint32_t p);

struct FormInvariants {
  std::uint32_t p = 2;
  std::size_t rank = 0;
  std::vector<mpq_class> diagonal;  // square-class representatives
  mpq_class discriminant;           // square class of the product
  int hasse = 1;
};

FormInvariants invariants(const QForm& q, std::uint32_t p);

struct IsotropyDecision {
  bool isotropic = false;
  std::string criterion;
  FormInvariants invariants;
};

// Degenerate forms are isotropic. Nondegenerate ones by rank:
//   1: never; 2: -d is a square; 3: (-1, -d) = c; 4: d is not a square or
//   c = (-1, -1); 5 and more: always.
// d is the discriminant and c the Hasse invariant prod_{i<j} (a_i, a_j).
IsotropyDecision is_isotropic_qp(const QForm& q, std::uint32_t p);

std::uint32_t least_nonresidue(std::uint32_t p);

// x1^2 - k x2^2 + p x3^2 - k p x4^2 with k the least non-residue for odd p;
// x1^2 + x2^2 + x3^2 + x4^2 for p = 2.
QForm anisotropic_quaternary(std::uint32_t p);

// r copies of the anisotropic quaternary on disjoint blocks of 4 variables.
QSystem block_witness(std::size_t r, std::uint32_t p);

}  // namespace qfs
