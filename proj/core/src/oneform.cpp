#include "qfs/oneform.hpp"

namespace qfs {

Diagonalization diagonalize(const QForm& q) {
  const RationalField qf;
  const std::size_t n = q.n();
  // A with q(x) = x^T A x.
  QMatrix a(n, n, mpq_class(0));
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = q.coeff(i, i);
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = q.coeff(i, j) / 2;
  }
  QMatrix m = identity_matrix(qf, n);

  // Basis change e_j <- e_j + c e_i applied to both A (congruence) and M.
  auto add_multiple = [&](std::size_t j, std::size_t i, const mpq_class& c) {
    for (std::size_t k = 0; k < n; ++k) m(k, j) += c * m(k, i);
    for (std::size_t k = 0; k < n; ++k) a(k, j) += c * a(k, i);
    for (std::size_t k = 0; k < n; ++k) a(j, k) += c * a(i, k);
  };
  auto swap_basis = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) std::swap(m(k, i), m(k, j));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
  };

  std::size_t next = 0;  // slot for the next nonzero diagonal entry
  for (std::size_t i = 0; i < n && next < n; ++i) {
    std::size_t t = next;
    // Bring a vector with nonzero value to position `next`.
    std::size_t pick = n;
    for (std::size_t j = t; j < n; ++j) {
      if (sgn(a(j, j)) != 0) {
        pick = j;
        break;
      }
    }
    if (pick == n) {
      for (std::size_t j = t; j < n && pick == n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          if (sgn(a(j, k)) != 0) {
            add_multiple(j, k, 1);
            pick = j;
            break;
          }
        }
    }
    if (pick == n) break;
    if (pick != t) swap_basis(pick, t);
    for (std::size_t j = t + 1; j < n; ++j) {
      if (sgn(a(t, j)) == 0) continue;
      add_multiple(j, t, -a(t, j) / a(t, t));
    }
    ++next;
  }
  Diagonalization out;
  out.m = std::move(m);
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(a(i, i));
  return out;
}

namespace {

std::uint32_t unit_residue(const mpq_class& u, std::uint32_t modulus) {
  mpz_class num = u.get_num() % modulus, den = u.get_den(), inv;
  if (num < 0) num += modulus;
  mpz_class mod = modulus;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw Error(ErrorCode::NonUnit, "denominator not invertible");
  }
  mpz_class r = (num * inv) % mod;
  return static_cast<std::uint32_t>(r.get_ui());
}

int legendre(const mpq_class& u, std::uint32_t p) {
  const std::uint32_t r = unit_residue(u, p);
  return FiniteField::prime(p).quadratic_character(r);
}

}  // namespace

std::uint32_t least_nonresidue(std::uint32_t p) {
  if (p == 2) throw Error(ErrorCode::PreconditionViolated, "every unit is a square mod 2");
  const FiniteField f = FiniteField::prime(p);
  for (std::uint32_t k = 2; k < p; ++k) {
    if (f.quadratic_character(k) == -1) return k;
  }
  throw Error(ErrorCode::BadField, "no quadratic non-residue");
}

mpq_class square_class(const mpq_class& a, std::uint32_t p) {
  if (sgn(a) == 0) throw Error(ErrorCode::ZeroArgument, "square class of 0");
  const long v = valuation(a, p);
  const mpq_class u = unit_part(a, p);
  mpq_class rep;
  if (p == 2) {
    rep = unit_residue(u, 8);
  } else {
    rep = legendre(u, p) == 1 ? 1 : least_nonresidue(p);
  }
  if (v % 2 != 0) rep *= p;
  return rep;
}

bool is_square_qp(const mpq_class& a, std::uint32_t p) {
  if (sgn(a) == 0) return true;
  return square_class(a, p) == 1;
}

int hilbert_symbol(const mpq_class& a, const mpq_class& b, std::uint32_t p) {
  if (sgn(a) == 0 || sgn(b) == 0) throw Error(ErrorCode::ZeroArgument, "Hilbert symbol of 0");
  const long alpha = valuation(a, p), beta = valuation(b, p);
  const mpq_class u = unit_part(a, p), v = unit_part(b, p);
  if (p != 2) {
    int s = 1;
    if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) s = -s;
    if (beta & 1) s *= legendre(u, p);
    if (alpha & 1) s *= legendre(v, p);
    return s;
  }
  const std::uint32_t u8 = unit_residue(u, 8), v8 = unit_residue(v, 8);
  auto eps = [](std::uint32_t x) { return ((x - 1) / 2) & 1; };
  auto omega = [](std::uint32_t x) { return ((x * x - 1) / 8) & 1; };
  const std::uint32_t e = eps(u8) * eps(v8) + static_cast<std::uint32_t>(alpha & 1) * omega(v8) +
                          static_cast<std::uint32_t>(beta & 1) * omega(u8);
  return (e & 1) ? -1 : 1;
}

FormInvariants invariants(const QForm& q, std::uint32_t p) {
  FormInvariants out;
  out.p = p;
  const auto diag = diagonalize(q);
  std::vector<mpq_class> nonzero;
  for (const auto& d : diag.diagonal) {
    if (sgn(d) != 0) nonzero.push_back(d);
  }
  out.rank = nonzero.size();
  mpq_class disc = 1;
  for (const auto& d : nonzero) {
    out.diagonal.push_back(square_class(d, p));
    disc *= d;
  }
  out.discriminant = square_class(disc, p);
  for (std::size_t i = 0; i < nonzero.size(); ++i)
    for (std::size_t j = i + 1; j < nonzero.size(); ++j) out.hasse *= hilbert_symbol(nonzero[i], nonzero[j], p);
  return out;
}

IsotropyDecision is_isotropic_qp(const QForm& q, std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::BadField, "p must be prime");
  IsotropyDecision out;
  out.invariants = invariants(q, p);
  const auto& inv = out.invariants;
  const std::size_t rank = inv.rank;
  if (rank < q.n()) {
    out.isotropic = true;
    out.criterion = "degenerate: a radical vector is a nontrivial zero";
    return out;
  }
  const mpq_class& d = inv.discriminant;
  switch (rank) {
    case 1:
      out.isotropic = false;
      out.criterion = "rank 1: a x^2 has only the trivial zero";
      break;
    case 2:
      out.isotropic = is_square_qp(-d, p);
      out.criterion = "rank 2: isotropic iff -d is a square";
      break;
    case 3:
      out.isotropic = hilbert_symbol(-1, -d, p) == inv.hasse;
      out.criterion = "rank 3: isotropic iff (-1,-d)_p equals the Hasse invariant";
      break;
    case 4:
      out.isotropic = !is_square_qp(d, p) || inv.hasse == hilbert_symbol(-1, -1, p);
      out.criterion = "rank 4: isotropic iff d is not a square or the Hasse invariant equals (-1,-1)_p";
      break;
    default:
      out.isotropic = true;
      out.criterion = "rank >= 5: every form is isotropic";
      break;
  }
  return out;
}

QForm anisotropic_quaternary(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::BadField, "p must be prime");
  QForm q(RationalField{}, 4);
  if (p == 2) {
    for (std::size_t i = 0; i < 4; ++i) q.set(i, i, 1);
    return q;
  }
  const mpq_class k = least_nonresidue(p);
  q.set(0, 0, 1);
  q.set(1, 1, -k);
  q.set(2, 2, p);
  q.set(3, 3, -k * p);
  return q;
}

QSystem block_witness(std::size_t r, std::uint32_t p) {
  if (r == 0) throw Error(ErrorCode::PreconditionViolated, "r must be at least 1");
  const QForm base = anisotropic_quaternary(p);
  QSystem s(RationalField{}, 4 * r);
  for (std::size_t b = 0; b < r; ++b) {
    QForm q(RationalField{}, 4 * r);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) q.set(4 * b + i, 4 * b + j, base.coeff(i, j));
    s.push_back(std::move(q));
  }
  return s;
}

}  // namespace qfs
