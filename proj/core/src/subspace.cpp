#include "qfs/subspace.hpp"

#include <bit>
#include <functional>
#include <random>

namespace qfs {

namespace {

using Visitor = std::function<bool(const std::vector<std::vector<std::uint32_t>>&)>;

// Depth-first search over reduced echelon bases. Row t has its pivot at
// column l > pivot(t-1), zeros before l, and every earlier row is zero at l.
class GenericTree {
 public:
  GenericTree(const FFSystem& s, std::size_t d, std::uint64_t budget) : s_(s), field_(s.ring()), d_(d), budget_(budget) {}

  // Returns true when the visitor asked to stop.
  bool run(const Visitor& visit) {
    visit_ = &visit;
    return dfs();
  }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  bool dfs() {
    const std::size_t t = rows_.size(), n = s_.n();
    if (t == d_) return !(*visit_)(rows_);
    const std::size_t first = t == 0 ? 0 : pivots_.back() + 1;
    for (std::size_t l = first; l + (d_ - t) <= n; ++l) {
      bool clear = true;
      for (const auto& row : rows_) clear = clear && row[l] == 0;
      if (!clear) continue;
      if (try_column(l)) return true;
    }
    return false;
  }

  bool try_column(std::size_t l) {
    const std::size_t n = s_.n(), free = n - l - 1;
    // Linear conditions b_i(v_j, e) = 0 on the coordinates after l.
    Matrix<std::uint32_t> a(0, free);
    std::vector<std::uint32_t> rhs;
    for (const auto& q : s_.forms()) {
      for (const auto& v : rows_) {
        const auto w = bilinear_functional(q, std::span<const std::uint32_t>(v));
        a.append_row(std::span<const std::uint32_t>(w.data() + l + 1, free));
        rhs.push_back(field_.neg(w[l]));
      }
    }
    std::vector<std::uint32_t> particular(free, 0);
    std::vector<std::vector<std::uint32_t>> kernel;
    if (a.rows() > 0 && free > 0) {
      const auto sol = solve_linear(field_, a, std::span<const std::uint32_t>(rhs));
      if (!sol) return false;
      particular = sol->particular;
      kernel = sol->kernel;
    } else if (free == 0) {
      for (auto b : rhs) {
        if (b != 0) return false;
      }
    } else {
      for (std::size_t c = 0; c < free; ++c) {
        std::vector<std::uint32_t> unit(free, 0);
        unit[c] = 1;
        kernel.push_back(std::move(unit));
      }
    }
    const std::uint32_t q = field_.order();
    std::vector<std::uint32_t> coeffs(kernel.size(), 0);
    std::vector<std::uint32_t> e(n, 0);
    while (true) {
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return true;
      }
      std::fill(e.begin(), e.end(), 0);
      e[l] = 1;
      for (std::size_t c = 0; c < free; ++c) e[l + 1 + c] = particular[c];
      for (std::size_t k = 0; k < kernel.size(); ++k) {
        if (!coeffs[k]) continue;
        for (std::size_t c = 0; c < free; ++c) {
          e[l + 1 + c] = field_.add(e[l + 1 + c], field_.mul(coeffs[k], kernel[k][c]));
        }
      }
      bool zero = true;
      for (const auto& form : s_.forms()) {
        if (evaluate(form, std::span<const std::uint32_t>(e)) != 0) {
          zero = false;
          break;
        }
      }
      if (zero) {
        rows_.push_back(e);
        pivots_.push_back(l);
        const bool stop = dfs();
        rows_.pop_back();
        pivots_.pop_back();
        if (stop) return true;
      }
      // Next combination, last coefficient fastest.
      bool done = true;
      for (std::size_t k = kernel.size(); k-- > 0;) {
        if (++coeffs[k] < q) {
          done = false;
          break;
        }
        coeffs[k] = 0;
      }
      if (done) break;
    }
    return false;
  }

  const FFSystem& s_;
  FiniteField field_;
  std::size_t d_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  const Visitor* visit_ = nullptr;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::size_t> pivots_;
};

// The same tree over F_2 with vectors packed as bit masks (bit c is x_{c+1}).
class BinaryTree {
 public:
  BinaryTree(const FFSystem& s, std::size_t d, std::uint64_t budget) : n_(s.n()), d_(d), budget_(budget) {
    for (const auto& q : s.forms()) {
      std::uint64_t diag = 0;
      std::vector<std::uint64_t> nb(n_, 0);
      for (std::size_t i = 0; i < n_; ++i) {
        if (q.coeff(i, i)) diag |= std::uint64_t{1} << i;
        for (std::size_t j = i + 1; j < n_; ++j) {
          if (!q.coeff(i, j)) continue;
          nb[i] |= std::uint64_t{1} << j;
          nb[j] |= std::uint64_t{1} << i;
        }
      }
      diag_.push_back(diag);
      neighbours_.push_back(std::move(nb));
    }
  }

  bool run(const Visitor& visit) {
    visit_ = &visit;
    return dfs();
  }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  bool value(std::size_t k, std::uint64_t x) const {
    bool v = std::popcount(x & diag_[k]) & 1;
    for (std::uint64_t m = x; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      // Pairs counted once through the smaller index.
      v ^= std::popcount(x & neighbours_[k][i] & ~((std::uint64_t{2} << i) - 1)) & 1;
    }
    return v;
  }

  std::uint64_t functional(std::size_t k, std::uint64_t v) const {
    std::uint64_t w = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::popcount(v & neighbours_[k][j]) & 1) w |= std::uint64_t{1} << j;
    }
    return w;
  }

  bool dfs() {
    const std::size_t t = rows_.size();
    if (t == d_) {
      std::vector<std::vector<std::uint32_t>> rows;
      for (auto r : rows_) {
        std::vector<std::uint32_t> v(n_, 0);
        for (std::size_t c = 0; c < n_; ++c) v[c] = (r >> c) & 1;
        rows.push_back(std::move(v));
      }
      return !(*visit_)(rows);
    }
    const std::size_t first = t == 0 ? 0 : pivots_.back() + 1;
    std::uint64_t used = 0;
    for (auto r : rows_) used |= r;
    for (std::size_t l = first; l + (d_ - t) <= n_; ++l) {
      if (used >> l & 1) continue;
      if (try_column(l)) return true;
    }
    return false;
  }

  bool try_column(std::size_t l) {
    const std::uint64_t lbit = std::uint64_t{1} << l;
    const std::uint64_t after = n_ == 64 ? ~((lbit << 1) - 1) : ((std::uint64_t{1} << n_) - 1) & ~((lbit << 1) - 1);
    // Rows of the linear system over the columns after l, with the right-hand
    // side stored in bit l.
    std::vector<std::uint64_t> eqs;
    for (std::size_t k = 0; k < diag_.size(); ++k) {
      for (auto v : rows_) {
        const std::uint64_t w = functional(k, v);
        eqs.push_back((w & after) | (w & lbit));
      }
    }
    // Full reduction with pivots at the lowest set bit.
    std::vector<std::uint64_t> pivot_masks;
    std::vector<std::uint64_t> reduced;
    for (auto eq : eqs) {
      for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (eq & pivot_masks[i]) eq ^= reduced[i];
      }
      if ((eq & after) == 0) {
        if (eq & lbit) return false;
        continue;
      }
      const std::uint64_t pivot = (eq & after) & -(eq & after);
      for (auto& r : reduced) {
        if (r & pivot) r ^= eq;
      }
      reduced.push_back(eq);
      pivot_masks.push_back(pivot);
    }
    std::uint64_t pivot_union = 0;
    for (auto p : pivot_masks) pivot_union |= p;
    std::uint64_t particular = lbit;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      if (reduced[i] & lbit) particular |= pivot_masks[i];
    }
    std::vector<std::uint64_t> kernel;
    for (std::uint64_t freecols = after & ~pivot_union; freecols; freecols &= freecols - 1) {
      const std::uint64_t f = freecols & -freecols;
      std::uint64_t v = f;
      for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (reduced[i] & f) v |= pivot_masks[i];
      }
      kernel.push_back(v);
    }
    // Gray-code walk over the affine solution set.
    std::uint64_t e = particular;
    const std::uint64_t count = kernel.size() >= 64 ? 0 : (std::uint64_t{1} << kernel.size());
    for (std::uint64_t g = 0; count == 0 || g < count; ++g) {
      if (g > 0) e ^= kernel[static_cast<std::size_t>(std::countr_zero(g))];
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return true;
      }
      bool zero = true;
      for (std::size_t k = 0; k < diag_.size() && zero; ++k) zero = !value(k, e);
      if (!zero) continue;
      rows_.push_back(e);
      pivots_.push_back(l);
      const bool stop = dfs();
      rows_.pop_back();
      pivots_.pop_back();
      if (stop) return true;
    }
    return false;
  }

  std::size_t n_;
  std::size_t d_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  const Visitor* visit_ = nullptr;
  std::vector<std::uint64_t> diag_;
  std::vector<std::vector<std::uint64_t>> neighbours_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::size_t> pivots_;
};

struct TreeOutcome {
  bool stopped = false;
  bool exhausted = false;
  std::uint64_t nodes = 0;
};

TreeOutcome run_tree(const FFSystem& s, std::size_t d, const SubspaceSearchOptions& options, const Visitor& visit) {
  if (d > s.n()) return {};
  if (s.ring().is_binary() && s.n() <= 64 && !options.generic_only) {
    BinaryTree tree(s, d, options.node_budget);
    const bool stopped = tree.run(visit);
    return {stopped && !tree.exhausted(), tree.exhausted(), tree.nodes()};
  }
  GenericTree tree(s, d, options.node_budget);
  const bool stopped = tree.run(visit);
  return {stopped && !tree.exhausted(), tree.exhausted(), tree.nodes()};
}

FFSystem restrict_to_active(const FFSystem& s, const std::vector<std::size_t>& active) {
  FFSystem out(s.ring(), active.size());
  for (const auto& q : s.forms()) {
    FFForm f(s.ring(), active.size());
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a; b < active.size(); ++b) f.set(a, b, q.coeff(active[a], active[b]));
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

SubspaceSearchResult find_totally_singular(const FFSystem& s, std::size_t d, const SubspaceSearchOptions& options) {
  const FiniteField& field = s.ring();
  const std::size_t n = s.n();
  SubspaceSearchResult out;
  std::vector<std::size_t> active, inactive;
  const auto mask = s.active_variables();
  for (std::size_t i = 0; i < n; ++i) (mask[i] || !options.factor_inactive ? active : inactive).push_back(i);
  out.active_variables = active.size();
  if (d > n) {
    out.certified = true;
    return out;
  }
  auto unit = [&](std::size_t c) {
    std::vector<std::uint32_t> v(n, 0);
    v[c] = 1;
    return v;
  };
  if (d <= inactive.size()) {
    std::vector<std::vector<std::uint32_t>> vectors;
    for (std::size_t i = 0; i < d; ++i) vectors.push_back(unit(inactive[i]));
    out.found = Subspace<FiniteField>::span(field, n, vectors);
    return out;
  }
  const std::size_t target = d - inactive.size();
  const FFSystem sub = restrict_to_active(s, active);
  std::vector<std::vector<std::uint32_t>> basis;
  const auto outcome = run_tree(sub, target, options, [&](const std::vector<std::vector<std::uint32_t>>& rows) {
    basis = rows;
    return false;
  });
  out.nodes = outcome.nodes;
  if (outcome.exhausted) {
    out.budget_exhausted = true;
    return out;
  }
  if (!outcome.stopped) {
    out.certified = true;
    return out;
  }
  std::vector<std::vector<std::uint32_t>> vectors;
  for (const auto& row : basis) {
    std::vector<std::uint32_t> v(n, 0);
    for (std::size_t a = 0; a < active.size(); ++a) v[active[a]] = row[a];
    vectors.push_back(std::move(v));
  }
  for (auto c : inactive) vectors.push_back(unit(c));
  out.found = Subspace<FiniteField>::span(field, n, vectors);
  if (out.found->dim() != d || !vanishes_on(s, *out.found)) {
    throw Error(ErrorCode::WitnessInvalid, "search produced a subspace that fails the restriction check");
  }
  return out;
}

std::uint64_t count_totally_singular(const FFSystem& s, std::size_t d, const SubspaceSearchOptions& options) {
  std::uint64_t count = 0;
  const auto outcome = run_tree(s, d, options, [&](const std::vector<std::vector<std::uint32_t>>&) {
    ++count;
    return true;
  });
  if (outcome.exhausted) throw Error(ErrorCode::BudgetExhausted, "node budget exhausted while counting");
  return count;
}

FFSystem random_system(const FiniteField& field, std::size_t r, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, field.order() - 1);
  FFSystem s(field, n);
  for (std::size_t k = 0; k < r; ++k) {
    FFForm q(field, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) q.set(i, j, dist(rng));
    s.push_back(std::move(q));
  }
  return s;
}

BetaExploration explore_beta(std::size_t r, const FiniteField& field, std::size_t m, std::size_t n, std::size_t trials,
                             std::uint64_t seed, const SubspaceSearchOptions& options) {
  BetaExploration out;
  out.r = r;
  out.m = m;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  std::mt19937_64 seeds(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto sys = random_system(field, r, n, seeds());
    const auto res = find_totally_singular(sys, m + 1, options);
    if (res.found) ++out.found;
    else if (res.certified) ++out.certified_missing;
    else ++out.undecided;
  }
  if (n > 1) {
    out.witness_trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto sys = random_system(field, r, n - 1, seeds());
      const auto res = find_totally_singular(sys, m + 1, options);
      if (!res.found && res.certified) {
        ++out.witnesses;
        if (!out.first_witness) out.first_witness = sys;
      }
    }
  }
  return out;
}

}  // namespace qfs
