#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#include "cli.hpp"
#include "output.hpp"
#include "qfs/bounds.hpp"
#include "qfs/ffred.hpp"
#include "qfs/hensel.hpp"
#include "qfs/minimize.hpp"
#include "qfs/oneform.hpp"
#include "qfs/subspace.hpp"
#include "qfs/zerofinder.hpp"

namespace qfs::cli {

namespace {

struct Context {
  std::filesystem::path dir;
  const GlobalOptions& options;

  SystemDocument doc(const Json& entry) const { return read_document((dir / entry.at("file").get<std::string>()).string()); }
};

struct Check {
  bool passed = false;
  std::string expected;
  std::string actual;
};

using CheckFn = std::function<Check(const Json&, const Context&)>;

Check bounds_bracket(const Json& e, const Context&) {
  const std::size_t r = e.at("r");
  const std::uint64_t lo = lower_bound(r), hi = upper_bound(r)->value;
  const std::uint64_t want_lo = e.at("lower"), want_hi = e.at("upper");
  auto text = [&](std::uint64_t a, std::uint64_t b) {
    return std::to_string(a) + " <= beta(" + std::to_string(r) + ";Qp) <= " + std::to_string(b);
  };
  return {lo == want_lo && hi == want_hi, text(want_lo, want_hi), text(lo, hi)};
}

Check bounds_rule(const Json& e, const Context&) {
  const std::size_t r = e.at("r");
  const auto d = upper_bound(r);
  const std::string want = std::to_string(e.at("value").get<std::uint64_t>()) + " via " + e.at("rule").get<std::string>();
  const std::string got = std::to_string(d->value) + " via " + rule_label(*d);
  return {want == got && recheck(*d) == d->value, want, got};
}

Check bounds_values(const Json& e, const Context&) {
  std::string want, got;
  bool ok = true;
  const auto values = e.at("values").get<std::vector<std::uint64_t>>();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto v = upper_bound(i + 1)->value;
    ok = ok && v == values[i];
    want += (i ? " " : "") + std::to_string(values[i]);
    got += (i ? " " : "") + std::to_string(v);
  }
  return {ok, want, got};
}

Check bounds_piecewise(const Json& e, const Context&) {
  const std::size_t from = e.at("from"), to = e.at("to");
  for (std::size_t r = from; r <= to; ++r) {
    const std::uint64_t sq = 2 * static_cast<std::uint64_t>(r) * r;
    const std::uint64_t want = r % 2 == 0 ? sq - 16 : sq - 14;
    const auto got = upper_bound(r)->value;
    if (got != want) {
      return {false, "beta(" + std::to_string(r) + ") <= " + std::to_string(want),
              "beta(" + std::to_string(r) + ") <= " + std::to_string(got)};
    }
  }
  return {true, "2r^2-16 (even) / 2r^2-14 (odd)", "matches for r = " + std::to_string(from) + ".." + std::to_string(to)};
}

Check bounds_martin(const Json& e, const Context&) {
  const std::size_t from = e.at("from"), to = e.at("to");
  const std::uint64_t gap = e.at("gap");
  for (std::size_t r = from; r <= to; ++r) {
    const auto diff = martin_bound(r) - upper_bound(r)->value;
    if (diff != gap) {
      return {false, "gap " + std::to_string(gap), "gap " + std::to_string(diff) + " at r = " + std::to_string(r)};
    }
  }
  return {true, "gap " + std::to_string(gap), "gap " + std::to_string(gap)};
}

Check no_nonsingular_zero(const Json& e, const Context& ctx) {
  const auto s = to_finite_system(ctx.doc(e));
  const auto search = find_nonsingular_zero(s);
  EnumerateOptions count;
  count.count_only = true;
  const auto all = enumerate_common_zeros(s, count);
  const bool ok = !search.zero && search.certified && all.count >= 2 && all.nonsingular == 0;
  std::string got = search.zero ? "nonsingular zero found" : (search.certified ? "none (certified)" : "none (uncertified)");
  got += ", " + std::to_string(all.count) + " common zeros";
  return {ok, "no nonsingular zero (certified), at least one nontrivial zero", got};
}

Check minimized(const Json& e, const Context& ctx) {
  const auto s = to_finite_system(ctx.doc(e));
  const Json rep = minimized_report(s, ctx.options.no_cache);
  const bool want = e.at("minimized");
  std::string expected = want ? "minimized" : "not-minimized";
  std::string actual = rep.at("verdict");
  bool ok = actual == expected;
  if (e.contains("subspaces")) {
    expected += ", " + std::to_string(e.at("subspaces").get<std::uint64_t>()) + " span subspaces";
    actual += ", " + std::to_string(rep.at("subspaces_checked").get<std::uint64_t>()) + " span subspaces";
    ok = ok && rep.at("subspaces_checked") == e.at("subspaces");
  }
  return {ok, expected, actual};
}

Check pair_no_subspace(const Json& e, const Context& ctx) {
  const auto s = to_finite_system(ctx.doc(e));
  const FiniteField& field = s.ring();
  FFSystem combos(field, s.n());
  for (const auto& row : e.at("combination")) {
    std::vector<std::uint32_t> a;
    for (const auto& c : row) a.push_back(field.from_int(c.get<long long>()));
    combos.push_back(linear_combination(s, std::span<const std::uint32_t>(a)));
  }
  // Drop variables that occur in no form of the combined system.
  const auto active = combos.active_variables();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.n(); ++i)
    if (active[i]) keep.push_back(i);
  Matrix<std::uint32_t> embed(s.n(), keep.size(), 0);
  for (std::size_t c = 0; c < keep.size(); ++c) embed(keep[c], c) = 1;
  FFSystem pair(field, keep.size());
  for (const auto& q : combos.forms()) pair.push_back(compose(q, embed));

  const std::size_t dim = e.at("dim");
  SubspaceSearchOptions opts;
  opts.factor_inactive = false;
  const auto res = find_totally_singular(pair, dim, opts);
  const std::string want = "no common " + std::to_string(dim) + "-dimensional totally singular subspace (certified)";
  std::string got = res.found ? "found one" : (res.certified ? "none (certified)" : "undecided");
  got += " in F_" + std::to_string(field.order()) + "^" + std::to_string(keep.size());
  return {!res.found && res.certified, want, got};
}

Check transform(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto s = to_rational_system(doc);
  const std::uint32_t p = doc.field.p;
  std::vector<mpq_class> diag;
  for (const auto& v : e.at("M")) diag.emplace_back(v.get<std::string>());
  const TransformPair t(rational_diagonal(diag), rational_diagonal(std::vector<mpq_class>(s.r(), 1)), p);
  const auto c = check_transform(s, p, t);
  const std::string want = "integral, " + e.at("classification").get<std::string>() + ", score " +
                           std::to_string(e.at("score").get<long>());
  const std::string got = std::string(c.integral ? "integral" : "not integral") + ", " +
                          std::string(to_string(c.classification)) + ", score " + std::to_string(c.score);
  return {want == got, want, got};
}

Check minimize(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto s = to_rational_system(doc);
  const auto res = minimize_heuristic(s, doc.field.p);
  const auto model = to_rational_system(read_document((ctx.dir / e.at("model").get<std::string>()).string()));
  const std::size_t steps = e.at("steps");
  const bool ok = res.converged && res.steps.size() == steps && res.model == model;
  const std::string want = std::to_string(steps) + " step(s), converged, model " + e.at("model").get<std::string>();
  std::string got = std::to_string(res.steps.size()) + " step(s), " + (res.converged ? "converged" : "not converged");
  got += res.model == model ? ", model matches" : ", model differs";
  return {ok, want, got};
}

Check solve(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto s = to_rational_system(doc);
  const std::uint32_t k = e.at("precision");
  const auto res = padic_solve(s, doc.field.p, k);
  bool ok = res.status == SolveStatus::Solved && res.solution;
  std::string got(to_string(res.status));
  if (res.solution) {
    const long v = residual_valuation(s, res.solution->coords, doc.field.p);
    ok = ok && v >= static_cast<long>(k);
    got += ", residual valuation " + (v == kInfiniteValuation ? std::string("inf") : std::to_string(v));
  }
  return {ok, "solved, residual valuation >= " + std::to_string(k), got};
}

Check isotropy(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto s = to_rational_system(doc);
  const auto dec = is_isotropic_qp(s[0], doc.field.p);
  const bool want = e.at("isotropic");
  return {dec.isotropic == want, want ? "isotropic" : "anisotropic",
          std::string(dec.isotropic ? "isotropic" : "anisotropic") + " (" + dec.criterion + ")"};
}

Check ff_solution(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto f = ft_form_over_finite_field(doc);
  const std::size_t d = e.at("degree");
  const auto res = reduce_ft_form(f, d);
  const auto x = e.at("solution").get<std::vector<std::vector<long long>>>();
  std::vector<std::uint32_t> c(res.unknowns, 0);
  for (std::size_t i = 0; i < x.size() && i < res.n; ++i)
    for (std::size_t k = 0; k < x[i].size() && k <= d; ++k) c[res.unknown(i, k)] = f.field.from_int(x[i][k]);
  const auto values = evaluate(res.system, std::span<const std::uint32_t>(c));
  const bool zero = std::all_of(values.begin(), values.end(), [](std::uint32_t v) { return v == 0; });
  bool identity = false;
  if (zero) {
    try {
      solution_to_polynomials(res, f, std::span<const std::uint32_t>(c));
      identity = true;
    } catch (const Error&) {
    }
  }
  return {zero && identity, "the given x(T) is a common zero of all " + std::to_string(res.forms) + " forms",
          zero ? (identity ? "common zero, identity replayed" : "common zero, identity failed") : "not a common zero"};
}

Check ff_trivial(const Json& e, const Context& ctx) {
  const auto doc = ctx.doc(e);
  const auto f = ft_form_over_finite_field(doc);
  const auto res = reduce_ft_form(f, e.at("degree").get<std::size_t>());
  EnumerateOptions opts;
  opts.count_only = true;
  const auto all = enumerate_common_zeros(res.system, opts);
  return {all.exhaustive && all.count == 1, "only the trivial zero among all points",
          std::to_string(all.count) + " common zeros among " + std::to_string(all.visited) + " points"};
}

Check roundtrip(const Json&, const Context& ctx) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(ctx.dir))
    if (entry.path().extension() == ".qfs") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::size_t ok = 0;
  std::string bad;
  for (const auto& path : files) {
    try {
      const auto d = read_document(path.string());
      if (parse_system(serialize_system(d)) == d) {
        ++ok;
        continue;
      }
    } catch (const std::exception&) {
    }
    bad += " " + path.filename().string();
  }
  const std::string want = std::to_string(files.size()) + " documents roundtrip";
  return {ok == files.size() && !files.empty(), want,
          std::to_string(ok) + " documents roundtrip" + (bad.empty() ? "" : "; failing:" + bad)};
}

const std::map<std::string, CheckFn>& checks() {
  static const std::map<std::string, CheckFn> table = {
      {"bounds-bracket", bounds_bracket},
      {"bounds-rule", bounds_rule},
      {"bounds-values", bounds_values},
      {"bounds-piecewise", bounds_piecewise},
      {"bounds-martin", bounds_martin},
      {"no-nonsingular-zero", no_nonsingular_zero},
      {"minimized", minimized},
      {"pair-no-subspace", pair_no_subspace},
      {"transform", transform},
      {"minimize", minimize},
      {"solve", solve},
      {"isotropy", isotropy},
      {"ff-solution", ff_solution},
      {"ff-trivial", ff_trivial},
      {"roundtrip", roundtrip},
  };
  return table;
}

}  // namespace

std::vector<VerifyOutcome> verify_corpus(const std::filesystem::path& dir, const std::string& filter,
                                         const GlobalOptions& options) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir.string());
  const Json manifest = Json::parse(in);
  const Context ctx{dir, options};
  std::vector<VerifyOutcome> out;
  for (const auto& e : manifest.at("entries")) {
    VerifyOutcome o;
    o.id = e.at("id");
    o.group = e.at("group");
    o.anchor = e.at("anchor");
    if (!filter.empty() && o.id.find(filter) == std::string::npos && o.group.find(filter) == std::string::npos) {
      continue;
    }
    const std::string kind = e.at("check");
    const auto it = checks().find(kind);
    if (it == checks().end()) {
      o.expected = "a known check";
      o.actual = "unknown check '" + kind + "'";
    } else {
      try {
        const auto c = it->second(e, ctx);
        o.passed = c.passed;
        o.expected = c.expected;
        o.actual = c.actual;
      } catch (const std::exception& ex) {
        o.expected = "no error";
        o.actual = ex.what();
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace qfs::cli
