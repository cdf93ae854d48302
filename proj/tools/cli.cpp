#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <sstream>

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

constexpr std::uint64_t kDefaultShown = 20;

std::uint32_t precision_or(const GlobalOptions& g, const SystemDocument& doc, std::uint32_t fallback) {
  if (g.precision) return *g.precision;
  if (doc.field.kind == FieldKind::ModPkRing || doc.explicit_precision) return doc.field.k;
  return fallback;
}

void require_finite(const SystemDocument& doc, std::string_view command) {
  if (!doc.field.is_finite_field()) {
    throw Error(ErrorCode::FieldMismatch, std::string(command) + " needs an Fq header");
  }
}

void require_padic(const SystemDocument& doc, std::string_view command) {
  if (doc.field.kind != FieldKind::PadicRational && doc.field.kind != FieldKind::ModPkRing) {
    throw Error(ErrorCode::FieldMismatch, std::string(command) + " needs a Qp or Zpk header");
  }
}

std::size_t form_index(const SystemDocument& doc, const std::string& name) {
  if (name.empty()) return 0;
  for (std::size_t i = 0; i < doc.forms.size(); ++i)
    if (doc.forms[i].name == name) return i;
  throw Error(ErrorCode::UnknownVariable, "no form named " + name);
}

// ---------------------------------------------------------------------------
// zeros

struct ZerosArgs {
  std::string file;
  bool nonsingular = false;
  bool projective = false;
  std::optional<std::uint64_t> sample;
};

int cmd_zeros(const ZerosArgs& a, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(a.file);
  EnumerateOptions opts;
  opts.projective = a.projective;
  opts.seed = g.seed;
  if (a.sample) {
    opts.sampling = true;
    opts.samples = *a.sample;
  }
  const std::uint64_t shown = g.limit.value_or(kDefaultShown);

  const bool finite = doc.field.is_finite_field();
  std::optional<FiniteField> field;
  FFSystem fs;
  QSystem qs;
  std::uint32_t k = 1;
  if (finite) {
    fs = to_finite_system(doc);
    field = fs.ring();
  } else {
    qs = to_rational_system(doc);
    k = precision_or(g, doc, 1);
    field = FiniteField::prime(doc.field.p);
    rep.json["modulus"] = std::to_string(doc.field.p) + "^" + std::to_string(k);
    rep.text << "modulus: " << doc.field.p << "^" << k << "\n";
  }
  auto run = [&](const EnumerateOptions& o) {
    return finite ? enumerate_common_zeros(fs, o) : enumerate_common_zeros_mod_pk(qs, doc.field.p, k, o);
  };
  auto point_text = [&](const ZeroReport& z) {
    std::string s = "(";
    for (std::size_t i = 0; i < z.point.size(); ++i) {
      if (i) s += ", ";
      s += finite ? field->to_string(z.point[i]) : std::to_string(z.point[i]);
    }
    return s + ")";
  };
  auto point_json = [&](const ZeroReport& z) {
    Json j;
    j["point"] = finite ? vector_json(*field, z.point) : Json(z.point);
    j["jacobian_rank"] = z.jacobian_rank;
    j["singular"] = z.singular;
    return j;
  };

  if (a.nonsingular) {
    EnumerateOptions o = opts;
    o.nonsingular_only = true;
    o.limit = 1;
    const auto res = run(o);
    rep.json["visited"] = res.visited;
    rep.json["exhaustive"] = res.exhaustive;
    rep.text << "visited: " << res.visited << (res.exhaustive ? " (exhaustive)" : " (sampled)") << "\n";
    if (!res.zeros.empty()) {
      rep.json["nonsingular_zero"] = point_json(res.zeros.front());
      rep.text << "nonsingular common zero: " << point_text(res.zeros.front())
               << " jacobian rank " << res.zeros.front().jacobian_rank << "\n";
      return kOk;
    }
    rep.json["nonsingular_zero"] = nullptr;
    rep.json["certified"] = res.exhaustive;
    rep.text << (res.exhaustive ? "no nonsingular common zero (certified)\n"
                                : "no nonsingular common zero found (sampling, not certified)\n");
    return kNegative;
  }

  EnumerateOptions counting = opts;
  counting.count_only = true;
  const auto total = run(counting);
  EnumerateOptions listing = opts;
  listing.limit = shown;
  const auto listed = shown == 0 ? EnumerationResult{} : run(listing);

  const bool trivial_counted = !a.projective && !opts.sampling;
  const std::uint64_t nontrivial = trivial_counted && total.count > 0 ? total.count - 1 : total.count;
  rep.json["visited"] = total.visited;
  rep.json["exhaustive"] = total.exhaustive;
  rep.json["count"] = total.count;
  rep.json["nontrivial"] = nontrivial;
  rep.json["nonsingular"] = total.nonsingular;
  rep.json["seed"] = opts.sampling ? Json(opts.seed) : Json(nullptr);
  Json list = Json::array();
  for (const auto& z : listed.zeros) list.push_back(point_json(z));
  rep.json["zeros"] = std::move(list);
  rep.json["truncated"] = listed.zeros.size() < total.count;

  rep.text << "visited: " << total.visited << (total.exhaustive ? " (exhaustive)" : " (sampled)") << "\n";
  rep.text << "common zeros: " << total.count << (trivial_counted ? " (including 0)" : "") << "\n";
  rep.text << "nonsingular: " << total.nonsingular << "\n";
  for (const auto& z : listed.zeros) {
    rep.text << "zero " << point_text(z) << " rank " << z.jacobian_rank << (z.singular ? " singular" : " nonsingular")
             << "\n";
  }
  if (listed.zeros.size() < total.count) rep.text << "(" << total.count - listed.zeros.size() << " more not shown)\n";
  if (nontrivial == 0) {
    rep.text << "only the trivial common zero" << (total.exhaustive ? " (certified)" : "") << "\n";
    return kNegative;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// subspace, explore-beta

struct SubspaceArgs {
  std::string file;
  std::size_t dim = 1;
  std::optional<std::uint64_t> budget;
};

int cmd_subspace(const SubspaceArgs& a, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(a.file);
  require_finite(doc, "subspace");
  const auto s = to_finite_system(doc);
  SubspaceSearchOptions opts;
  if (a.budget) opts.node_budget = *a.budget;
  const auto res = find_totally_singular(s, a.dim, opts);
  rep.json["dim"] = a.dim;
  rep.json["nodes"] = res.nodes;
  rep.json["active_variables"] = res.active_variables;
  rep.text << "target dimension: " << a.dim << "\n";
  rep.text << "active variables: " << res.active_variables << "\n";
  rep.text << "nodes: " << res.nodes << "\n";
  if (res.found) {
    rep.json["found"] = true;
    rep.json["basis"] = matrix_json(s.ring(), res.found->basis());
    rep.text << basis_text(s.ring(), *res.found);
    return kOk;
  }
  rep.json["found"] = false;
  rep.json["certified"] = res.certified;
  rep.json["budget_exhausted"] = res.budget_exhausted;
  if (res.certified) {
    rep.text << "no totally singular subspace of dimension " << a.dim << " (certified)\n";
  } else {
    rep.text << "search budget exhausted; undecided\n";
  }
  (void)g;
  return kNegative;
}

struct ExploreArgs {
  std::size_t r = 2;
  std::size_t m = 1;
  std::size_t n = 0;
  std::uint32_t p = 3;
  std::size_t trials = 20;
};

int cmd_explore(const ExploreArgs& a, const GlobalOptions& g, Report& rep) {
  const FiniteField field = FiniteField::prime(a.p);
  // For two forms the guarantee beta(2;F_p,m) = 2m + 4 is tested at n = 2m + 5.
  if (a.n == 0 && a.r != 2) throw CLI::ValidationError("--n", "required unless --r 2");
  const std::size_t n = a.n ? a.n : 2 * a.m + 5;
  const auto res = explore_beta(a.r, field, a.m, n, a.trials, g.seed);
  rep.json["r"] = a.r;
  rep.json["m"] = a.m;
  rep.json["n"] = n;
  rep.json["p"] = a.p;
  rep.json["trials"] = res.trials;
  rep.json["seed"] = res.seed;
  rep.json["found"] = res.found;
  rep.json["certified_missing"] = res.certified_missing;
  rep.json["undecided"] = res.undecided;
  rep.json["guarantee_holds"] = res.guarantee_holds();
  rep.json["witness_trials"] = res.witness_trials;
  rep.json["witnesses"] = res.witnesses;
  rep.text << "r = " << a.r << ", m = " << a.m << ", F_" << a.p << ", seed " << res.seed << "\n";
  rep.text << "n = " << n << ": " << res.found << "/" << res.trials << " systems vanish on a "
           << a.m + 1 << "-dimensional space";
  rep.text << " (" << res.certified_missing << " certified missing, " << res.undecided << " undecided)\n";
  rep.text << "n = " << n - 1 << ": " << res.witnesses << "/" << res.witness_trials
           << " systems certified without such a space\n";
  if (res.first_witness) {
    const auto wdoc = document_from(*res.first_witness);
    rep.json["first_witness"] = serialize_system(wdoc);
    rep.text << "first witness:\n" << serialize_system(wdoc);
  }
  return res.guarantee_holds() ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// minimized, minimize

Json verdict_json(const FiniteField& field, const MinimizeVerdict& v) {
  Json j;
  j["verdict"] = std::string(to_string(v.status));
  j["nodes"] = v.nodes;
  j["subspaces_checked"] = v.subspaces_checked;
  if (v.witness) {
    Json w;
    w["k"] = v.witness->k;
    w["combination"] = matrix_json(field, v.witness->combination);
    w["subspace"] = matrix_json(field, v.witness->v.basis());
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

int cmd_minimized(const std::string& file, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  require_finite(doc, "minimized");
  const Json result = minimized_report(to_finite_system(doc), g.no_cache);
  rep.json = result;
  const std::string verdict = result["verdict"];
  rep.text << "verdict: " << verdict << "\n";
  rep.text << "span subspaces checked: " << result["subspaces_checked"].get<std::uint64_t>() << "\n";
  rep.text << "search nodes: " << result["nodes"].get<std::uint64_t>() << "\n";
  if (!result["witness"].is_null()) {
    const auto& w = result["witness"];
    rep.text << "witness: " << w["k"].get<std::size_t>() << " forms vanish after fixing "
             << 2 * w["k"].get<std::size_t>() << " variables\n";
    rep.text << "combination:\n";
    for (const auto& row : w["combination"]) rep.text << "  " << row.dump() << "\n";
    rep.text << "subspace:\n";
    for (const auto& row : w["subspace"]) rep.text << "  " << row.dump() << "\n";
  }
  return verdict == "minimized" ? kOk : kNegative;
}

int cmd_minimize(const std::string& file, std::size_t max_iter, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  require_padic(doc, "minimize");
  const auto s = to_rational_system(doc);
  const std::uint32_t p = doc.field.p;
  const auto res = minimize_heuristic(s, p, max_iter);
  Json steps = Json::array();
  rep.text << "p = " << p << "\n";
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    const auto& st = res.steps[i];
    Json j;
    j["kind"] = st.kind;
    j["k"] = st.k;
    j["vM"] = st.transform.vM();
    j["vP"] = st.transform.vP();
    j["score"] = st.check.score;
    j["classification"] = std::string(to_string(st.check.classification));
    j["M"] = matrix_json(st.transform.M());
    j["P"] = matrix_json(st.transform.P());
    steps.push_back(std::move(j));
    rep.text << "step " << i + 1 << ": " << st.kind << " vM = " << st.transform.vM() << " vP = " << st.transform.vP()
             << " score = " << st.check.score << " (" << to_string(st.check.classification) << ")\n";
    rep.text << "  M =\n" << matrix_text(st.transform.M(), "    ");
    rep.text << "  P =\n" << matrix_text(st.transform.P(), "    ");
  }
  const auto model_doc = document_from(res.model, doc.field, default_names(res.model.r(), {}));
  rep.json["p"] = p;
  rep.json["steps"] = std::move(steps);
  rep.json["converged"] = res.converged;
  rep.json["stop_reason"] = res.stop_reason;
  rep.json["final_verdict"] = std::string(to_string(res.final_verdict));
  rep.json["model"] = serialize_system(model_doc);
  if (g.trace) {
    rep.json["total"] = {{"M", matrix_json(res.total.M())}, {"P", matrix_json(res.total.P())}};
  }
  rep.text << "converged: " << (res.converged ? "yes" : "no") << " (" << res.stop_reason << ")\n";
  rep.text << "reduction mod " << p << ": " << to_string(res.final_verdict) << "\n";
  if (g.trace) {
    rep.text << "total M =\n" << matrix_text(res.total.M(), "  ");
    rep.text << "total P =\n" << matrix_text(res.total.P(), "  ");
  }
  rep.text << "model:\n" << serialize_system(model_doc);
  return res.converged ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// lift, solve

Json padic_json(const PadicVector& v) {
  Json j;
  j["p"] = v.p;
  j["k"] = v.k;
  Json coords = Json::array();
  Json digits = Json::array();
  for (const auto& c : v.coords) {
    coords.push_back(c.get_str());
    digits.push_back(to_base_p_digits(c, v.p, v.k));
  }
  j["coords"] = std::move(coords);
  j["digits"] = std::move(digits);
  j["seed"] = v.seed;
  j["iterations"] = v.iterations;
  return j;
}

void padic_text(std::ostringstream& os, const PadicVector& v, std::string_view indent) {
  for (std::size_t i = 0; i < v.coords.size(); ++i) {
    os << indent << "x" << i + 1 << " = " << to_base_p_digits(v.coords[i], v.p, v.k) << " (" << v.coords[i].get_str()
       << " mod " << v.p << "^" << v.k << ")\n";
  }
}

std::vector<std::uint32_t> parse_point(const std::string& text, std::uint32_t p) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::SyntaxError, "bad coordinate '" + item + "' in --point");
    }
    out.push_back(static_cast<std::uint32_t>(((v % p) + p) % p));
  }
  return out;
}

int cmd_lift(const std::string& file, const std::string& point, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  require_padic(doc, "lift");
  const auto s = to_rational_system(doc);
  const std::uint32_t p = doc.field.p;
  const std::uint32_t k = precision_or(g, doc, FieldDesc::kDefaultPadicPrecision);
  const auto seed = parse_point(point, p);
  const auto v = lift_nonsingular(s, p, seed, k);
  const long res = residual_valuation(s, v.coords, p);
  rep.json = padic_json(v);
  rep.json["residual_valuation"] = res;
  rep.text << "lifted to precision " << p << "^" << k << " in " << v.iterations << " Newton steps\n";
  padic_text(rep.text, v, "");
  rep.text << "residual valuation: " << (res == kInfiniteValuation ? std::string("inf")
                                                                                  : std::to_string(res))
           << "\n";
  return kOk;
}

int cmd_solve(const std::string& file, std::optional<std::uint64_t> samples, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  require_padic(doc, "solve");
  const auto s = to_rational_system(doc);
  const std::uint32_t p = doc.field.p;
  const std::uint32_t k = precision_or(g, doc, 8);
  SolveOptions opts;
  opts.seed = g.seed;
  if (samples) opts.samples = *samples;
  const auto res = padic_solve(s, p, k, opts);
  rep.json["status"] = std::string(to_string(res.status));
  rep.json["p"] = p;
  rep.json["precision"] = k;
  rep.json["minimization_steps"] = res.minimization.steps.size();
  rep.json["seed_search_exhaustive"] = res.seed_search_exhaustive;
  rep.json["solution"] = res.solution ? padic_json(*res.solution) : Json(nullptr);
  rep.json["note"] = res.note;
  rep.text << "status: " << to_string(res.status) << "\n";
  rep.text << "minimization steps: " << res.minimization.steps.size() << "\n";
  if (res.solution) {
    rep.text << "solution mod " << p << "^" << k << ":\n";
    padic_text(rep.text, *res.solution, "  ");
  }
  if (!res.note.empty()) rep.text << "note: " << res.note << "\n";
  return res.status == SolveStatus::Solved ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// isotropy

int cmd_isotropy(const std::string& file, const std::string& form, const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  require_padic(doc, "isotropy");
  const auto s = to_rational_system(doc);
  const auto idx = form_index(doc, form);
  const QForm& q = s[idx];
  const std::uint32_t p = doc.field.p;
  const auto dec = is_isotropic_qp(q, p);
  const auto& inv = dec.invariants;
  Json diag = Json::array();
  for (const auto& d : inv.diagonal) diag.push_back(d.get_str());
  rep.json["form"] = doc.forms[idx].name;
  rep.json["p"] = p;
  rep.json["rank"] = inv.rank;
  rep.json["diagonal"] = std::move(diag);
  rep.json["discriminant"] = inv.discriminant.get_str();
  rep.json["hasse"] = inv.hasse;
  rep.json["isotropic"] = dec.isotropic;
  rep.json["criterion"] = dec.criterion;

  rep.text << "form " << doc.forms[idx].name << " over Q_" << p << "\n";
  rep.text << "rank: " << inv.rank << "\n";
  rep.text << "diagonal square classes:";
  for (const auto& d : inv.diagonal) rep.text << " " << d.get_str();
  rep.text << "\n";
  rep.text << "discriminant: " << inv.discriminant.get_str() << "\n";
  rep.text << "hasse invariant: " << (inv.hasse > 0 ? "+1" : "-1") << "\n";
  rep.text << (dec.isotropic ? "isotropic" : "anisotropic") << " (" << dec.criterion << ")\n";

  // An explicit zero when the form is small enough for the solver.
  if (dec.isotropic && q.n() <= 8 && inv.rank == q.n()) {
    QSystem single(RationalField{}, q.n());
    single.push_back(q);
    SolveOptions opts;
    opts.seed = g.seed;
    const std::uint32_t k = g.precision.value_or(8);
    try {
      const auto res = padic_solve(single, p, k, opts);
      if (res.solution) {
        rep.json["zero"] = padic_json(*res.solution);
        rep.text << "zero mod " << p << "^" << k << ":\n";
        padic_text(rep.text, *res.solution, "  ");
      }
    } catch (const Error&) {
      // The decision stands without an explicit zero.
    }
  }
  return dec.isotropic ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// ffreduce

template <class F>
std::string poly_text(const F& field, const std::vector<typename F::value_type>& c) {
  std::string s;
  for (std::size_t e = c.size(); e-- > 0;) {
    if (field.is_zero(c[e])) continue;
    std::string coeff = field.to_string(c[e]);
    if (!s.empty()) s += " + ";
    if (e == 0) {
      s += coeff;
    } else {
      if (coeff != "1") s += coeff + "*";
      s += e == 1 ? "T" : "T^" + std::to_string(e);
    }
  }
  return s.empty() ? "0" : s;
}

template <class F>
std::vector<std::string> index_comments(const ReductionResult<F>& res) {
  std::vector<std::string> out;
  out.push_back("compiled with ansatz degree " + std::to_string(res.d) + ": N = " + std::to_string(res.unknowns) +
                ", R = " + std::to_string(res.forms));
  for (std::size_t u = 0; u < res.index_map.size(); ++u) {
    const auto [i, e] = res.index_map[u];
    out.push_back("x" + std::to_string(u + 1) + " = coefficient of T^" + std::to_string(e) + " in x" +
                  std::to_string(i + 1));
  }
  return out;
}

int cmd_ffreduce(const std::string& file, std::size_t degree, const std::string& form, bool solve,
                 const GlobalOptions& g, Report& rep) {
  const auto doc = read_document(file);
  const auto idx = form_index(doc, form);
  auto header = [&](const auto& res) {
    rep.json["n"] = res.n;
    rep.json["d"] = res.d;
    rep.json["D"] = res.D;
    rep.json["N"] = res.unknowns;
    rep.json["R"] = res.forms;
    Json map = Json::array();
    for (const auto& [i, e] : res.index_map) map.push_back({{"variable", i + 1}, {"power", e}});
    rep.json["index_map"] = std::move(map);
  };
  auto form_names = [&](std::size_t r) {
    std::vector<std::string> out;
    for (std::size_t s = 0; s < r; ++s) out.push_back("T" + std::to_string(s));
    return out;
  };

  if (doc.field.is_finite_field()) {
    const auto f = ft_form_over_finite_field(doc, idx);
    const auto res = reduce_ft_form(f, degree);
    header(res);
    auto out = document_from(res.system, form_names(res.forms));
    out.comments = index_comments(res);
    rep.json["document"] = serialize_system(out);
    rep.text << serialize_system(out);
    if (!solve) return kOk;
    EnumerateOptions opts;
    opts.limit = g.limit.value_or(kDefaultShown) + 1;
    const auto zeros = enumerate_common_zeros(res.system, opts);
    Json sols = Json::array();
    std::size_t nontrivial = 0;
    for (const auto& z : zeros.zeros) {
      bool zero = true;
      for (auto c : z.point) zero = zero && c == 0;
      if (zero) continue;
      ++nontrivial;
      const auto x = solution_to_polynomials(res, f, std::span<const std::uint32_t>(z.point));
      Json sol = Json::array();
      std::string line = "solution (";
      for (std::size_t i = 0; i < x.size(); ++i) {
        sol.push_back(poly_text(f.field, x[i]));
        line += (i ? ", " : "") + poly_text(f.field, x[i]);
      }
      sols.push_back(std::move(sol));
      rep.text << "# " << line << ")\n";
    }
    rep.json["solutions"] = std::move(sols);
    rep.json["exhaustive"] = zeros.exhaustive && !zeros.truncated;
    if (nontrivial == 0) {
      rep.text << "# only the trivial solution" << (zeros.exhaustive && !zeros.truncated ? " (certified)" : "")
               << "\n";
      return kNegative;
    }
    return kOk;
  }
  const auto f = ft_form_over_rationals(doc, idx);
  const auto res = reduce_ft_form(f, degree);
  header(res);
  auto out = document_from(res.system, doc.field, form_names(res.forms));
  out.explicit_precision = doc.explicit_precision;
  out.comments = index_comments(res);
  rep.json["document"] = serialize_system(out);
  rep.text << serialize_system(out);
  if (solve) throw Error(ErrorCode::PreconditionViolated, "--solve needs an Fq header");
  return kOk;
}

// ---------------------------------------------------------------------------
// bounds

Json derivation_json(const BoundDerivation& d) {
  Json j;
  j["target"] = d.target();
  j["value"] = d.value;
  j["rule"] = std::string(to_string(d.rule));
  if (d.rule == BoundRule::Ind1) j["k"] = d.k;
  Json kids = Json::array();
  for (const auto& c : d.children) kids.push_back(derivation_json(*c));
  j["children"] = std::move(kids);
  return j;
}

std::string bracket(std::size_t r, std::uint64_t lower, std::uint64_t upper) {
  const std::string target = "beta(" + std::to_string(r) + ";Qp)";
  if (lower == upper) return target + " = " + std::to_string(upper);
  return std::to_string(lower) + " <= " + target + " <= " + std::to_string(upper);
}

int cmd_bounds(std::optional<std::size_t> r, std::optional<std::size_t> table, std::optional<std::uint64_t> m,
               const GlobalOptions& g, Report& rep) {
  if (!r && !table) throw CLI::ValidationError("bounds", "give --r or --table");
  if (table) {
    Json rows = Json::array();
    rep.text << "r lower upper rule older\n";
    for (const auto& row : bound_table(*table)) {
      rows.push_back({{"r", row.r},
                      {"lower", row.lower},
                      {"upper", row.upper},
                      {"rule", row.rule},
                      {"older", row.martin}});
      rep.text << row.r << " " << row.lower << " " << row.upper << " " << row.rule << " " << row.martin << "\n";
    }
    rep.json["table"] = std::move(rows);
  }
  if (r) {
    const auto d = m ? upper_bound_subspace(*r, *m) : upper_bound(*r);
    if (m) {
      rep.json["target"] = d->target();
      rep.json["upper"] = d->value;
      rep.text << d->target() << " <= " << d->value << "\n";
    } else {
      const auto lower = lower_bound(*r);
      rep.json["r"] = *r;
      rep.json["lower"] = lower;
      rep.json["upper"] = d->value;
      rep.json["rule"] = rule_label(*d);
      rep.text << bracket(*r, lower, d->value) << "\n";
    }
    if (g.trace) {
      rep.json["trace"] = derivation_json(*d);
      rep.text << format_trace(*d);
    }
  }
  Json notes = Json::array();
  for (const auto& a : bound_annotations()) {
    notes.push_back(a);
    if (table) rep.text << "# " << a << "\n";
  }
  rep.json["annotations"] = std::move(notes);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify-paper

int cmd_verify(const std::string& filter, const std::string& corpus, const GlobalOptions& g, Report& rep) {
  const std::filesystem::path dir = corpus.empty() ? default_corpus_dir() : std::filesystem::path(corpus);
  const auto outcomes = verify_corpus(dir, filter, g);
  std::size_t failed = 0;
  Json list = Json::array();
  for (const auto& o : outcomes) {
    list.push_back({{"id", o.id},
                    {"group", o.group},
                    {"passed", o.passed},
                    {"expected", o.expected},
                    {"actual", o.actual},
                    {"anchor", o.anchor}});
    if (o.passed) {
      rep.text << "PASS " << o.id << "\n";
    } else {
      ++failed;
      rep.text << "FAIL " << o.id << "\n  expected: " << o.expected << "\n  actual:   " << o.actual
               << "\n  anchor:   " << o.anchor << "\n";
    }
  }
  rep.json["entries"] = std::move(list);
  rep.json["failed"] = failed;
  rep.text << outcomes.size() - failed << "/" << outcomes.size() << " entries passed\n";
  return failed == 0 && !outcomes.empty() ? kOk : kNegative;
}

}  // namespace

Json minimized_report(const FFSystem& s, bool no_cache) {
  const auto canonical = serialize_system(document_from(s));
  const std::uint64_t key = fnv1a("minimized\n" + canonical);
  if (!no_cache) {
    if (auto cached = cache_load(key); cached && cached->contains("verdict")) return *cached;
  }
  Json result = verdict_json(s.ring(), is_Fq_minimized(s));
  if (result["verdict"] != "unknown") cache_store(key, result);
  return result;
}

std::filesystem::path default_corpus_dir() {
  if (const char* env = std::getenv("QFS_CORPUS_DIR"); env && *env) return env;
  return QFS_DEFAULT_CORPUS_DIR;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with systems of quadratic forms", "qfs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Seed for randomized operations");
  app.add_option("--precision", g.precision, "p-adic precision k (work modulo p^k)");
  app.add_option("--limit", g.limit, "Maximum number of reported items");
  app.add_flag("--trace", g.trace, "Include derivations and transform logs");
  app.add_flag("--no-cache", g.no_cache, "Recompute cached certifications");

  ZerosArgs zeros_args;
  auto* zeros = app.add_subcommand("zeros", "Enumerate common zeros over F_q or modulo p^k");
  zeros->add_option("file", zeros_args.file, ".qfs input (- for stdin)");
  zeros->add_flag("--nonsingular", zeros_args.nonsingular, "Look for a nonsingular common zero only");
  zeros->add_flag("--projective", zeros_args.projective, "One representative per projective point");
  zeros->add_option("--sample", zeros_args.sample, "Sample this many random points instead of enumerating");

  SubspaceArgs sub_args;
  auto* sub = app.add_subcommand("subspace", "Search for a totally singular subspace");
  sub->add_option("file", sub_args.file, ".qfs input (- for stdin)");
  sub->add_option("--dim", sub_args.dim, "Subspace dimension")->required();
  sub->add_option("--budget", sub_args.budget, "Search node budget");

  ExploreArgs ex_args;
  auto* ex = app.add_subcommand("explore-beta", "Random systems versus the beta(r;F_p,m) guarantee");
  ex->add_option("--r", ex_args.r, "Number of forms")->required();
  ex->add_option("--m", ex_args.m, "Projective dimension of the sought space")->required();
  ex->add_option("--n", ex_args.n, "Number of variables (default 2m + 5 for two forms)");
  ex->add_option("--p", ex_args.p, "Prime")->required();
  ex->add_option("--trials", ex_args.trials, "Random systems per variable count");

  std::string minimized_file;
  auto* mind = app.add_subcommand("minimized", "Decide whether a system over F_q is F_q-minimized");
  mind->add_option("file", minimized_file, ".qfs input (- for stdin)");

  std::string minimize_file;
  std::size_t max_iter = kDefaultMaxIterations;
  auto* mini = app.add_subcommand("minimize", "Improve an integral model over Q_p");
  mini->add_option("file", minimize_file, ".qfs input (- for stdin)");
  mini->add_option("--max-iter", max_iter, "Iteration limit");

  std::string lift_file, lift_point;
  auto* lift = app.add_subcommand("lift", "Hensel-lift a nonsingular zero mod p");
  lift->add_option("file", lift_file, ".qfs input (- for stdin)");
  lift->add_option("--point", lift_point, "Seed coordinates mod p, comma separated")->required();

  std::string solve_file;
  std::optional<std::uint64_t> solve_samples;
  auto* solve = app.add_subcommand("solve", "Find a p-adic zero via minimization and Hensel lifting");
  solve->add_option("file", solve_file, ".qfs input (- for stdin)");
  solve->add_option("--samples", solve_samples, "Random seeds tried when exhaustive search is too large");

  std::string iso_file, iso_form;
  auto* iso = app.add_subcommand("isotropy", "Decide isotropy of a single form over Q_p");
  iso->add_option("file", iso_file, ".qfs input (- for stdin)");
  iso->add_option("--form", iso_form, "Form name (default: the first)");

  std::string ff_file, ff_form;
  std::size_t ff_degree = 1;
  bool ff_solve = false;
  auto* ff = app.add_subcommand("ffreduce", "Compile a form over K(T) into a system over K");
  ff->add_option("file", ff_file, ".qfs input with T coefficients (- for stdin)");
  ff->add_option("--degree", ff_degree, "Degree d of the polynomial ansatz")->required();
  ff->add_option("--form", ff_form, "Form name (default: the first)");
  ff->add_flag("--solve", ff_solve, "Enumerate solutions of the compiled system");

  std::optional<std::size_t> b_r, b_table;
  std::optional<std::uint64_t> b_m;
  auto* bounds = app.add_subcommand("bounds", "Upper and lower bounds for beta(r;Qp)");
  bounds->add_option("--r", b_r, "Number of forms")->check(CLI::Range(std::size_t{1}, kMaxBoundRank));
  bounds->add_option("--m", b_m, "Bound beta(r;Qp,m) instead");
  bounds->add_option("--table", b_table, "Print the table for r = 1..R_MAX")
      ->check(CLI::Range(std::size_t{1}, kMaxBoundRank));

  std::string v_filter, v_corpus;
  auto* verify = app.add_subcommand("verify-paper", "Replay every corpus entry");
  verify->add_option("--filter", v_filter, "Only entries whose id or group contains this text");
  verify->add_option("--corpus", v_corpus, "Corpus directory (default: the bundled corpus)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  Report rep;
  int code = kError;
  try {
    if (*zeros) code = cmd_zeros(zeros_args, g, rep);
    else if (*sub) code = cmd_subspace(sub_args, g, rep);
    else if (*ex) code = cmd_explore(ex_args, g, rep);
    else if (*mind) code = cmd_minimized(minimized_file, g, rep);
    else if (*mini) code = cmd_minimize(minimize_file, max_iter, g, rep);
    else if (*lift) code = cmd_lift(lift_file, lift_point, g, rep);
    else if (*solve) code = cmd_solve(solve_file, solve_samples, g, rep);
    else if (*iso) code = cmd_isotropy(iso_file, iso_form, g, rep);
    else if (*ff) code = cmd_ffreduce(ff_file, ff_degree, ff_form, ff_solve, g, rep);
    else if (*bounds) code = cmd_bounds(b_r, b_table, b_m, g, rep);
    else if (*verify) code = cmd_verify(v_filter, v_corpus, g, rep);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  rep.emit(out, g);
  return code;
}

}  // namespace qfs::cli
