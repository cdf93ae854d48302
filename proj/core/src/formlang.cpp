#include "qfs/formlang.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace qfs {

namespace {

enum class TokKind { Ident, Int, Sym, End };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (ch == ' ' || ch == '\t') {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({TokKind::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({TokKind::Int, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::string_view("+-*/^()=,").find(ch) != std::string_view::npos) {
      out.push_back({TokKind::Sym, std::string(1, ch), col});
      ++i;
    } else {
      throw ParseError(ErrorCode::SyntaxError, line_no, col, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back({TokKind::End, "", line.size() + 1});
  return out;
}

void trim_poly(CoeffPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}

CoeffPoly poly_mul(const CoeffPoly& a, const CoeffPoly& b) {
  if (a.empty() || b.empty()) return {};
  CoeffPoly out(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim_poly(out);
  return out;
}

void poly_add_into(CoeffPoly& a, const CoeffPoly& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (sign > 0) a[i] += b[i];
    else a[i] -= b[i];
  }
  trim_poly(a);
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no) : toks_(std::move(tokens)), line_(line_no) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == TokKind::End; }

  bool accept_sym(char c) {
    if (peek().kind == TokKind::Sym && peek().text[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) const {
    throw ParseError(code, line_, at.column, msg);
  }

  void expect_sym(char c) {
    if (!accept_sym(c)) fail(peek(), std::string("expected '") + c + "'");
  }

  const Token& expect_ident(const std::string& word) {
    const Token& t = peek();
    if (t.kind != TokKind::Ident || t.text != word) fail(t, "expected '" + word + "'");
    return next();
  }

  mpz_class expect_int() {
    const Token& t = peek();
    if (t.kind != TokKind::Int) fail(t, "expected an integer");
    next();
    return mpz_class(t.text, 10);
  }

  std::uint32_t expect_small(std::uint64_t max_value, const std::string& what) {
    const Token& t = peek();
    const mpz_class v = expect_int();
    if (v > max_value) fail(t, what + " is too large");
    return static_cast<std::uint32_t>(v.get_ui());
  }

  void expect_end() {
    if (!at_end()) fail(peek(), "unexpected trailing input");
  }

  std::size_t line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

// Result of parsing one product term.
struct RawTerm {
  CoeffPoly coeff{mpq_class(1)};
  std::vector<std::pair<std::size_t, std::size_t>> xs;  // (variable index, column)
  std::size_t x_degree = 0;
  std::size_t column = 0;
};

class ExprParser {
 public:
  ExprParser(LineParser& lp, const SystemDocument& doc, bool& uses_t, bool& uses_T)
      : lp_(lp), doc_(doc), uses_t_(uses_t), uses_T_(uses_T) {}

  std::map<MonomialKey, CoeffPoly> parse_expression() {
    std::map<MonomialKey, CoeffPoly> terms;
    // The single token "0" is the zero form.
    if (lp_.peek().kind == TokKind::Int && lp_.peek().text.find_first_not_of('0') == std::string::npos) {
      LineParser probe = lp_;
      probe.next();
      if (probe.at_end()) {
        lp_.next();
        return terms;
      }
    }
    int sign = 1;
    if (lp_.accept_sym('-')) sign = -1;
    while (true) {
      RawTerm t = parse_term(/*inside_parens=*/false);
      if (t.x_degree != 2) {
        lp_.fail(Token{TokKind::Sym, "", t.column}, "term has degree " + std::to_string(t.x_degree) + ", expected 2",
                 ErrorCode::NonHomogeneous);
      }
      std::size_t i = t.xs[0].first, j = t.xs.size() > 1 ? t.xs[1].first : t.xs[0].first;
      if (i > j) std::swap(i, j);
      poly_add_into(terms[{i, j}], t.coeff, sign);
      if (lp_.accept_sym('+')) sign = 1;
      else if (lp_.accept_sym('-')) sign = -1;
      else break;
    }
    lp_.expect_end();
    for (auto it = terms.begin(); it != terms.end();) {
      if (it->second.empty()) it = terms.erase(it);
      else ++it;
    }
    return terms;
  }

 private:
  RawTerm parse_term(bool inside_parens) {
    RawTerm t;
    t.column = lp_.peek().column;
    while (true) {
      parse_factor(t, inside_parens);
      if (!lp_.accept_sym('*')) break;
    }
    return t;
  }

  void parse_factor(RawTerm& t, bool inside_parens) {
    const Token& tok = lp_.peek();
    if (tok.kind == TokKind::Int) {
      mpz_class num = lp_.expect_int();
      mpq_class value(num);
      if (lp_.accept_sym('/')) {
        const Token& den_tok = lp_.peek();
        mpz_class den = lp_.expect_int();
        if (den == 0) lp_.fail(den_tok, "zero denominator");
        value = mpq_class(num, den);
        value.canonicalize();
      }
      t.coeff = poly_mul(t.coeff, CoeffPoly{value});
      return;
    }
    if (tok.kind == TokKind::Sym && tok.text == "(") {
      if (inside_parens) lp_.fail(tok, "nested parentheses are not allowed");
      lp_.next();
      CoeffPoly inner = parse_parameter_poly();
      lp_.expect_sym(')');
      t.coeff = poly_mul(t.coeff, inner);
      return;
    }
    if (tok.kind == TokKind::Ident) {
      if (tok.text == "t" || tok.text == "T") {
        const Token sym = lp_.next();
        if (sym.text == "t") {
          if (doc_.field.kind != FieldKind::ExtensionField) lp_.fail(sym, "'t' requires an Fq header with poly=");
          uses_t_ = true;
        } else {
          uses_T_ = true;
        }
        std::size_t power = 1;
        if (lp_.accept_sym('^')) power = lp_.expect_small(kMaxParameterDegree, "exponent");
        CoeffPoly mono(power + 1, mpq_class(0));
        mono[power] = 1;
        t.coeff = poly_mul(t.coeff, mono);
        return;
      }
      if (tok.text.size() >= 2 && tok.text[0] == 'x' &&
          tok.text.find_first_not_of("0123456789", 1) == std::string::npos) {
        if (inside_parens) lp_.fail(tok, "variables are not allowed inside a coefficient");
        const Token var = lp_.next();
        const mpz_class index(var.text.substr(1));
        if (index < 1 || index > doc_.vars) {
          lp_.fail(var, "variable " + var.text + " is outside x1..x" + std::to_string(doc_.vars),
                   ErrorCode::UnknownVariable);
        }
        std::size_t power = 1;
        if (lp_.accept_sym('^')) {
          const Token& pt = lp_.peek();
          const mpz_class pw = lp_.expect_int();
          if (pw != 2) lp_.fail(pt, "variable powers other than 2 are not quadratic", ErrorCode::NonHomogeneous);
          power = 2;
        }
        for (std::size_t k = 0; k < power; ++k) t.xs.emplace_back(index.get_ui() - 1, var.column);
        t.x_degree += power;
        if (t.x_degree > 2) lp_.fail(var, "term has degree > 2", ErrorCode::NonHomogeneous);
        return;
      }
    }
    lp_.fail(tok, tok.kind == TokKind::End ? "unexpected end of line" : "unexpected token '" + tok.text + "'");
  }

  CoeffPoly parse_parameter_poly() {
    CoeffPoly sum;
    int sign = 1;
    if (lp_.accept_sym('-')) sign = -1;
    while (true) {
      RawTerm t = parse_term(/*inside_parens=*/true);
      poly_add_into(sum, t.coeff, sign);
      if (lp_.accept_sym('+')) sign = 1;
      else if (lp_.accept_sym('-')) sign = -1;
      else break;
    }
    return sum;
  }

  LineParser& lp_;
  const SystemDocument& doc_;
  bool& uses_t_;
  bool& uses_T_;
};

mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Canonical coefficient for the document's field. Returns false when a
// denominator is not invertible.
bool normalize_coefficient(const SystemDocument& doc, CoeffPoly& poly) {
  const FieldDesc& f = doc.field;
  if (f.kind == FieldKind::PadicRational) {
    trim_poly(poly);
    return true;
  }
  mpz_class modulus;
  if (f.kind == FieldKind::ModPkRing) mpz_ui_pow_ui(modulus.get_mpz_t(), f.p, f.k);
  else modulus = f.p;
  for (auto& c : poly) {
    const mpz_class& den = c.get_den();
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0) return false;
    c = mpq_class(mod_floor(c.get_num() * inv, modulus));
  }
  if (f.kind == FieldKind::ExtensionField && doc.symbol == ParameterSymbol::ExtensionElement) {
    std::vector<std::uint32_t> coeffs;
    for (const auto& c : poly) coeffs.push_back(static_cast<std::uint32_t>(c.get_num().get_ui()));
    const FiniteField field(f);
    const auto reduced = field.coefficients(field.from_coefficients(coeffs));
    poly.assign(reduced.begin(), reduced.end());
  }
  trim_poly(poly);
  return true;
}

std::string format_scalar_abs(const mpq_class& v) {
  return mpq_class(abs(v)).get_str();
}

char symbol_char(ParameterSymbol s) { return s == ParameterSymbol::ExtensionElement ? 't' : 'T'; }

std::string format_poly(const CoeffPoly& poly, ParameterSymbol symbol) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = poly.size(); k-- > 0;) {
    const mpq_class& c = poly[k];
    if (sgn(c) == 0) continue;
    if (first) out << (sgn(c) < 0 ? "-" : "");
    else out << (sgn(c) < 0 ? " - " : " + ");
    first = false;
    out << format_scalar_abs(c);
    if (k >= 1) out << '*' << symbol_char(symbol);
    if (k >= 2) out << '^' << k;
  }
  return out.str();
}

}  // namespace

SystemDocument parse_system(std::string_view text) {
  SystemDocument doc;
  enum class Stage { Header, Vars, Forms } stage = Stage::Header;
  std::set<std::string> names;
  bool uses_t = false, uses_T = false;
  std::size_t first_T_line = 0, first_T_col = 0;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::size_t hash = line.find('#');
    std::string_view content = line.substr(0, hash);
    const bool blank = content.find_first_not_of(" \t") == std::string_view::npos;
    if (blank) {
      if (hash != std::string_view::npos) {
        std::string_view c = line.substr(hash + 1);
        if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        doc.comments.emplace_back(c);
      }
      if (end == text.size()) break;
      continue;
    }

    LineParser lp(tokenize(content, line_no), line_no);
    switch (stage) {
      case Stage::Header: {
        lp.expect_ident("field");
        const Token kind = lp.next();
        if (kind.kind != TokKind::Ident) lp.fail(kind, "expected Fq, Qp or Zpk");
        const Token& p_tok = lp.peek();
        const std::uint32_t p = lp.expect_small(1ull << 31, "prime");
        if (kind.text == "Fq") {
          if (lp.peek().kind == TokKind::Ident && lp.peek().text == "poly") {
            lp.next();
            lp.expect_sym('=');
            std::vector<std::uint32_t> modulus;
            do {
              const Token& ct = lp.peek();
              const mpz_class c = lp.expect_int();
              if (modulus.size() > 16) lp.fail(ct, "modulus degree too large", ErrorCode::BadField);
              modulus.push_back(static_cast<std::uint32_t>(mpz_class(mod_floor(c, mpz_class(p == 0 ? 1 : p))).get_ui()));
            } while (lp.accept_sym(','));
            doc.field = FieldDesc::extension_field(p, modulus);
            doc.symbol = ParameterSymbol::ExtensionElement;
          } else {
            doc.field = FieldDesc::prime_field(p);
          }
        } else if (kind.text == "Qp") {
          std::uint32_t prec = FieldDesc::kDefaultPadicPrecision;
          if (lp.peek().kind == TokKind::Ident && lp.peek().text == "prec") {
            lp.next();
            lp.expect_sym('=');
            prec = lp.expect_small(1u << 20, "precision");
            doc.explicit_precision = true;
          }
          doc.field = FieldDesc::padic(p, prec);
        } else if (kind.text == "Zpk") {
          const std::uint32_t k = lp.expect_small(1u << 20, "exponent");
          doc.field = FieldDesc::mod_pk(p, k);
        } else {
          lp.fail(kind, "unknown field kind '" + kind.text + "'");
        }
        lp.expect_end();
        try {
          doc.field.validate();
          if (doc.field.kind == FieldKind::ExtensionField && doc.field.e == 1) {
            doc.field = FieldDesc::prime_field(p);
            doc.symbol = ParameterSymbol::None;
          }
        } catch (const Error& e) {
          throw ParseError(ErrorCode::BadField, line_no, p_tok.column, e.what());
        }
        stage = Stage::Vars;
        break;
      }
      case Stage::Vars: {
        lp.expect_ident("vars");
        const Token& t = lp.peek();
        const mpz_class n = lp.expect_int();
        if (n < 1 || n > kMaxDocumentVars) {
          lp.fail(t, "variable count must be in [1, " + std::to_string(kMaxDocumentVars) + "]");
        }
        doc.vars = n.get_ui();
        lp.expect_end();
        stage = Stage::Forms;
        break;
      }
      case Stage::Forms: {
        lp.expect_ident("form");
        const Token name = lp.next();
        if (name.kind != TokKind::Ident) lp.fail(name, "expected a form name");
        if (!names.insert(name.text).second) lp.fail(name, "duplicate form name '" + name.text + "'");
        lp.expect_sym('=');
        const bool had_T = uses_T;
        ExprParser ep(lp, doc, uses_t, uses_T);
        NamedForm form{name.text, ep.parse_expression()};
        if (uses_T && !had_T) {
          first_T_line = line_no;
          first_T_col = name.column;
        }
        for (auto& [key, poly] : form.terms) {
          if (!normalize_coefficient(doc, poly)) {
            throw ParseError(ErrorCode::NonIntegral, line_no, name.column,
                             "coefficient denominator is not invertible in the declared ring");
          }
        }
        for (auto it = form.terms.begin(); it != form.terms.end();) {
          if (it->second.empty()) it = form.terms.erase(it);
          else ++it;
        }
        doc.forms.push_back(std::move(form));
        break;
      }
    }
    if (end == text.size()) break;
  }

  if (stage == Stage::Header) throw ParseError(ErrorCode::SyntaxError, line_no, 1, "missing field header");
  if (stage == Stage::Vars) throw ParseError(ErrorCode::SyntaxError, line_no, 1, "missing vars line");
  if (doc.forms.empty()) throw ParseError(ErrorCode::SyntaxError, line_no, 1, "document has no form lines");
  if (uses_T) {
    if (doc.field.kind == FieldKind::ExtensionField) {
      throw ParseError(ErrorCode::SyntaxError, first_T_line, first_T_col,
                       "'T' coefficients are not supported over extension fields");
    }
    doc.symbol = ParameterSymbol::Transcendental;
  }
  (void)uses_t;
  return doc;
}

std::string serialize_header(const SystemDocument& doc) {
  std::ostringstream out;
  const FieldDesc& f = doc.field;
  out << "field ";
  switch (f.kind) {
    case FieldKind::PrimeField: out << "Fq " << f.p; break;
    case FieldKind::ExtensionField: {
      out << "Fq " << f.p << " poly=";
      for (std::size_t i = 0; i < f.modulus.size(); ++i) out << (i ? "," : "") << f.modulus[i];
      break;
    }
    case FieldKind::PadicRational:
      out << "Qp " << f.p;
      if (doc.explicit_precision || f.k != FieldDesc::kDefaultPadicPrecision) out << " prec=" << f.k;
      break;
    case FieldKind::ModPkRing: out << "Zpk " << f.p << ' ' << f.k; break;
  }
  return out.str();
}

std::string serialize_system(const SystemDocument& doc) {
  std::ostringstream out;
  for (const auto& c : doc.comments) out << "# " << c << '\n';
  out << serialize_header(doc) << '\n';
  out << "vars " << doc.vars << '\n';
  for (const auto& form : doc.forms) {
    out << "form " << form.name << " = ";
    if (form.terms.empty()) {
      out << "0\n";
      continue;
    }
    bool first = true;
    for (const auto& [key, poly] : form.terms) {
      const auto [i, j] = key;
      const bool scalar = poly.size() == 1;
      if (scalar) {
        const int s = sgn(poly[0]);
        if (first) out << (s < 0 ? "-" : "");
        else out << (s < 0 ? " - " : " + ");
        out << format_scalar_abs(poly[0]);
      } else {
        if (!first) out << " + ";
        out << '(' << format_poly(poly, doc.symbol) << ')';
      }
      first = false;
      out << "*x" << (i + 1);
      if (i == j) out << "^2";
      else out << "*x" << (j + 1);
    }
    out << '\n';
  }
  return out.str();
}

FFSystem to_finite_system(const SystemDocument& doc) {
  if (!doc.field.is_finite_field()) {
    throw Error(ErrorCode::FieldMismatch, "document is not over a finite field");
  }
  if (doc.symbol == ParameterSymbol::Transcendental) {
    throw Error(ErrorCode::FieldMismatch, "document has T coefficients; use ffreduce");
  }
  const FiniteField field(doc.field);
  FFSystem s(field, doc.vars);
  for (const auto& form : doc.forms) {
    FFForm q(field, doc.vars);
    for (const auto& [key, poly] : form.terms) {
      std::vector<std::uint32_t> coeffs;
      for (const auto& c : poly) coeffs.push_back(static_cast<std::uint32_t>(c.get_num().get_ui()));
      q.set(key.first, key.second, field.from_coefficients(coeffs));
    }
    s.push_back(std::move(q));
  }
  return s;
}

QSystem to_rational_system(const SystemDocument& doc) {
  if (doc.field.kind != FieldKind::PadicRational && doc.field.kind != FieldKind::ModPkRing) {
    throw Error(ErrorCode::FieldMismatch, "document is not over Qp or Z/p^k");
  }
  if (doc.symbol == ParameterSymbol::Transcendental) {
    throw Error(ErrorCode::FieldMismatch, "document has T coefficients; use ffreduce");
  }
  QSystem s(RationalField{}, doc.vars);
  for (const auto& form : doc.forms) {
    QForm q(RationalField{}, doc.vars);
    for (const auto& [key, poly] : form.terms) q.set(key.first, key.second, poly.empty() ? mpq_class(0) : poly[0]);
    s.push_back(std::move(q));
  }
  return s;
}

std::vector<std::string> default_names(std::size_t r, const std::vector<std::string>& names) {
  if (names.size() == r) return names;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < r; ++i) out.push_back("q" + std::to_string(i + 1));
  return out;
}

SystemDocument document_from(const FFSystem& s, const std::vector<std::string>& names) {
  SystemDocument doc;
  doc.field = s.ring().desc();
  doc.vars = s.n();
  doc.symbol = doc.field.kind == FieldKind::ExtensionField ? ParameterSymbol::ExtensionElement : ParameterSymbol::None;
  const auto labels = default_names(s.r(), names);
  for (std::size_t k = 0; k < s.r(); ++k) {
    NamedForm form{labels[k], {}};
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) {
        const auto c = s[k].coeff(i, j);
        if (c == 0) continue;
        CoeffPoly poly;
        for (auto d : s.ring().coefficients(c)) poly.emplace_back(d);
        trim_poly(poly);
        form.terms[{i, j}] = poly;
      }
    doc.forms.push_back(std::move(form));
  }
  return doc;
}

SystemDocument document_from(const QSystem& s, const FieldDesc& field, const std::vector<std::string>& names) {
  SystemDocument doc;
  doc.field = field;
  doc.vars = s.n();
  const auto labels = default_names(s.r(), names);
  for (std::size_t k = 0; k < s.r(); ++k) {
    NamedForm form{labels[k], {}};
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i; j < s.n(); ++j) {
        const auto& c = s[k].coeff(i, j);
        if (sgn(c) != 0) form.terms[{i, j}] = CoeffPoly{c};
      }
    doc.forms.push_back(std::move(form));
  }
  return doc;
}

}  // namespace qfs
