#pragma once

// Reader and writer for the .qfs text format:
//
//   # optional comment lines
//   field Fq 2                      (or: Fq 2 poly=1,1,1 | Qp 3 [prec=20] | Zpk 3 4)
//   vars 13
//   form q1 = x1*x2 + x3^2 + x3*x4 + x4^2
//
// Coefficients are integers or fractions a/b. Over an extension field the
// literal "t" denotes the class of t modulo the poly= modulus (listed from the
// constant term up). The literal "T" denotes the transcendental of a
// function-field form and is only meaningful to the ffreduce compiler.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qfs/field.hpp"
#include "qfs/quadform.hpp"

namespace qfs {

// Polynomial coefficient in the document's parameter symbol, lowest power
// first, without trailing zeros. Empty means 0.
using CoeffPoly = std::vector<mpq_class>;

// 0-based (i, j) with i <= j.
using MonomialKey = std::pair<std::size_t, std::size_t>;

struct NamedForm {
  std::string name;
  std::map<MonomialKey, CoeffPoly> terms;

  bool operator==(const NamedForm&) const = default;
};

enum class ParameterSymbol { None, ExtensionElement, Transcendental };

struct SystemDocument {
  FieldDesc field;
  bool explicit_precision = false;
  std::size_t vars = 0;
  std::vector<NamedForm> forms;
  std::vector<std::string> comments;
  ParameterSymbol symbol = ParameterSymbol::None;

  bool operator==(const SystemDocument&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline constexpr std::size_t kMaxDocumentVars = 1024;
inline constexpr std::size_t kMaxParameterDegree = 4096;

// Throws ParseError for every malformed document.
SystemDocument parse_system(std::string_view text);

// Canonical text: comments, header, vars, one form per line with terms in
// (i, j) order and explicit coefficients; LF line endings.
std::string serialize_system(const SystemDocument& doc);

std::string serialize_header(const SystemDocument& doc);

// Conversions. Finite-field systems need an Fq header and no T; rational
// systems need a Qp or Zpk header and no T.
FFSystem to_finite_system(const SystemDocument& doc);
QSystem to_rational_system(const SystemDocument& doc);

SystemDocument document_from(const FFSystem& s, const std::vector<std::string>& names = {});
SystemDocument document_from(const QSystem& s, const FieldDesc& field, const std::vector<std::string>& names = {});

// "q1", "q2", ... unless names are supplied.
std::vector<std::string> default_names(std::size_t r, const std::vector<std::string>& names);

}  // namespace qfs
