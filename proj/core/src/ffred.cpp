#include "qfs/ffred.hpp"

namespace qfs {

FTForm<FiniteField> ft_form_over_finite_field(const SystemDocument& doc, std::size_t index) {
  if (doc.field.kind != FieldKind::PrimeField) {
    throw Error(ErrorCode::FieldMismatch, "T coefficients need a prime field, Qp or Zpk header");
  }
  if (index >= doc.forms.size()) throw Error(ErrorCode::DimensionMismatch, "form index out of range");
  FTForm<FiniteField> f{FiniteField(doc.field), doc.vars, {}};
  for (const auto& [key, poly] : doc.forms[index].terms) {
    std::vector<std::uint32_t> c;
    for (const auto& a : poly) c.push_back(static_cast<std::uint32_t>(a.get_num().get_ui()));
    f.coeffs[key] = std::move(c);
  }
  return f;
}

FTForm<RationalField> ft_form_over_rationals(const SystemDocument& doc, std::size_t index) {
  if (doc.field.kind != FieldKind::PadicRational && doc.field.kind != FieldKind::ModPkRing) {
    throw Error(ErrorCode::FieldMismatch, "expected a Qp or Zpk header");
  }
  if (index >= doc.forms.size()) throw Error(ErrorCode::DimensionMismatch, "form index out of range");
  FTForm<RationalField> f{RationalField{}, doc.vars, {}};
  for (const auto& [key, poly] : doc.forms[index].terms) f.coeffs[key] = poly;
  return f;
}

}  // namespace qfs
