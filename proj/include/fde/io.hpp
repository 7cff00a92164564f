#pragma once

#include <json.hpp>

#include "fde/relations.hpp"
#include "fde/solvers.hpp"

namespace fde {

using json = nlohmann::json;

/// Field specs serialize as the tower recipe (p, s, bottom degree, extension
/// factors); rebuilding the recipe reproduces the defining polynomials
/// bit-exactly, so loaded elements compare equal coefficientwise.
json spec_to_json(const FieldSpecPtr& spec);
FieldSpecPtr spec_from_json(const json& j);

json fe_to_json(const FieldElement& x);
FieldElement fe_from_json(const json& j, const FieldSpecPtr& spec);

json rat_to_json(const Rat& r);  // "num/den"
Rat rat_from_json(const json& j);

json hs_to_json(const HahnSeries& h);
HahnSeries hs_from_json(const json& j);

json ve_to_json(const VadicElement& x);
VadicElement ve_from_json(Session& S, const json& j);

json rt_to_json(const RatTheta& a);
RatTheta rt_from_json(const json& j, const FieldSpecPtr& spec);
json es_to_json(const ExactScalar& a);
ExactScalar es_from_json(const json& j, const FieldSpecPtr& spec);

json phi_to_json(const PhiMatrix& phi);
PhiMatrix phi_from_json(const json& j);
json psi_to_json(const PsiMatrix& psi);
PsiMatrix psi_from_json(Session& S, const json& j);

json valuation_table_json(const std::vector<ValuationRow>& rows);
json certificate_to_json(const RelationCertificate& cert);
json chain_report_json(const ChainReport& rep);

json pf_to_json(const ProductFieldMatrix& D);
ProductFieldMatrix pf_from_json(const json& j);
json pf_reduction_json(const PfReduction& red);

}  // namespace fde
