#include "fde/io.hpp"

namespace fde {

json spec_to_json(const FieldSpecPtr& spec) {
    std::vector<int> factors;
    auto cur = spec;
    while (cur->base) {
        factors.push_back(cur->deg / cur->base->deg);
        cur = cur->base;
    }
    std::reverse(factors.begin(), factors.end());
    return json{{"p", cur->p}, {"s", cur->s}, {"M", cur->M()}, {"ext", factors}};
}

FieldSpecPtr spec_from_json(const json& j) {
    auto spec = make_field(j.at("p").get<int>(), j.at("s").get<int>(), j.at("M").get<int>());
    for (int k : j.at("ext").get<std::vector<int>>()) spec = extend_field(spec, k);
    return spec;
}

json fe_to_json(const FieldElement& x) {
    return json{{"deg", x.spec()->deg}, {"coeffs", x.coeffs()}};
}

FieldElement fe_from_json(const json& j, const FieldSpecPtr& spec) {
    if (j.at("deg").get<int>() != spec->deg) throw FieldError("fe_from_json: degree mismatch");
    return FieldElement(spec, j.at("coeffs").get<std::vector<int>>());
}

json rat_to_json(const Rat& r) { return to_string(r); }
Rat rat_from_json(const json& j) { return parse_rat(j.get<std::string>()); }

json hs_to_json(const HahnSeries& h) {
    json terms = json::array();
    for (auto& [e, c] : h.terms)
        terms.push_back(json{{"exp", rat_to_json(e)}, {"coeff", fe_to_json(c)}});
    return json{{"field", spec_to_json(h.spec)}, {"terms", terms}, {"cap", rat_to_json(h.cap)}};
}

HahnSeries hs_from_json(const json& j) {
    auto spec = spec_from_json(j.at("field"));
    HahnSeries h = hs_zero(spec, rat_from_json(j.at("cap")));
    for (auto& t : j.at("terms"))
        h.terms.emplace(rat_from_json(t.at("exp")), fe_from_json(t.at("coeff"), spec));
    return h;
}

json ve_to_json(const VadicElement& x) {
    json v = json::array();
    for (auto& c : x.place->v) v.push_back(fe_to_json(c));
    json comps = json::object();
    for (size_t l = 0; l < x.comp.size(); ++l) {
        json one = json::object();
        for (auto& [i, h] : x.comp[l]) one[std::to_string(i)] = hs_to_json(h);
        comps[std::to_string(l)] = std::move(one);
    }
    return json{{"v", v},
                {"vfield", spec_to_json(x.place->v[0].spec())},
                {"Nt", x.Nt},
                {"components", comps}};
}

VadicElement ve_from_json(Session& S, const json& j) {
    auto vspec = spec_from_json(j.at("vfield"));
    std::vector<FieldElement> v;
    for (auto& c : j.at("v")) v.push_back(embed(fe_from_json(c, vspec), S.qfield));
    auto place = make_place(S, v);
    VadicElement x = ve_zero(place, j.at("Nt").get<int>(), S.field, Rat(0));
    for (auto& [lstr, one] : j.at("components").items()) {
        size_t l = (size_t)std::stoll(lstr);
        if (l >= x.comp.size()) throw FieldError("ve_from_json: component out of range");
        for (auto& [istr, hj] : one.items())
            x.comp[l].emplace(std::stoll(istr), hs_from_json(hj));
    }
    ve_normalize(S, x);
    return x;
}

namespace {

json tp_to_json(const ThetaPoly& f) {
    json out = json::array();
    for (auto& c : f) out.push_back(fe_to_json(c));
    return out;
}

ThetaPoly tp_from_json(const json& j, const FieldSpecPtr& spec) {
    ThetaPoly out;
    for (auto& c : j) out.push_back(fe_from_json(c, spec));
    return out;
}

}  // namespace

json rt_to_json(const RatTheta& a) {
    return json{{"num", tp_to_json(a.num)}, {"den", tp_to_json(a.den)}};
}

RatTheta rt_from_json(const json& j, const FieldSpecPtr& spec) {
    return rt_make(spec, tp_from_json(j.at("num"), spec), tp_from_json(j.at("den"), spec));
}

json es_to_json(const ExactScalar& a) {
    json num = json::array(), den = json::array();
    for (auto& c : a.num) num.push_back(rt_to_json(c));
    for (auto& c : a.den) den.push_back(rt_to_json(c));
    return json{{"field", spec_to_json(a.spec)}, {"num", num}, {"den", den}};
}

ExactScalar es_from_json(const json& j, const FieldSpecPtr& spec) {
    std::vector<RatTheta> num, den;
    for (auto& c : j.at("num")) num.push_back(rt_from_json(c, spec));
    for (auto& c : j.at("den")) den.push_back(rt_from_json(c, spec));
    return es_make(spec, std::move(num), std::move(den));
}

json phi_to_json(const PhiMatrix& phi) {
    json rows = json::array();
    for (auto& row : phi.m) {
        json r = json::array();
        for (auto& x : row) r.push_back(es_to_json(x));
        rows.push_back(std::move(r));
    }
    json out{{"r", phi.r}, {"m", rows}, {"motive", phi.motive}};
    out["field"] = spec_to_json(phi.m[0][0].spec);
    if (phi.motive) {
        out["c"] = rt_to_json(phi.c);
        out["s"] = phi.s;
    }
    return out;
}

PhiMatrix phi_from_json(const json& j) {
    auto spec = spec_from_json(j.at("field"));
    EMatrix m;
    for (auto& row : j.at("m")) {
        std::vector<ExactScalar> r;
        for (auto& x : row) r.push_back(es_from_json(x, spec));
        m.push_back(std::move(r));
    }
    auto phi = phi_make(m);
    if (j.at("motive").get<bool>())
        phi_set_motive(phi, rt_from_json(j.at("c"), spec), j.at("s").get<long long>());
    return phi;
}

json psi_to_json(const PsiMatrix& psi) {
    json rows = json::array();
    for (auto& row : psi) {
        json r = json::array();
        for (auto& x : row) r.push_back(ve_to_json(x));
        rows.push_back(std::move(r));
    }
    return json{{"r", psi.size()}, {"rows", rows}};
}

PsiMatrix psi_from_json(Session& S, const json& j) {
    PsiMatrix out;
    for (auto& row : j.at("rows")) {
        std::vector<VadicElement> r;
        for (auto& x : row) r.push_back(ve_from_json(S, x));
        out.push_back(std::move(r));
    }
    return out;
}

json valuation_table_json(const std::vector<ValuationRow>& rows) {
    json out = json::array();
    for (auto& r : rows)
        out.push_back(json{{"m", r.m},
                           {"i", r.i},
                           {"val", rat_to_json(r.val)},
                           {"formula", rat_to_json(r.formula)},
                           {"relation", r.equality ? "=" : ">="},
                           {"verdict", r.pass ? "pass" : "fail"}});
    return out;
}

json certificate_to_json(const RelationCertificate& cert) {
    json coeffs = json::array();
    for (auto& pj : cert.coeffs) coeffs.push_back(tp_to_json(pj));
    return json{{"relation", cert.relation},
                {"coeffs", coeffs},
                {"residual_val", rat_to_json(cert.residual_val)},
                {"D", cert.D},
                {"cutoff", rat_to_json(cert.cutoff)},
                {"effective_cutoff", rat_to_json(cert.effective_cutoff)},
                {"rank", cert.rank},
                {"unknowns", cert.unknowns},
                {"note", cert.note}};
}

json chain_report_json(const ChainReport& rep) {
    return json{{"ok", rep.ok},
                {"overlap_cap", rat_to_json(rep.overlap_cap)},
                {"psi_theta_zero", rep.psi_theta_zero},
                {"lines", rep.lines}};
}

json pf_to_json(const ProductFieldMatrix& D) {
    std::vector<int> mdeg;
    for (auto& f : D.fields) mdeg.push_back(f->deg / D.E->deg);
    json comp = json::array();
    for (auto& mat : D.comp) {
        json rows = json::array();
        for (auto& row : mat) {
            json r = json::array();
            for (auto& x : row) r.push_back(fe_to_json(x));
            rows.push_back(std::move(r));
        }
        comp.push_back(std::move(rows));
    }
    return json{{"p", D.p},      {"sdeg", D.sdeg}, {"edeg", D.edeg}, {"mdeg", mdeg},
                {"rows", D.rows}, {"cols", D.cols}, {"comp", comp}};
}

ProductFieldMatrix pf_from_json(const json& j) {
    auto D = pf_make(j.at("p").get<int>(), j.at("sdeg").get<int>(), j.at("edeg").get<int>(),
                     j.at("mdeg").get<std::vector<int>>(), j.at("rows").get<int>(),
                     j.at("cols").get<int>());
    auto& comp = j.at("comp");
    for (size_t l = 0; l < D.comp.size(); ++l)
        for (int i = 0; i < D.rows; ++i)
            for (int k = 0; k < D.cols; ++k)
                D.comp[l][(size_t)i][(size_t)k] =
                    fe_from_json(comp[l][(size_t)i][(size_t)k], D.fields[l]);
    return D;
}

json pf_reduction_json(const PfReduction& red) {
    auto mat = [](const std::vector<std::vector<FieldElement>>& m) {
        json rows = json::array();
        for (auto& row : m) {
            json r = json::array();
            for (auto& x : row) r.push_back(fe_to_json(x));
            rows.push_back(std::move(r));
        }
        return rows;
    };
    json A = json::array();
    for (auto& a : red.A) A.push_back(mat(a));
    return json{{"B", mat(red.B)}, {"A", A}, {"normal", pf_to_json(red.normal)}};
}

}  // namespace fde
