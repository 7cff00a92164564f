#include "fde/phi.hpp"

#include <sstream>

namespace fde {

namespace {
const Rat BIG = Rat(1000000000LL);

void check_square(const PsiMatrix& a) {
    for (auto& row : a)
        if (row.size() != a.size()) throw FieldError("psi matrix is not square");
}

PsiMatrix pm_sub(const Session& S, const PsiMatrix& a, const PsiMatrix& b) {
    PsiMatrix out = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) out[i][j] = ve_sub(S, a[i][j], b[i][j]);
    return out;
}
}  // namespace

PhiMatrix phi_make(const EMatrix& m) {
    PhiMatrix phi;
    phi.r = (int)m.size();
    for (auto& row : m)
        if ((int)row.size() != phi.r) throw FieldError("phi matrix is not square");
    phi.m = m;
    if (em_det(m).is_zero()) throw FieldError("phi matrix is singular");
    return phi;
}

void phi_set_motive(PhiMatrix& phi, const RatTheta& c, long long s) {
    auto want = es_mul(es_from_rt(c), es_pow(es_t_minus_theta(c.spec), s));
    if (!es_equal(em_det(phi.m), want))
        throw FieldError("determinant is not c (t-theta)^s for the given (c, s)");
    phi.motive = true;
    phi.c = c;
    phi.s = s;
}

PsiMatrix pm_from_element(const VadicElement& x) { return {{x}}; }

PsiMatrix pm_identity(const Session& S, const PlacePtr& place, int r, int Nt, const Rat& cap) {
    PsiMatrix out((size_t)r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            out[(size_t)i].push_back(i == j ? ve_one(S, place, Nt, cap)
                                            : ve_zero(place, Nt, S.field, cap));
    return out;
}

PsiMatrix pm_mul(const Session& S, const PsiMatrix& a, const PsiMatrix& b) {
    check_square(a);
    check_square(b);
    if (a.size() != b.size()) throw FieldError("psi matrix shape mismatch");
    size_t r = a.size();
    PsiMatrix out(r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
            VadicElement acc = ve_mul(S, a[i][0], b[0][j]);
            for (size_t k = 1; k < r; ++k) acc = ve_add(S, acc, ve_mul(S, a[i][k], b[k][j]));
            out[i].push_back(acc);
        }
    return out;
}

PsiMatrix pm_sigma(const Session& S, const PsiMatrix& a) {
    PsiMatrix out = a;
    for (auto& row : out)
        for (auto& x : row) x = ve_sigma(S, x);
    return out;
}

VadicElement pm_det(const Session& S, const PsiMatrix& a) {
    check_square(a);
    size_t r = a.size();
    if (r == 1) return a[0][0];
    // Laplace along the first row; ranks stay desk-scale
    std::optional<VadicElement> acc;
    for (size_t j = 0; j < r; ++j) {
        PsiMatrix minor(r - 1);
        for (size_t i = 1; i < r; ++i)
            for (size_t k = 0; k < r; ++k)
                if (k != j) minor[i - 1].push_back(a[i][k]);
        VadicElement term = ve_mul(S, a[0][j], pm_det(S, minor));
        if (j % 2) term = ve_neg(term);
        acc = acc ? ve_add(S, *acc, term) : term;
    }
    return *acc;
}

PsiMatrix pm_inv(const Session& S, const PsiMatrix& a) {
    check_square(a);
    size_t r = a.size();
    PsiMatrix w = a;
    int Nt = a[0][0].Nt;
    for (auto& row : a)
        for (auto& x : row) Nt = std::min(Nt, x.Nt);
    PsiMatrix inv = pm_identity(S, a[0][0].place, (int)r, Nt, ve_min_cap(a[0][0]));
    for (size_t col = 0; col < r; ++col) {
        size_t piv = r;
        for (size_t i = col; i < r && piv == r; ++i)
            if (ve_min_val(w[i][col])) piv = i;
        if (piv == r) throw PrecisionError("pm_inv: no visible pivot in column");
        std::swap(w[piv], w[col]);
        std::swap(inv[piv], inv[col]);
        VadicElement pinv = ve_inv(S, w[col][col]);
        for (size_t j = 0; j < r; ++j) {
            w[col][j] = ve_mul(S, pinv, w[col][j]);
            inv[col][j] = ve_mul(S, pinv, inv[col][j]);
        }
        for (size_t i = 0; i < r; ++i) {
            if (i == col || ve_is_zero(w[i][col])) continue;
            VadicElement f = w[i][col];
            for (size_t j = 0; j < r; ++j) {
                w[i][j] = ve_sub(S, w[i][j], ve_mul(S, f, w[col][j]));
                inv[i][j] = ve_sub(S, inv[i][j], ve_mul(S, f, inv[col][j]));
            }
        }
    }
    return inv;
}

PsiMatrix expand_phi(const Session& S, const PlacePtr& place, const PhiMatrix& phi, int Nt,
                     const Rat& cap) {
    PsiMatrix out((size_t)phi.r);
    for (int i = 0; i < phi.r; ++i)
        for (int j = 0; j < phi.r; ++j)
            out[(size_t)i].push_back(expand_exact(S, place, phi.m[(size_t)i][(size_t)j], Nt, cap));
    return out;
}

VerifyReport verify_fundamental(const Session& S, const PhiMatrix& phi, const PsiMatrix& psi,
                                const Rat& cutoff) {
    check_square(psi);
    if ((int)psi.size() != phi.r) throw FieldError("verify: shape mismatch");
    VerifyReport rep;

    auto det = pm_det(S, psi);
    auto dval = ve_min_val(det);
    if (!dval) {
        rep.ok = false;
        rep.worst = "det psi has no visible leading term";
        return rep;
    }

    int Nt = psi[0][0].Nt;
    Rat cap = BIG;
    std::optional<Rat> vmin;
    for (auto& row : psi)
        for (auto& x : row) {
            Nt = std::min(Nt, x.Nt);
            cap = std::min(cap, ve_min_cap(x));
            auto v = ve_min_val(x);
            if (v && (!vmin || *v < *vmin)) vmin = *v;
        }
    // expand phi a little past the psi caps so the exact factor never becomes
    // the binding constraint on the residual precision
    Rat phicap = cap + Rat(2);
    if (vmin && *vmin < Rat(0)) phicap -= *vmin;
    auto phix = expand_phi(S, psi[0][0].place, phi, Nt, phicap);
    auto res = pm_sub(S, pm_sigma(S, psi), pm_mul(S, phix, psi));

    rep.ok = true;
    rep.verified_cap = std::min(BIG, cutoff);
    for (size_t i = 0; i < res.size(); ++i)
        for (size_t j = 0; j < res.size(); ++j) {
            rep.verified_cap = std::min(rep.verified_cap, ve_min_cap(res[i][j]));
            std::optional<Rat> v;
            for (auto& m : res[i][j].comp)
                for (auto& [k, h] : m)
                    for (auto& [e, co] : h.terms)
                        if (e < cutoff && !co.is_zero()) v = v ? std::min(*v, e) : e;
            if (!v) continue;
            rep.ok = false;
            if (!rep.min_residual || *v < *rep.min_residual) {
                rep.min_residual = *v;
                std::ostringstream os;
                os << "entry (" << i << "," << j << ") residual valuation " << to_string(*v);
                rep.worst = os.str();
            }
        }
    return rep;
}

FundamentalPair make_pair(const Session& S, const PhiMatrix& phi, const PsiMatrix& psi,
                          const Rat& cutoff) {
    auto rep = verify_fundamental(S, phi, psi, cutoff);
    if (!rep.ok) throw FieldError("not a fundamental matrix: " + rep.worst);
    FundamentalPair out;
    out.phi = phi;
    out.psi = psi;
    out.verified_cap = rep.verified_cap;
    out.det_witness = "det psi leading valuation " + to_string(*ve_min_val(pm_det(S, psi)));
    return out;
}

FundamentalPair direct_sum(const Session& S, const FundamentalPair& a, const FundamentalPair& b) {
    int r = a.phi.r + b.phi.r;
    auto F = a.phi.m[0][0].spec;
    EMatrix m((size_t)r, std::vector<ExactScalar>((size_t)r, es_zero(F)));
    for (int i = 0; i < a.phi.r; ++i)
        for (int j = 0; j < a.phi.r; ++j) m[(size_t)i][(size_t)j] = a.phi.m[(size_t)i][(size_t)j];
    for (int i = 0; i < b.phi.r; ++i)
        for (int j = 0; j < b.phi.r; ++j)
            m[(size_t)(a.phi.r + i)][(size_t)(a.phi.r + j)] = b.phi.m[(size_t)i][(size_t)j];

    int Nt = std::min(a.psi[0][0].Nt, b.psi[0][0].Nt);
    Rat cap = std::min(ve_min_cap(a.psi[0][0]), ve_min_cap(b.psi[0][0]));
    auto place = a.psi[0][0].place;
    PsiMatrix psi = pm_identity(S, place, r, Nt, cap);
    for (int i = 0; i < a.phi.r; ++i)
        for (int j = 0; j < a.phi.r; ++j) psi[(size_t)i][(size_t)j] = a.psi[(size_t)i][(size_t)j];
    for (int i = 0; i < b.phi.r; ++i)
        for (int j = 0; j < b.phi.r; ++j)
            psi[(size_t)(a.phi.r + i)][(size_t)(a.phi.r + j)] = b.psi[(size_t)i][(size_t)j];

    FundamentalPair out;
    out.phi = phi_make(m);
    out.psi = psi;
    out.verified_cap = std::min(a.verified_cap, b.verified_cap);
    out.det_witness = a.det_witness + "; " + b.det_witness;
    return out;
}

FundamentalPair kronecker(const Session& S, const FundamentalPair& a, const FundamentalPair& b,
                          const Rat& cutoff) {
    int ra = a.phi.r, rb = b.phi.r, r = ra * rb;
    EMatrix m((size_t)r);
    PsiMatrix psi((size_t)r);
    for (int ia = 0; ia < ra; ++ia)
        for (int ib = 0; ib < rb; ++ib)
            for (int ja = 0; ja < ra; ++ja)
                for (int jb = 0; jb < rb; ++jb) {
                    size_t row = (size_t)(ia * rb + ib);
                    m[row].push_back(
                        es_mul(a.phi.m[(size_t)ia][(size_t)ja], b.phi.m[(size_t)ib][(size_t)jb]));
                    psi[row].push_back(
                        ve_mul(S, a.psi[(size_t)ia][(size_t)ja], b.psi[(size_t)ib][(size_t)jb]));
                }
    return make_pair(S, phi_make(m), psi, cutoff);
}

FundamentalPair dual(const Session& S, const FundamentalPair& a, const Rat& cutoff) {
    auto phim = em_inv(a.phi.m);
    EMatrix phit((size_t)a.phi.r);
    PsiMatrix psit((size_t)a.phi.r);
    auto psii = pm_inv(S, a.psi);
    for (int i = 0; i < a.phi.r; ++i)
        for (int j = 0; j < a.phi.r; ++j) {
            phit[(size_t)i].push_back(phim[(size_t)j][(size_t)i]);
            psit[(size_t)i].push_back(psii[(size_t)j][(size_t)i]);
        }
    return make_pair(S, phi_make(phit), psit, cutoff);
}

FundamentalPair base_change(const Session& S, const FundamentalPair& a, const EMatrix& M,
                            const Rat& cutoff) {
    auto phi2 = em_mul(em_mul(em_sigma(M, S.q()), a.phi.m), em_inv(M));
    int Nt = a.psi[0][0].Nt;
    Rat cap = BIG;
    for (auto& row : a.psi)
        for (auto& x : row) {
            Nt = std::min(Nt, x.Nt);
            cap = std::min(cap, ve_min_cap(x));
        }
    PhiMatrix pm;
    pm.r = a.phi.r;
    pm.m = M;
    auto Mx = expand_phi(S, a.psi[0][0].place, pm, Nt, cap);
    return make_pair(S, phi_make(phi2), pm_mul(S, Mx, a.psi), cutoff);
}

AmbiguityResult ambiguity(const Session& S, const FundamentalPair& a, const PsiMatrix& psi2) {
    auto rep = verify_fundamental(S, a.phi, psi2);
    if (!rep.ok) throw FieldError("ambiguity: second matrix is not fundamental: " + rep.worst);
    AmbiguityResult out;
    out.delta = pm_mul(S, pm_inv(S, a.psi), psi2);
    out.fixed = true;
    for (size_t i = 0; i < out.delta.size(); ++i)
        for (size_t j = 0; j < out.delta.size(); ++j) {
            auto v = is_sigma_fixed(S, out.delta[i][j]);
            if (!v.fixed) {
                out.fixed = false;
                std::ostringstream os;
                os << "entry (" << i << "," << j << "): " << v.witness;
                out.witness = os.str();
                return out;
            }
        }
    return out;
}

FundamentalPair gamma_act(const Session& S, const FundamentalPair& a, const PsiMatrix& gamma) {
    for (auto& row : gamma)
        for (auto& x : row) {
            auto v = is_sigma_fixed(S, x);
            if (!v.fixed) throw FieldError("gamma_act: matrix is not sigma-fixed: " + v.witness);
        }
    pm_inv(S, gamma);  // invertibility at precision
    FundamentalPair out = a;
    out.psi = pm_mul(S, a.psi, gamma);
    auto rep = verify_fundamental(S, out.phi, out.psi);
    if (!rep.ok) throw FieldError("gamma_act: verification failed: " + rep.worst);
    out.verified_cap = rep.verified_cap;
    return out;
}

}  // namespace fde
