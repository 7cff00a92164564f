#include "fde/relations.hpp"

#include <algorithm>
#include <sstream>

namespace fde {

namespace {

const Rat BIG = Rat(1000000000LL);

// ---------------------------------------------------------------------------
// dense F_p linear algebra
// ---------------------------------------------------------------------------

using FpMatrix = std::vector<std::vector<int>>;

int fp_inv(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    for (int x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    throw FieldError("fp_inv: not invertible");
}

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> fp_rref(FpMatrix& m, int p) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t ncol = m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < ncol && row < m.size(); ++col) {
        size_t sel = row;
        while (sel < m.size() && m[sel][col] % p == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        int inv = fp_inv(m[row][col], p);
        for (auto& x : m[row]) x = x * inv % p;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][col] % p == 0) continue;
            int f = m[i][col] % p;
            for (size_t k = 0; k < ncol; ++k) m[i][k] = ((m[i][k] - f * m[row][k]) % p + p) % p;
        }
        pivots.push_back((int)col);
        ++row;
    }
    m.resize(row);
    return pivots;
}

// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<int>> fp_kernel(FpMatrix m, int p, int ncol) {
    auto pivots = fp_rref(m, p);
    std::vector<int> pivot_of_col(ncol, -1);
    for (size_t r = 0; r < pivots.size(); ++r) pivot_of_col[pivots[r]] = (int)r;
    std::vector<std::vector<int>> out;
    for (int f = 0; f < ncol; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        std::vector<int> v(ncol, 0);
        v[f] = 1;
        for (int c = 0; c < ncol; ++c)
            if (pivot_of_col[c] >= 0) v[c] = (p - m[pivot_of_col[c]][f] % p) % p;
        out.push_back(std::move(v));
    }
    return out;
}

// Lexicographically least nonzero vector of the row space: normalize the RREF
// row with the latest leading position.
std::vector<int> fp_lex_least(std::vector<std::vector<int>> basis, int p) {
    fp_rref(basis, p);
    if (basis.empty()) return {};
    return basis.back();
}

// ---------------------------------------------------------------------------
// subfield basis
// ---------------------------------------------------------------------------

// F_p-basis of the subfield F_{q^cdeg} of `spec` as the fixed space of the
// cdeg-fold q-Frobenius.
std::vector<FieldElement> subfield_basis(const FieldSpecPtr& spec, int cdeg) {
    int p = spec->p, deg = spec->deg;
    int want = spec->s * cdeg;
    if (deg % want != 0)
        throw FieldError("kernel_search: coefficient field does not embed in the working field");
    FpMatrix m(deg, std::vector<int>(deg, 0));
    for (int i = 0; i < deg; ++i) {
        std::vector<int> e(deg, 0);
        e[i] = 1;
        auto img = frobenius_power(FieldElement(spec, e), cdeg);
        for (int r = 0; r < deg; ++r)
            m[r][i] = ((img.coeffs()[r] - (r == i ? 1 : 0)) % p + p) % p;
    }
    auto ker = fp_kernel(std::move(m), p, deg);
    if ((int)ker.size() != want) throw FieldError("kernel_search: subfield dimension mismatch");
    std::vector<FieldElement> out;
    for (auto& v : ker) out.emplace_back(spec, v);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// relation search
// ---------------------------------------------------------------------------

RelationCertificate kernel_search(Session& S, const PlacePtr& place,
                                  const std::vector<HahnSeries>& values, long long D,
                                  const Rat& cutoff, int cdeg, long long size_cap) {
    if (values.empty()) throw FieldError("kernel_search: no values");
    int k = (int)values.size();
    std::vector<HahnSeries> vals;
    for (auto& v : values) vals.push_back(hs_lift(v, S.field));

    Rat eff = cutoff;
    for (auto& v : vals) eff = std::min(eff, v.cap);

    auto basis = subfield_basis(S.field, cdeg);
    int bdim = (int)basis.size();
    long long unknowns = (long long)k * (D + 1) * bdim;
    if (unknowns > size_cap) throw FieldError("kernel_search: size cap exceeded");

    // theta = lambda_ref + u, expanded exactly
    FieldElement lam = embed(place->lambda[(size_t)place->ref], S.field);
    HahnSeries theta = hs_mono(fe_one(S.field), Rat(1), BIG);
    if (!lam.is_zero()) theta = hs_add(S, theta, hs_const(lam, BIG));
    std::vector<HahnSeries> thpow{hs_const(fe_one(S.field), BIG)};
    for (long long e = 1; e <= D; ++e) thpow.push_back(hs_mul(S, thpow.back(), theta));

    // One column per unknown F_p digit; columns with no visible support are
    // unconstrained and must not enter the kernel.
    struct Col {
        int j, e, t;
        HahnSeries series;
    };
    std::vector<Col> cols;
    int dropped = 0;
    std::map<Rat, int> rowpos;
    for (int j = 0; j < k; ++j)
        for (long long e = 0; e <= D; ++e)
            for (int t = 0; t < bdim; ++t) {
                auto s = hs_truncate(
                    hs_mul(S, hs_mul(S, thpow[(size_t)e], vals[(size_t)j]), hs_const(basis[(size_t)t], BIG)),
                    eff);
                if (s.is_zero()) {
                    ++dropped;
                    continue;
                }
                for (auto& [ex, co] : s.terms) rowpos.emplace(ex, 0);
                cols.push_back({j, (int)e, t, std::move(s)});
            }

    RelationCertificate cert;
    cert.D = D;
    cert.cutoff = cutoff;
    cert.effective_cutoff = eff;
    cert.unknowns = (int)cols.size();
    if (dropped > 0)
        cert.note = std::to_string(dropped) + " unknown digit(s) without visible support excluded";
    if (cols.empty()) {
        cert.relation = false;
        return cert;
    }

    int nexp = 0;
    for (auto& [ex, pos] : rowpos) pos = nexp++;
    int deg = S.field->deg, p = S.p;
    FpMatrix m((size_t)nexp * deg, std::vector<int>(cols.size(), 0));
    for (size_t c = 0; c < cols.size(); ++c)
        for (auto& [ex, co] : cols[c].series.terms) {
            auto lifted = embed(co, S.field);
            int base = rowpos[ex] * deg;
            for (int r = 0; r < deg; ++r) m[(size_t)(base + r)][c] = lifted.coeffs()[r];
        }

    auto ker = fp_kernel(m, p, (int)cols.size());
    cert.rank = (int)cols.size() - (int)ker.size();
    if (ker.empty()) {
        cert.relation = false;
        return cert;
    }

    auto vec = fp_lex_least(std::move(ker), p);
    cert.coeffs.assign((size_t)k, std::vector<FieldElement>((size_t)(D + 1), fe_zero(S.field)));
    for (size_t c = 0; c < cols.size(); ++c) {
        if (vec[c] == 0) continue;
        cert.coeffs[(size_t)cols[c].j][(size_t)cols[c].e] =
            cert.coeffs[(size_t)cols[c].j][(size_t)cols[c].e] +
            basis[(size_t)cols[c].t] * fe_from_int(S.field, vec[c]);
    }

    // re-verify by substitution
    HahnSeries residual = hs_zero(S.field, BIG);
    for (int j = 0; j < k; ++j) {
        HahnSeries pj = hs_zero(S.field, BIG);
        for (long long e = 0; e <= D; ++e)
            if (!cert.coeffs[(size_t)j][(size_t)e].is_zero())
                pj = hs_add(S, pj, hs_scale(thpow[(size_t)e], cert.coeffs[(size_t)j][(size_t)e]));
        residual = hs_add(S, residual, hs_mul(S, pj, vals[(size_t)j]));
    }
    cert.residual_val = residual.is_zero() ? residual.cap : residual.val();
    if (cert.residual_val < eff)
        throw FieldError("kernel_search: substitution check failed at " +
                         to_string(cert.residual_val));
    if (cert.residual_val < cutoff)
        throw PrecisionError("kernel_search: relation verified only to " +
                             to_string(cert.residual_val) + ", cutoff " + to_string(cutoff) +
                             " exceeds available caps");
    cert.relation = true;
    return cert;
}

// ---------------------------------------------------------------------------
// polylog motive
// ---------------------------------------------------------------------------

PolylogMotive build_polylog_motive(Session& S, const PlacePtr& place, long long n,
                                   const std::vector<RatTheta>& alphas, int Nt, const Rat& stop,
                                   BranchPolicy policy) {
    int r = (int)alphas.size();
    PolylogMotive out;

    auto om = solve_omega(S, place, Nt, stop);
    out.branch_records.push_back(om.branch_record);
    out.omega_n = ve_pow(S, om.omega, n);
    out.omega_minus_n = ve_inv(S, out.omega_n);
    for (auto& a : alphas) {
        auto res = solve_polylog(S, place, a, n, Nt, stop, policy);
        out.branch_records.push_back(res[0].branch_record);
        out.L.push_back(res[0].L);
    }

    auto corner = es_pow(es_t_minus_theta(S.qfield), n);
    EMatrix M = em_identity(S.qfield, r + 1);
    M[0][0] = corner;
    for (int j = 1; j <= r; ++j)
        M[(size_t)j][0] = es_mul(es_from_rt(rt_sigma(alphas[(size_t)j - 1], S.q())), corner);
    auto phi = phi_make(M);
    phi_set_motive(phi, rt_one(S.qfield), n);

    PsiMatrix psi = pm_identity(S, place, r + 1, Nt, BIG);
    psi[0][0] = out.omega_n;
    for (int j = 1; j <= r; ++j) psi[(size_t)j][0] = ve_mul(S, out.omega_n, out.L[(size_t)j - 1]);

    out.pair = make_pair(S, phi, psi);
    return out;
}

// ---------------------------------------------------------------------------
// Galois-polynomial pipeline
// ---------------------------------------------------------------------------

ExactScalar lp_eval(const LinPoly& f, const std::vector<ExactScalar>& x) {
    if (x.size() != f.coef.size()) throw FieldError("lp_eval: arity mismatch");
    ExactScalar out = f.cst;
    for (size_t i = 0; i < x.size(); ++i) out = es_add(out, es_mul(f.coef[i], x[i]));
    return out;
}

std::vector<LinPoly> gamma_polys(const std::vector<std::vector<ExactScalar>>& c,
                                 const std::vector<ExactScalar>& b) {
    if (b.empty()) throw FieldError("gamma_polys: empty b");
    auto spec = b[0].spec;
    auto b0m1 = es_sub(b[0], es_one(spec));
    if (b0m1.is_zero()) throw FieldError("gamma_polys: b_0 = 1");
    size_t r = b.size() - 1;
    std::vector<LinPoly> out;
    for (auto& row : c) {
        if (row.size() != r) throw FieldError("gamma_polys: form arity mismatch");
        ExactScalar fb = es_zero(spec);  // F_i(b_1..b_r)
        for (size_t j = 0; j < r; ++j) fb = es_add(fb, es_mul(row[j], b[j + 1]));
        LinPoly g;
        g.coef.resize(r + 1, es_zero(spec));
        g.coef[0] = es_neg(fb);
        for (size_t j = 0; j < r; ++j) g.coef[j + 1] = es_mul(b0m1, row[j]);
        g.cst = fb;
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<LinPoly> z_polys(const std::vector<LinPoly>& G, const std::vector<ExactScalar>& f) {
    if (f.empty()) throw FieldError("z_polys: empty point");
    if (f[0].is_zero()) throw FieldError("z_polys: f_0 not invertible");
    auto f0inv = es_inv(f[0]);
    std::vector<LinPoly> out;
    for (auto& g : G) {
        auto fprime = es_mul(lp_eval(g, f), f0inv);
        LinPoly h = g;
        h.coef[0] = es_sub(h.coef[0], fprime);
        out.push_back(std::move(h));
    }
    return out;
}

ZPointReport verify_Z_point(Session& S, const std::vector<LinPoly>& H,
                            const VadicElement& omega_n, const std::vector<VadicElement>& L,
                            const Rat& cutoff) {
    ZPointReport rep;
    auto place = omega_n.place;
    int Nt = omega_n.Nt;
    auto oinv = ve_inv(S, omega_n);
    std::vector<VadicElement> point{omega_n};
    for (auto& l : L) point.push_back(ve_mul(S, omega_n, l));
    for (size_t i = 0; i < H.size(); ++i) {
        auto& h = H[i];
        if (h.coef.size() != point.size()) throw FieldError("verify_Z_point: arity mismatch");
        auto acc = expand_exact(S, place, h.cst, Nt, cutoff + Rat(1));
        for (size_t j = 0; j < point.size(); ++j) {
            if (h.coef[j].is_zero()) continue;
            auto cj = expand_exact(S, place, h.coef[j], Nt, cutoff + Rat(1));
            acc = ve_add(S, acc, ve_mul(S, cj, point[j]));
        }
        acc = ve_mul(S, acc, oinv);
        auto v = ve_min_val(acc);
        Rat res = v ? *v : ve_min_cap(acc);
        rep.residuals.push_back(res);
        bool pass = !(res < cutoff);
        if (!pass) rep.ok = false;
        std::ostringstream os;
        os << "H_" << (i + 1) << ": residual valuation " << to_string(res)
           << (pass ? " >= " : " < ") << to_string(cutoff);
        rep.lines.push_back(os.str());
    }
    return rep;
}

DimBoundsReport dim_bounds_report(int r, int s, const RelationCertificate* indep) {
    DimBoundsReport rep;
    rep.r = r;
    rep.s = s;
    rep.upper = r + 2 - s;
    std::ostringstream up;
    up << "upper bound: dim <= r + 2 - s = " << rep.upper << " (" << s
       << " verified relation(s))";
    rep.lines.push_back(up.str());
    if (indep && !indep->relation) {
        rep.lower = r + 1;
        std::ostringstream lo;
        lo << "lower bound: dim >= " << rep.lower
           << " certified, conditional on bounded-degree independence at (D=" << indep->D
           << ", cutoff=" << to_string(indep->effective_cutoff) << ")";
        rep.lines.push_back(lo.str());
    } else {
        rep.lower = 1;
        rep.lines.push_back("lower bound: dim >= 1 (trivial)");
    }
    rep.lines.push_back("bracket: tdeg <= dim <= tdeg + 1; tdeg is not computed from truncations");
    rep.conditional = rep.upper > 1;
    if (rep.conditional)
        rep.lines.push_back("no unconditional transcendence statement is asserted");
    return rep;
}

// ---------------------------------------------------------------------------
// product-of-fields reduction
// ---------------------------------------------------------------------------

namespace {

using FMat = std::vector<std::vector<FieldElement>>;

FMat f_identity(const FieldSpecPtr& spec, int n) {
    FMat out((size_t)n, std::vector<FieldElement>((size_t)n, fe_zero(spec)));
    for (int i = 0; i < n; ++i) out[(size_t)i][(size_t)i] = fe_one(spec);
    return out;
}

FMat f_mul(const FMat& a, const FMat& b) {
    size_t n = a.size(), k = b.size(), m = b[0].size();
    FMat out(n, std::vector<FieldElement>(m, fe_zero(a[0][0].spec())));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (size_t j = 0; j < m; ++j) out[i][j] = out[i][j] + a[i][l] * b[l][j];
        }
    return out;
}

FMat f_inv(FMat a) {
    size_t n = a.size();
    FMat inv = f_identity(a[0][0].spec(), (int)n);
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && a[sel][col].is_zero()) ++sel;
        if (sel == n) throw FieldError("pf: singular matrix");
        std::swap(a[col], a[sel]);
        std::swap(inv[col], inv[sel]);
        auto piv = a[col][col].inv();
        for (size_t j = 0; j < n; ++j) {
            a[col][j] = a[col][j] * piv;
            inv[col][j] = inv[col][j] * piv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col].is_zero()) continue;
            auto f = a[i][col];
            for (size_t j = 0; j < n; ++j) {
                a[i][j] = a[i][j] - f * a[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

FMat f_embed(const FMat& a, const FieldSpecPtr& target) {
    FMat out = a;
    for (auto& row : out)
        for (auto& x : row) x = embed(x, target);
    return out;
}

// Greedy choice of `cols` rows spanning the column space; throws when the
// component is rank-deficient.
std::vector<int> pivot_rows(const std::vector<std::vector<FieldElement>>& m, int cols) {
    std::vector<std::vector<FieldElement>> basis;
    std::vector<int> out;
    for (size_t i = 0; i < m.size() && (int)out.size() < cols; ++i) {
        auto v = m[i];
        for (auto& b : basis) {
            size_t lead = 0;
            while (lead < b.size() && b[lead].is_zero()) ++lead;
            if (lead == b.size() || v[lead].is_zero()) continue;
            auto f = v[lead] * b[lead].inv();
            for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * b[j];
        }
        bool nonzero = false;
        for (auto& x : v) nonzero = nonzero || !x.is_zero();
        if (!nonzero) continue;
        basis.push_back(std::move(v));
        out.push_back((int)i);
    }
    if ((int)out.size() < cols) throw FieldError("pf_reduce: rank-deficient component");
    return out;
}

}  // namespace

ProductFieldMatrix pf_make(int p, int sdeg, int edeg, const std::vector<int>& mdeg, int rows,
                           int cols) {
    ProductFieldMatrix out;
    out.p = p;
    out.sdeg = sdeg;
    out.edeg = edeg;
    out.rows = rows;
    out.cols = cols;
    out.E = make_field(p, sdeg, edeg);
    for (int m : mdeg) {
        auto f = m == 1 ? out.E : extend_field(out.E, m);
        out.fields.push_back(f);
        out.comp.push_back(FMat((size_t)rows, std::vector<FieldElement>((size_t)cols, fe_zero(f))));
    }
    return out;
}

ProductFieldMatrix pf_random(int p, int sdeg, int edeg, const std::vector<int>& mdeg, int rows,
                             int cols, unsigned long long seed) {
    auto out = pf_make(p, sdeg, edeg, mdeg, rows, cols);
    unsigned long long x = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto next = [&]() {
        x = x * 6364136223846793005ULL + 1442695040888963407ULL;
        return x >> 17;
    };
    for (size_t l = 0; l < out.fields.size(); ++l) {
        auto size = (unsigned long long)field_size(out.fields[l]);
        while (true) {
            for (auto& row : out.comp[l])
                for (auto& e : row) e = element_at(out.fields[l], next() % size);
            try {
                pivot_rows(out.comp[l], cols);
                break;
            } catch (const FieldError&) {
            }
        }
    }
    return out;
}

ProductFieldMatrix pf_apply(const ProductFieldMatrix& D,
                            const std::vector<std::vector<FieldElement>>& B,
                            const std::vector<std::vector<std::vector<FieldElement>>>& A) {
    ProductFieldMatrix out = D;
    for (size_t l = 0; l < D.comp.size(); ++l)
        out.comp[l] = f_mul(f_mul(f_embed(B, D.fields[l]), D.comp[l]), A[l]);
    return out;
}

PfReduction pf_reduce(const ProductFieldMatrix& D, unsigned long long seed) {
    int dprime = (int)D.comp.size();
    int s = D.rows, m = D.cols;
    auto esize = (unsigned long long)field_size(D.E);
    if (esize <= (unsigned long long)dprime)
        throw FieldError("pf_reduce: coefficient field not larger than the component count");

    PfReduction out;
    out.B = f_identity(D.E, s);
    out.normal = D;
    auto& P = out.normal.comp;

    // per-component column reduction to elementary-pattern form
    std::vector<std::vector<int>> pat(dprime);   // column -> row carrying e_j
    std::vector<std::vector<int>> rowcol(dprime, std::vector<int>((size_t)s, -1));
    for (int l = 0; l < dprime; ++l) {
        auto piv = pivot_rows(P[(size_t)l], m);
        FMat M((size_t)m, std::vector<FieldElement>((size_t)m, fe_zero(D.fields[(size_t)l])));
        for (int jj = 0; jj < m; ++jj) M[(size_t)jj] = P[(size_t)l][(size_t)piv[(size_t)jj]];
        out.A.push_back(f_inv(std::move(M)));
        P[(size_t)l] = f_mul(P[(size_t)l], out.A.back());
        pat[(size_t)l] = piv;
        for (int jj = 0; jj < m; ++jj) rowcol[(size_t)l][(size_t)piv[(size_t)jj]] = jj;
    }

    // Renormalizes row `i` of component l back to e_j after a row operation,
    // leaving every other pattern row untouched (they vanish in column j).
    auto renorm = [&](int l, int i, int j) {
        auto piv = P[(size_t)l][(size_t)i][(size_t)j];
        if (piv.is_zero()) throw FieldError("pf_reduce: lost pattern pivot");
        auto pinv = piv.inv();
        for (int row = 0; row < s; ++row)
            P[(size_t)l][(size_t)row][(size_t)j] = P[(size_t)l][(size_t)row][(size_t)j] * pinv;
        for (int col = 0; col < m; ++col)
            out.A[(size_t)l][(size_t)col][(size_t)j] = out.A[(size_t)l][(size_t)col][(size_t)j] * pinv;
        for (int kcol = 0; kcol < m; ++kcol) {
            if (kcol == j) continue;
            auto f = P[(size_t)l][(size_t)i][(size_t)kcol];
            if (f.is_zero()) continue;
            for (int row = 0; row < s; ++row)
                P[(size_t)l][(size_t)row][(size_t)kcol] =
                    P[(size_t)l][(size_t)row][(size_t)kcol] - f * P[(size_t)l][(size_t)row][(size_t)j];
            for (int col = 0; col < m; ++col)
                out.A[(size_t)l][(size_t)col][(size_t)kcol] =
                    out.A[(size_t)l][(size_t)col][(size_t)kcol] -
                    f * out.A[(size_t)l][(size_t)col][(size_t)j];
        }
    };

    // shared E-row operation R_dst += c R_src, tracked in B
    auto rowop = [&](int dst, int src, const FieldElement& c) {
        for (int l = 0; l < dprime; ++l) {
            auto ce = embed(c, D.fields[(size_t)l]);
            for (int col = 0; col < m; ++col)
                P[(size_t)l][(size_t)dst][(size_t)col] =
                    P[(size_t)l][(size_t)dst][(size_t)col] +
                    ce * P[(size_t)l][(size_t)src][(size_t)col];
        }
        for (int col = 0; col < s; ++col)
            out.B[(size_t)dst][(size_t)col] = out.B[(size_t)dst][(size_t)col] + c * out.B[(size_t)src][(size_t)col];
    };

    // scan for the row-operation constant in canonical order from the seed
    auto pick_c = [&](const std::function<bool(const FieldElement&)>& ok) {
        for (unsigned long long k = 0; k < esize - 1; ++k) {
            auto c = element_at(D.E, 1 + (k + seed) % (esize - 1));
            if (ok(c)) return c;
        }
        throw FieldError("pf_reduce: no admissible row-operation constant");
    };

    for (int l0 = 0; l0 < dprime; ++l0)
        for (int jp = 0; jp < m; ++jp) {
            int ip = pat[(size_t)l0][(size_t)jp];
            if (ip == jp) continue;
            int rt = jp;  // target row
            int jpp = rowcol[(size_t)l0][(size_t)rt];
            if (jpp >= 0) {
                // swap the pattern roles of rows ip and rt inside l0
                auto c = pick_c([&](const FieldElement& c) {
                    for (int l = 0; l < dprime; ++l) {
                        if (l == l0) continue;
                        int j = rowcol[(size_t)l][(size_t)ip];
                        if (j < 0) continue;
                        auto x = P[(size_t)l][(size_t)rt][(size_t)j];
                        if ((fe_one(D.fields[(size_t)l]) + embed(c, D.fields[(size_t)l]) * x)
                                .is_zero())
                            return false;
                    }
                    return true;
                });
                rowop(ip, rt, c);
                for (int l = 0; l < dprime; ++l) {
                    if (l == l0) continue;
                    int j = rowcol[(size_t)l][(size_t)ip];
                    if (j >= 0) renorm(l, ip, j);
                }
                // column transposition-with-shear in l0: rows ip and rt trade
                // their unit vectors
                auto ce = embed(c, D.fields[(size_t)l0]);
                for (int row = 0; row < s; ++row) {
                    auto oj = P[(size_t)l0][(size_t)row][(size_t)jp];
                    auto ojj = P[(size_t)l0][(size_t)row][(size_t)jpp];
                    P[(size_t)l0][(size_t)row][(size_t)jp] = ojj - ce * oj;
                    P[(size_t)l0][(size_t)row][(size_t)jpp] = oj;
                }
                for (int col = 0; col < m; ++col) {
                    auto oj = out.A[(size_t)l0][(size_t)col][(size_t)jp];
                    auto ojj = out.A[(size_t)l0][(size_t)col][(size_t)jpp];
                    out.A[(size_t)l0][(size_t)col][(size_t)jp] = ojj - ce * oj;
                    out.A[(size_t)l0][(size_t)col][(size_t)jpp] = oj;
                }
                pat[(size_t)l0][(size_t)jp] = rt;
                pat[(size_t)l0][(size_t)jpp] = ip;
                rowcol[(size_t)l0][(size_t)rt] = jp;
                rowcol[(size_t)l0][(size_t)ip] = jpp;
            } else {
                // bring the non-pattern row rt into the pattern at column jp
                auto c = pick_c([&](const FieldElement& c) {
                    auto v = P[(size_t)l0][(size_t)rt][(size_t)jp] +
                             embed(c, D.fields[(size_t)l0]);
                    if (v.is_zero()) return false;
                    for (int l = 0; l < dprime; ++l) {
                        if (l == l0) continue;
                        int j = rowcol[(size_t)l][(size_t)rt];
                        if (j < 0) continue;
                        auto x = P[(size_t)l][(size_t)ip][(size_t)j];
                        if ((fe_one(D.fields[(size_t)l]) + embed(c, D.fields[(size_t)l]) * x)
                                .is_zero())
                            return false;
                    }
                    return true;
                });
                rowop(rt, ip, c);
                for (int l = 0; l < dprime; ++l) {
                    if (l == l0) continue;
                    int j = rowcol[(size_t)l][(size_t)rt];
                    if (j >= 0) renorm(l, rt, j);
                }
                renorm(l0, rt, jp);
                pat[(size_t)l0][(size_t)jp] = rt;
                rowcol[(size_t)l0][(size_t)rt] = jp;
                rowcol[(size_t)l0][(size_t)ip] = -1;
            }
        }

    for (int l = 0; l < dprime; ++l)
        for (int j = 0; j < m; ++j)
            for (int jj = 0; jj < m; ++jj)
                if (P[(size_t)l][(size_t)j][(size_t)jj] !=
                    (j == jj ? fe_one(D.fields[(size_t)l]) : fe_zero(D.fields[(size_t)l])))
                    throw FieldError("pf_reduce: normal form postcondition failed");
    return out;
}

}  // namespace fde
