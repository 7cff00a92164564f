#include "fde/solvers.hpp"

#include <sstream>

namespace fde {

namespace {
const Rat BIG = Rat(1000000000LL);

// lambda_l - theta as a series in u at the reference root
HahnSeries lam_minus_theta(const Session& S, const PlacePtr& place, int l) {
    FieldElement diff = embed(place->lambda[(size_t)l], S.field) -
                        embed(place->lambda[(size_t)place->ref], S.field);
    HahnSeries h = hs_mono(fe_zero(S.field) - fe_one(S.field), Rat(1), BIG);
    if (!diff.is_zero()) h = hs_add(S, h, hs_mono(diff, Rat(0), BIG));
    return h;
}

FieldElement eval_qpoly(const Session& S, const ThetaPoly& f, const FieldElement& x) {
    FieldElement acc = fe_zero(S.field);
    for (size_t k = f.size(); k-- > 0;) acc = acc * x + embed(f[k], S.field);
    return acc;
}

std::string join_record(long long i, const ASBranch& br) {
    std::ostringstream os;
    os << "i=" << i;
    for (auto& r : br.record) os << " " << r;
    return os.str();
}

// Composes the component recurrence a_l = c_l a_{l-1}^q + b_l once around the
// cycle starting and ending at the reference component.  Step r (1-based)
// touches component r mod d.
struct Cycle {
    std::vector<HahnSeries> c;    // per component
    std::vector<HahnSeries> suf;  // suf[r] = prod_{s=r+1}^{d} c_{s mod d}^{q^{d-s}}
    HahnSeries gamma;             // suf[0] = full product
};

Cycle make_cycle(const Session& S, const std::vector<HahnSeries>& c) {
    int d = (int)c.size();
    Cycle cy;
    cy.c = c;
    cy.suf.assign((size_t)d + 1, hs_const(fe_one(S.field), BIG));
    for (int r = d - 1; r >= 0; --r)
        cy.suf[(size_t)r] =
            hs_mul(S, cy.suf[(size_t)r + 1], hs_qpow(S, c[(size_t)((r + 1) % d)], d - (r + 1)));
    cy.gamma = cy.suf[0];
    return cy;
}

HahnSeries cycle_beta(const Session& S, const Cycle& cy, const std::vector<HahnSeries>& b) {
    int d = (int)cy.c.size();
    HahnSeries beta = hs_zero(S.field, BIG);
    for (int r = 1; r <= d; ++r)
        beta = hs_add(S, beta,
                      hs_mul(S, hs_qpow(S, b[(size_t)(r % d)], d - r), cy.suf[(size_t)r]));
    return beta;
}
}  // namespace

long long binom_mod_p(long long n, long long k, long long p) {
    if (k < 0 || k > n) return 0;
    long long out = 1;
    while (n > 0 || k > 0) {
        long long nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        // digits are < p, so the digit binomial fits in an integer
        long long c = 1;
        for (long long j = 1; j <= kd; ++j) c = c * (nd - kd + j) / j;
        out = out * (c % p) % p;
        n /= p;
        k /= p;
    }
    return out;
}

Rat omega_val_formula(long long q, int d, long long m, long long i) {
    long long qm = 1;
    for (long long k = 0; k < m; ++k) qm *= q;
    long long qid = 1;
    for (long long k = 0; k < i * d; ++k) {
        // saturate early enough that callers can still add O(i) offsets without
        // overflowing the rational; 0 is a valid lower bound for the tail
        if (qid > (1LL << 40)) return Rat(0);
        qid *= q;
    }
    long long qd = 1;
    for (int k = 0; k < d; ++k) qd *= q;
    return Rat(qm) / (Rat(qid) * Rat(qd - 1));
}

Rat polylog_val_bound(long long q, int d, long long n, long long m, long long i) {
    long long qm = 1;
    for (long long k = 0; k < m; ++k) qm *= q;
    long long qd = 1;
    for (int k = 0; k < d; ++k) qd *= q;
    return -Rat(qm) * (Rat(i) / Rat(qd) + Rat(n) / Rat(qd - 1));
}

ValuationReport valuation_report(const std::vector<ValuationRow>& rows) {
    ValuationReport rep;
    rep.rows = rows;
    for (auto& r : rows)
        if (!r.pass) {
            rep.ok = false;
            std::ostringstream os;
            os << "m=" << r.m << " i=" << r.i << " val=" << to_string(r.val)
               << (r.equality ? " != " : " < ") << to_string(r.formula);
            rep.first_fail = os.str();
            return rep;
        }
    return rep;
}

OmegaResult solve_omega(Session& S, const PlacePtr& place, int Nt, const Rat& stop) {
    int d = place->d;
    long long q = S.q(), qd = 1;
    for (int k = 0; k < d; ++k) qd *= q;
    // off-reference multipliers are genuine unit series: bound the expansion
    Rat W = Rat(qd) * (stop + Rat(2));
    std::vector<HahnSeries> lmt((size_t)d), c((size_t)d);
    for (int l = 0; l < d; ++l) {
        lmt[(size_t)l] = lam_minus_theta(S, place, l);
        c[(size_t)l] = hs_inv(S, hs_truncate(lmt[(size_t)l], W));
    }
    Cycle cy = make_cycle(S, c);
    OmegaResult out;

    // index 0: the cycle closes to X = gamma X^{q^d}, i.e. X^{q^d - 1} is the
    // product of the (lambda_l - theta) with q-power weights
    HahnSeries ginv = hs_const(fe_one(S.field), BIG);
    for (int s = 1; s <= d; ++s)
        ginv = hs_mul(S, ginv, hs_qpow(S, lmt[(size_t)(s % d)], d - s));
    long long m = qd - 1;
    std::vector<std::vector<HahnSeries>> a((size_t)d);
    for (auto& col : a) col.reserve((size_t)Nt);
    a[0].push_back(solve_radical(S, hs_truncate(ginv, stop), m));
    out.branch_record.push_back("i=0 radical exponent " + std::to_string(m));
    for (int l = 1; l < d; ++l)
        a[(size_t)l].push_back(hs_mul(S, c[(size_t)l], hs_qpow(S, a[(size_t)l - 1][0], 1)));

    for (long long i = 1; i < Nt; ++i) {
        std::vector<HahnSeries> b((size_t)d);
        for (int l = 0; l < d; ++l)
            b[(size_t)l] = hs_neg(hs_mul(S, c[(size_t)l], a[(size_t)l][(size_t)(i - 1)]));
        HahnSeries beta = cycle_beta(S, cy, b);
        auto branches = solve_artin_schreier(S, cy.gamma, d, beta, BranchPolicy::MaxVal, stop);
        a[0].push_back(branches.front().root);
        out.branch_record.push_back(join_record(i, branches.front()));
        for (int l = 1; l < d; ++l)
            a[(size_t)l].push_back(hs_add(
                S, hs_mul(S, c[(size_t)l], hs_qpow(S, a[(size_t)l - 1][(size_t)i], 1)),
                b[(size_t)l]));
    }

    out.omega.place = place;
    out.omega.Nt = Nt;
    out.omega.comp.resize((size_t)d);
    for (int l = 0; l < d; ++l)
        for (long long i = 0; i < Nt; ++i) out.omega.comp[(size_t)l][i] = a[(size_t)l][(size_t)i];
    ve_normalize(S, out.omega);

    for (int l = 0; l < d; ++l)
        for (long long i = 0; i < Nt; ++i) {
            ValuationRow row;
            row.m = l;
            row.i = i;
            row.equality = true;
            const HahnSeries& h = a[(size_t)l][(size_t)i];
            row.formula = omega_val_formula(q, d, l, i);
            row.vanished = h.is_zero();
            row.val = h.is_zero() ? h.cap : h.val();
            row.pass = !row.vanished && row.val == row.formula;
            out.table.push_back(row);
        }
    return out;
}

std::vector<PolylogResult> solve_polylog(Session& S, const PlacePtr& place, const RatTheta& alpha,
                                         long long n, int Nt, const Rat& stop,
                                         BranchPolicy policy) {
    int d = place->d;
    long long q = S.q();
    if (n < 1) throw FieldError("solve_polylog: n must be >= 1");
    for (int l = 0; l < d; ++l)
        if (eval_qpoly(S, alpha.den, embed(place->lambda[(size_t)l], S.field)).is_zero())
            throw FieldError("solve_polylog: alpha has a pole at a root of v");

    if (alpha.is_zero()) {
        PolylogResult r;
        r.L = ve_zero(place, Nt, S.field, stop);
        r.alpha = alpha;
        r.n = n;
        r.branch_record.push_back("zero forcing: kernel branch 0");
        return {r};
    }

    HahnSeries A = rt_expand(S, rt_sigma(alpha, q), embed(place->lambda[(size_t)place->ref], S.field),
                             stop + Rat(n) + Rat(2));
    // powers (lambda_l - theta)^k for k = 0..n
    std::vector<std::vector<HahnSeries>> lp((size_t)d);
    for (int l = 0; l < d; ++l) {
        HahnSeries base = lam_minus_theta(S, place, l);
        lp[(size_t)l].push_back(hs_const(fe_one(S.field), BIG));
        for (long long k = 1; k <= n; ++k)
            lp[(size_t)l].push_back(hs_mul(S, lp[(size_t)l].back(), base));
    }
    std::vector<HahnSeries> c((size_t)d);
    for (int l = 0; l < d; ++l) c[(size_t)l] = lp[(size_t)l][(size_t)n];
    Cycle cy = make_cycle(S, c);

    auto make_b = [&](const std::vector<std::vector<HahnSeries>>& a, long long i) {
        std::vector<HahnSeries> b((size_t)d);
        for (int l = 0; l < d; ++l) {
            HahnSeries acc = hs_zero(S.field, BIG);
            for (long long j = 1; j <= std::min<long long>(n, i); ++j) {
                long long bc = binom_mod_p(n, j, S.p);
                if (bc == 0) continue;
                const HahnSeries& prev = a[(size_t)((l - 1 + d) % d)][(size_t)(i - j)];
                HahnSeries term =
                    hs_mul(S, lp[(size_t)l][(size_t)(n - j)], hs_qpow(S, prev, 1));
                acc = hs_add(S, acc, hs_scale(term, fe_from_int(S.field, bc)));
            }
            long long bi = i <= n ? binom_mod_p(n, i, S.p) : 0;
            if (bi != 0) {
                HahnSeries term = hs_mul(S, lp[(size_t)l][(size_t)(n - i)], A);
                acc = hs_sub(S, acc, hs_scale(term, fe_from_int(S.field, bi)));
            }
            b[(size_t)l] = acc;
        }
        return b;
    };

    // index 0: full additive equation; branching happens here only
    std::vector<std::vector<HahnSeries>> empty((size_t)d);
    auto b0 = make_b(empty, 0);
    HahnSeries beta0 = cycle_beta(S, cy, b0);
    auto first = solve_artin_schreier(S, cy.gamma, d, beta0, policy, stop);

    std::vector<PolylogResult> results;
    for (size_t bi = 0; bi < first.size(); ++bi) {
        std::vector<std::vector<HahnSeries>> a((size_t)d);
        a[0].push_back(first[bi].root);
        PolylogResult res;
        res.alpha = alpha;
        res.n = n;
        res.branch_record.push_back("branch " + std::to_string(bi) + ": " +
                                    join_record(0, first[bi]));
        for (int l = 1; l < d; ++l)
            a[(size_t)l].push_back(
                hs_add(S, hs_mul(S, c[(size_t)l], hs_qpow(S, a[(size_t)l - 1][0], 1)),
                       b0[(size_t)l]));
        for (long long i = 1; i < Nt; ++i) {
            auto b = make_b(a, i);
            HahnSeries beta = cycle_beta(S, cy, b);
            auto branches = solve_artin_schreier(S, cy.gamma, d, beta, BranchPolicy::MaxVal, stop);
            a[0].push_back(branches.front().root);
            res.branch_record.push_back(join_record(i, branches.front()));
            for (int l = 1; l < d; ++l)
                a[(size_t)l].push_back(
                    hs_add(S, hs_mul(S, c[(size_t)l], hs_qpow(S, a[(size_t)l - 1][(size_t)i], 1)),
                           b[(size_t)l]));
        }

        res.L.place = place;
        res.L.Nt = Nt;
        res.L.comp.resize((size_t)d);
        for (int l = 0; l < d; ++l)
            for (long long i = 0; i < Nt; ++i) res.L.comp[(size_t)l][i] = a[(size_t)l][(size_t)i];
        ve_normalize(S, res.L);

        for (int l = 0; l < d; ++l)
            for (long long i = 0; i < Nt; ++i) {
                ValuationRow row;
                row.m = l;
                row.i = i;
                row.equality = false;
                const HahnSeries& h = a[(size_t)l][(size_t)i];
                row.formula = polylog_val_bound(q, d, n, l, i);
                row.vanished = h.is_zero();
                row.val = h.is_zero() ? h.cap : h.val();
                row.pass = row.vanished || row.val >= row.formula;
                res.table.push_back(row);
            }
        results.push_back(std::move(res));
    }
    return results;
}

ChainReport abp_chain_check(const Session& S, const VadicElement& psi, const RatTheta& c,
                            long long s_exp, long long nu_max,
                            const std::function<Rat(long long)>& tail) {
    ChainReport rep;
    int d = psi.place->d;
    long long q = S.q();
    FieldElement lam = embed(psi.place->lambda[(size_t)psi.place->ref], S.field);
    rep.overlap_cap = BIG;

    auto qpow_ll = [&](long long e) {
        long long out = 1;
        for (long long k = 0; k < e; ++k) out *= q;
        return out;
    };

    for (long long nu = 0; nu <= nu_max; ++nu) {
        auto e0 = eval_theta_power(S, psi, nu, tail);
        auto e1 = eval_theta_power(S, psi, nu + 1, tail);
        if (e0.diverged || e1.diverged) {
            rep.ok = false;
            rep.lines.push_back("nu=" + std::to_string(nu) + ": evaluation diverged (" +
                                (e0.diverged ? e0.note : e1.note) + ")");
            continue;
        }
        if (nu == 0 && e0.value.is_zero()) rep.psi_theta_zero = true;

        HahnSeries lhs = hs_qpow(S, e0.value, d);

        HahnSeries cexp = rt_expand(S, c, lam, e1.cap + Rat(2));
        HahnSeries rhs = e1.value;
        // psi(theta^{q^{d nu}})^{q^d} twists the coefficients d steps, so the
        // factors are the first d twists of the equation regardless of nu
        for (int j = 0; j < d; ++j) {
            rhs = hs_mul(S, rhs, hs_qpow(S, cexp, j));
            // theta^{q^{d(nu+1)}} - theta^{q^j} with theta = lam + u
            long long ehi = qpow_ll(d * (nu + 1)), elo = qpow_ll(j);
            FieldElement chi = frobenius_power(lam, d * (nu + 1));
            FieldElement clo = frobenius_power(lam, j);
            HahnSeries fac = hs_mono(fe_one(S.field), Rat(ehi), BIG);
            fac = hs_sub(S, fac, hs_mono(fe_one(S.field), Rat(elo), BIG));
            if (chi != clo) fac = hs_add(S, fac, hs_mono(chi - clo, Rat(0), BIG));
            rhs = hs_mul(S, rhs, hs_pow(S, fac, s_exp));
        }

        HahnSeries diff = hs_sub(S, lhs, rhs);
        rep.overlap_cap = std::min(rep.overlap_cap, diff.cap);
        std::ostringstream os;
        os << "nu=" << nu << ": overlap cap " << to_string(diff.cap);
        if (diff.is_zero()) {
            os << ", match";
        } else {
            rep.ok = false;
            os << ", mismatch at valuation " << to_string(diff.val());
        }
        rep.lines.push_back(os.str());
    }
    if (rep.psi_theta_zero)
        rep.lines.push_back("value at the base point vanishes at precision; partial series is 0 "
                            "below the cap");
    return rep;
}

CarlitzMotive carlitz_motive(Session& S, const PlacePtr& place, int Nt, const Rat& stop) {
    CarlitzMotive out;
    out.omega = solve_omega(S, place, Nt, stop);
    auto phi = phi_make({{es_t_minus_theta(S.qfield)}});
    phi_set_motive(phi, rt_one(S.qfield), 1);
    // sub-resolution corrections surface in the residual just below twice the
    // first accumulation exponent; verify down to that floor only
    Rat floor = std::min(stop, Rat(2) - Rat(1, S.max_denom / 4));
    out.pair = make_pair(S, phi, pm_from_element(out.omega.omega), floor);
    long long q = S.q(), qd = 1;
    for (int k = 0; k < place->d; ++k) qd *= q;
    long long denom = qd - 1;
    for (long long i = 0; i < Nt; ++i) {
        out.exp_denoms.push_back(denom);
        denom *= qd;
    }
    return out;
}

}  // namespace fde
