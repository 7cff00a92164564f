#include "fde/hahn.hpp"

#include <algorithm>
#include <optional>

namespace fde {

namespace {
const Rat BIGCAP = Rat(1000000000LL);
}

HahnSeries hs_zero(const FieldSpecPtr& spec, const Rat& cap) {
    HahnSeries h;
    h.spec = spec;
    h.cap = cap;
    return h;
}

HahnSeries hs_mono(const FieldElement& c, const Rat& exp, const Rat& cap) {
    HahnSeries h;
    h.spec = c.spec();
    h.cap = cap;
    if (!c.is_zero() && exp < cap) h.terms.emplace(exp, c);
    return h;
}

HahnSeries hs_const(const FieldElement& c, const Rat& cap) { return hs_mono(c, Rat(0), cap); }

void hs_normalize(const Session& S, HahnSeries& h) {
    for (auto it = h.terms.begin(); it != h.terms.end();) {
        S.check_denom(it->first);
        if (it->second.is_zero() || !(it->first < h.cap))
            it = h.terms.erase(it);
        else
            ++it;
    }
}

HahnSeries hs_lift(const HahnSeries& h, const FieldSpecPtr& target) {
    if (h.spec.get() == target.get()) return h;
    HahnSeries out;
    out.spec = target;
    out.cap = h.cap;
    for (const auto& [e, c] : h.terms) out.terms.emplace(e, embed(c, target));
    return out;
}

void hs_unify(HahnSeries& a, HahnSeries& b) {
    if (a.spec.get() == b.spec.get()) return;
    if (a.spec->deg % b.spec->deg == 0)
        b = hs_lift(b, a.spec);
    else
        a = hs_lift(a, b.spec);
}

HahnSeries hs_add(const Session& S, const HahnSeries& a0, const HahnSeries& b0) {
    HahnSeries a = a0, b = b0;
    hs_unify(a, b);
    HahnSeries out = a;
    out.cap = std::min(a.cap, b.cap);
    for (const auto& [e, c] : b.terms) {
        auto it = out.terms.find(e);
        if (it == out.terms.end())
            out.terms.emplace(e, c);
        else
            it->second = it->second + c;
    }
    hs_normalize(S, out);
    return out;
}

HahnSeries hs_neg(const HahnSeries& a) {
    HahnSeries out = a;
    for (auto& [e, c] : out.terms) c = -c;
    return out;
}

HahnSeries hs_sub(const Session& S, const HahnSeries& a, const HahnSeries& b) {
    return hs_add(S, a, hs_neg(b));
}

HahnSeries hs_mul(const Session& S, const HahnSeries& a0, const HahnSeries& b0) {
    HahnSeries a = a0, b = b0;
    hs_unify(a, b);
    HahnSeries out;
    out.spec = a.spec;
    out.cap = std::min(a.cap + b.val(), b.cap + a.val());
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Rat e = ea + eb;
            if (!(e < out.cap)) continue;
            FieldElement c = ca * cb;
            auto it = out.terms.find(e);
            if (it == out.terms.end())
                out.terms.emplace(e, c);
            else
                it->second = it->second + c;
        }
    hs_normalize(S, out);
    return out;
}

HahnSeries hs_scale(const HahnSeries& a, const FieldElement& c0) {
    HahnSeries out = a;
    FieldElement c = c0;
    if (c.spec().get() != a.spec.get()) {
        if (a.spec->deg % c.spec()->deg == 0)
            c = embed(c, a.spec);
        else {
            out = hs_lift(out, c.spec());
        }
    }
    for (auto it = out.terms.begin(); it != out.terms.end();) {
        it->second = it->second * c;
        if (it->second.is_zero())
            it = out.terms.erase(it);
        else
            ++it;
    }
    return out;
}

HahnSeries hs_shift(const Session& S, const HahnSeries& a, const Rat& e) {
    HahnSeries out;
    out.spec = a.spec;
    out.cap = a.cap + e;
    for (const auto& [ea, c] : a.terms) out.terms.emplace(ea + e, c);
    hs_normalize(S, out);
    return out;
}

HahnSeries hs_inv(const Session& S, const HahnSeries& a) {
    if (a.is_zero()) throw PrecisionError("hs_inv: zero or unknown leading term");
    Rat V = a.val();
    FieldElement lead = a.lead();
    // unit part 1 + eps
    HahnSeries linv = hs_mono(lead.inv(), -V, BIGCAP);
    HahnSeries unit = hs_mul(S, a, linv);
    HahnSeries eps = hs_sub(S, unit, hs_const(fe_one(a.spec), BIGCAP));
    Rat relcap = a.cap - V;  // relative precision of the unit part
    HahnSeries acc = hs_const(fe_one(a.spec), relcap);
    if (!eps.is_zero()) {
        HahnSeries term = hs_const(fe_one(a.spec), relcap);
        Rat ve = eps.val();
        if (!(ve > Rat(0))) throw PrecisionError("hs_inv: non-unit tail");
        Rat acc_v(0);
        while (acc_v + ve < relcap) {
            term = hs_neg(hs_mul(S, term, eps));
            term.cap = relcap;
            hs_normalize(S, term);
            acc = hs_add(S, acc, term);
            acc_v += ve;
            if (term.is_zero()) break;
        }
    }
    return hs_mul(S, acc, linv);
}

HahnSeries hs_qpow(const Session& S, const HahnSeries& a, long long j) {
    if (j < 0) throw FieldError("hs_qpow: negative power not supported");
    Rat scale = pow_rat(S.q(), j);
    HahnSeries out;
    out.spec = a.spec;
    out.cap = a.cap * scale;
    for (const auto& [e, c] : a.terms) out.terms.emplace(e * scale, frobenius_power(c, j));
    hs_normalize(S, out);
    return out;
}

HahnSeries hs_pow(const Session& S, const HahnSeries& a, long long n) {
    HahnSeries out = hs_const(fe_one(a.spec), BIGCAP);
    for (long long i = 0; i < n; ++i) out = hs_mul(S, out, a);
    return out;
}

HahnSeries hs_truncate(const HahnSeries& a, const Rat& cap) {
    HahnSeries out = a;
    if (cap < out.cap) out.cap = cap;
    for (auto it = out.terms.begin(); it != out.terms.end();) {
        if (it->first < out.cap)
            ++it;
        else
            it = out.terms.erase(it);
    }
    return out;
}

bool hs_equal_below(const Session& S, const HahnSeries& a, const HahnSeries& b,
                    const Rat& cutoff) {
    HahnSeries d = hs_sub(S, a, b);
    return d.is_zero() || !(d.val() < cutoff);
}

// ---------------------------------------------------------------------------
// Newton polygon
// ---------------------------------------------------------------------------

NewtonPolygon newton_polygon(std::vector<std::pair<long long, Rat>> points) {
    if (points.size() < 2) throw std::invalid_argument("newton_polygon: need >= 2 points");
    std::sort(points.begin(), points.end());
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].first == points[i - 1].first)
            throw std::invalid_argument("newton_polygon: duplicate x-coordinate");
    NewtonPolygon np;
    np.points = points;
    // monotone-chain lower hull
    std::vector<std::pair<long long, Rat>> hull;
    for (const auto& pt : points) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep if b is strictly below segment a-pt
            Rat lhs = (b.second - a.second) * Rat(pt.first - a.first);
            Rat rhs = (pt.second - a.second) * Rat(b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    for (size_t i = 1; i < hull.size(); ++i) {
        Rat slope = (hull[i].second - hull[i - 1].second) / Rat(hull[i].first - hull[i - 1].first);
        np.hull.emplace_back(slope, hull[i].first - hull[i - 1].first);
    }
    return np;
}

// ---------------------------------------------------------------------------
// radical solver
// ---------------------------------------------------------------------------

HahnSeries solve_radical(Session& S, const HahnSeries& c0, long long m) {
    if (c0.is_zero()) throw PrecisionError("solve_radical: zero or unknown leading term");
    if (m < 1 || m % S.p == 0) throw FieldError("solve_radical: m must be coprime to p");
    HahnSeries c = c0;
    Rat V = c.val();
    Rat mu = V / Rat(m);
    S.check_denom(mu);
    FieldElement a = S.root_or_extend(c.lead(), m);
    c = hs_lift(c, S.field);
    // unit part 1 + eps
    HahnSeries linv = hs_mono(c.lead().inv(), -V, BIGCAP);
    HahnSeries eps = hs_sub(S, hs_mul(S, c, linv), hs_const(fe_one(S.field), BIGCAP));
    Rat relcap = c.cap - V;
    HahnSeries y = hs_const(fe_one(S.field), relcap);
    HahnSeries one_eps = hs_add(S, hs_const(fe_one(S.field), relcap), eps);
    FieldElement minv = fe_from_int(S.field, m).inv();
    for (int iter = 0; iter < 64; ++iter) {
        HahnSeries r = hs_sub(S, hs_pow(S, y, m), one_eps);
        if (r.is_zero() || !(r.val() < relcap)) break;
        // Hensel step: y -= r / (m * y^{m-1})
        HahnSeries deriv = hs_scale(hs_pow(S, y, m - 1), fe_from_int(S.field, m));
        y = hs_sub(S, y, hs_mul(S, r, hs_inv(S, deriv)));
    }
    HahnSeries x = hs_mul(S, hs_mono(a, mu, mu + relcap), y);
    return x;
}

// ---------------------------------------------------------------------------
// Artin-Schreier solver
// ---------------------------------------------------------------------------

namespace {

struct StepChoice {
    Rat mu;
    FieldElement root;
    long long mult = 1;
    std::string desc;
};

long long q_to_e(const Session& S, int e) {
    long long Q = 1;
    for (int i = 0; i < e; ++i) Q *= S.q();
    return Q;
}

// gamma*L(x) shorthand: the additive operator of the equation
HahnSeries as_operator(const Session& S, const HahnSeries& gamma, int e, const HahnSeries& x) {
    return hs_sub(S, hs_mul(S, gamma, hs_qpow(S, x, e)), x);
}

// Candidate leading terms for a root of gamma*X^{q^e} - X + B = 0 with
// valuation strictly above `floor_mu` (if set).  May extend the session tower.
// Segments whose slope denominator exceeds the session exponent resolution are
// dropped; `res_mu` records the least such slope so the caller can cap the
// root where the unrepresentable correction would have entered.
std::vector<StepChoice> step_choices(Session& S, const HahnSeries& gamma, int e,
                                     const HahnSeries& B, const std::optional<Rat>& floor_mu,
                                     const Rat& stop, std::optional<Rat>& res_mu) {
    long long Q = q_to_e(S, e);
    std::vector<std::pair<long long, Rat>> pts;
    if (!B.is_zero()) pts.emplace_back(0, B.val());
    pts.emplace_back(1, Rat(0));
    pts.emplace_back(Q, gamma.val());
    NewtonPolygon np = newton_polygon(pts);
    std::vector<StepChoice> out;
    for (const auto& [slope, len] : np.hull) {
        Rat mu = -slope;
        if (floor_mu && !(mu > *floor_mu)) continue;
        if (mu.denominator() > S.max_denom) {
            if (mu < stop && (!res_mu || mu < *res_mu)) res_mu = mu;
            continue;
        }
        // which points sit on this segment
        auto on_segment = [&](long long x) -> bool {
            for (const auto& pt : pts)
                if (pt.first == x) {
                    // y == y0 + slope*(x - x0) using the hull anchor: recompute via
                    // minimality of val + mu*x
                    Rat key = pt.second + mu * Rat(pt.first);
                    Rat best = pts[0].second + mu * Rat(pts[0].first);
                    for (const auto& p2 : pts) best = std::min(best, p2.second + mu * Rat(p2.first));
                    return key == best;
                }
            return false;
        };
        bool on0 = !B.is_zero() && on_segment(0);
        bool on1 = on_segment(1);
        bool onQ = on_segment(Q);
        FieldElement bl = B.is_zero() ? fe_zero(S.field) : S.lift(B.lead());
        FieldElement gl = S.lift(gamma.lead());
        if (on0 && on1 && !onQ) {
            out.push_back({mu, bl, 1, "lin:" + to_string(mu)});
        } else if (on1 && onQ && !on0) {
            auto roots = S.all_power_roots(gl.inv(), Q - 1);
            for (auto& r : roots) out.push_back({mu, S.lift(r), 1, "ker:" + to_string(mu)});
        } else if (on0 && onQ && !on1) {
            FieldElement c = -(S.lift(bl) * S.lift(gl).inv());
            out.push_back({mu, frobenius_power(c, -e), Q, "frob:" + to_string(mu)});
        } else {
            auto roots = S.additive_roots_or_extend(e, gl, bl);
            for (auto& r : roots)
                if (!r.is_zero()) out.push_back({mu, S.lift(r), 1, "as:" + to_string(mu)});
        }
    }
    // larger root valuation first, then canonical order on the residue root
    std::stable_sort(out.begin(), out.end(), [](const StepChoice& a, const StepChoice& b) {
        if (a.mu != b.mu) return a.mu > b.mu;
        return canonical_less(a.root, b.root);
    });
    return out;
}

struct ASState {
    HahnSeries x, Bk;
    std::optional<Rat> lastmu;
    std::optional<Rat> res_mu;  // least dropped sub-resolution correction slope
    std::vector<std::string> record;
};

void as_emit(Session& S, const HahnSeries& gamma, int e, const ASState& st, const Rat& stop,
             std::vector<ASBranch>& out) {
    long long Q = q_to_e(S, e);
    Rat capx = std::min(stop, (stop - gamma.val()) / Rat(Q));
    // Content of the forcing term hidden above its cap perturbs the root no
    // lower than the steepest Newton segment through (0, B.cap).
    capx = std::min(capx, std::max(st.Bk.cap, (st.Bk.cap - gamma.val()) / Rat(Q)));
    if (st.res_mu) capx = std::min(capx, *st.res_mu);
    ASBranch br;
    br.root = hs_truncate(st.x, capx);
    br.root.spec = st.x.spec ? st.x.spec : S.field;
    br.residual_val = st.Bk.is_zero() ? st.Bk.cap : st.Bk.val();
    br.record = st.record;
    out.push_back(br);
}

void as_recurse(Session& S, HahnSeries gamma, int e, ASState st, const Rat& stop, bool enumerate,
                BranchPolicy first_policy, bool first, std::vector<ASBranch>& out, int depth) {
    if (depth > 512) throw PrecisionError("solve_artin_schreier: iteration guard hit");
    // refine x along the deterministic continuation until the forcing term is
    // exhausted; branch where the enumeration policy demands it
    while (true) {
        gamma = hs_lift(gamma, S.field);
        st.Bk = hs_lift(st.Bk, S.field);
        st.x = hs_lift(st.x, S.field);
        bool done = st.Bk.is_zero() || !(st.Bk.val() < stop);
        std::optional<Rat> step_res;
        auto choices = step_choices(S, gamma, e, st.Bk, st.lastmu, stop, step_res);
        if (step_res && (!st.res_mu || *step_res < *st.res_mu)) st.res_mu = *step_res;
        gamma = hs_lift(gamma, S.field);
        st.Bk = hs_lift(st.Bk, S.field);
        st.x = hs_lift(st.x, S.field);
        // drop invisible deviations
        std::vector<StepChoice> visible;
        for (auto& c : choices)
            if (c.mu < stop) visible.push_back(c);
        if (done) {
            as_emit(S, gamma, e, st, stop, out);
            if (enumerate) {
                for (const auto& c : visible) {
                    ASState st2 = st;
                    HahnSeries x0 = hs_mono(c.root, c.mu, BIGCAP);
                    st2.x = hs_add(S, st2.x, x0);
                    st2.Bk = hs_add(S, st2.Bk, as_operator(S, gamma, e, x0));
                    st2.lastmu = c.mu;
                    st2.record.push_back(c.desc);
                    as_recurse(S, gamma, e, std::move(st2), stop, enumerate, first_policy, false,
                               out, depth + 1);
                }
            }
            return;
        }
        if (visible.empty()) {
            // Either the next correction exponent falls below the session's
            // denominator resolution (the root is complete within the
            // representable exponent lattice) or the inputs cannot support the
            // requested precision; emit what we have.
            if (step_res) {
                st.record.push_back("res-limit:" + to_string(st.Bk.val()));
                S.log("artin-schreier: exponent resolution reached at residual " +
                      to_string(st.Bk.val()));
            }
            as_emit(S, gamma, e, st, stop, out);
            return;
        }
        if (enumerate) {
            for (const auto& c : visible) {
                ASState st2 = st;
                HahnSeries x0 = hs_mono(c.root, c.mu, BIGCAP);
                st2.x = hs_add(S, st2.x, x0);
                st2.Bk = hs_add(S, st2.Bk, as_operator(S, gamma, e, x0));
                st2.lastmu = c.mu;
                st2.record.push_back(c.desc);
                as_recurse(S, gamma, e, std::move(st2), stop, enumerate, first_policy, false, out,
                           depth + 1);
            }
            return;
        }
        // deterministic branch: policy at the leading step, max valuation after
        StepChoice pick = visible.front();
        if (first && first_policy == BranchPolicy::MinVal) {
            // visible is sorted mu-descending, canonical order within equal mu
            Rat minmu = visible.back().mu;
            for (const auto& c : visible)
                if (c.mu == minmu) {
                    pick = c;
                    break;
                }
        }
        first = false;
        HahnSeries x0 = hs_mono(pick.root, pick.mu, BIGCAP);
        st.x = hs_add(S, st.x, x0);
        st.Bk = hs_add(S, st.Bk, as_operator(S, gamma, e, x0));
        st.lastmu = pick.mu;
        st.record.push_back(pick.desc);
        ++depth;
        if (depth > 512) throw PrecisionError("solve_artin_schreier: iteration guard hit");
    }
}

}  // namespace

BranchPolicy parse_branch(const std::string& s) {
    if (s == "max-val") return BranchPolicy::MaxVal;
    if (s == "min-val") return BranchPolicy::MinVal;
    if (s == "enumerate") return BranchPolicy::Enumerate;
    throw std::invalid_argument("unknown branch policy: " + s);
}

std::vector<ASBranch> solve_artin_schreier(Session& S, const HahnSeries& gamma, int e,
                                           const HahnSeries& B, BranchPolicy policy,
                                           const Rat& stop) {
    if (gamma.is_zero()) throw FieldError("solve_artin_schreier: gamma must be nonzero");
    ASState st;
    st.x = hs_zero(S.field, BIGCAP);
    st.Bk = hs_lift(B, S.field);
    std::vector<ASBranch> out;
    as_recurse(S, hs_lift(gamma, S.field), e, std::move(st), stop,
               policy == BranchPolicy::Enumerate, policy, true, out, 0);
    return out;
}

}  // namespace fde
