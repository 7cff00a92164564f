#include "fde/vadic.hpp"

#include <algorithm>
#include <numeric>

namespace fde {

namespace {

const Rat BIG = Rat(1000000000LL);

ThetaPoly tp_powmod(const ThetaPoly& base, long long e, const ThetaPoly& mod) {
    ThetaPoly acc = {fe_one(base[0].spec())};
    ThetaPoly b = tp_divmod(base, mod).second;
    while (e > 0) {
        if (e & 1) acc = tp_divmod(tp_mul(acc, b), mod).second;
        b = tp_divmod(tp_mul(b, b), mod).second;
        e >>= 1;
    }
    return acc;
}

bool poly_irreducible_over_q(const ThetaPoly& v, long long q) {
    int d = tp_deg(v);
    if (d < 1) return false;
    if (d == 1) return true;
    auto spec = v[0].spec();
    ThetaPoly X = {fe_zero(spec), fe_one(spec)};
    ThetaPoly xqk = X;
    for (int k = 1; k <= d; ++k) {
        xqk = tp_powmod(xqk, q, v);
        ThetaPoly diff = tp_sub(xqk, X);
        if (k < d) {
            if (tp_deg(tp_gcd(diff, v)) != 0) return false;
        } else {
            if (!tp_is_zero(tp_divmod(diff, v).second)) return false;
        }
    }
    return true;
}

}  // namespace

PlacePtr make_place(Session& S, const std::vector<FieldElement>& vcoeffs) {
    ThetaPoly v = tp_trim(vcoeffs);
    int d = tp_deg(v);
    if (d < 1) throw FieldError("make_place: v must be non-constant");
    if (!v.back().is_one()) throw FieldError("make_place: v must be monic");
    if (!poly_irreducible_over_q(v, S.q())) throw FieldError("make_place: v not irreducible");

    // working field must contain F_{q^d}
    int need = S.s * d;
    int cur = S.field->deg;
    int target = std::lcm(cur, need);
    if (target > cur) S.extend(target / cur);

    std::vector<FieldElement> lifted;
    for (auto& c : v) lifted.push_back(S.lift(embed(c, S.field)));
    auto roots = poly_roots(lifted);
    if ((int)roots.size() != d) throw FieldError("make_place: root count mismatch");

    auto place = std::make_shared<PlaceData>();
    place->d = d;
    place->v = v;
    place->lambda.push_back(roots.front());  // canonically least root
    for (int l = 1; l < d; ++l)
        place->lambda.push_back(frobenius_power(place->lambda.back(), 1));
    for (int l = 0; l < d; ++l) {
        if (!tp_eval(lifted, place->lambda[l]).is_zero())
            throw FieldError("make_place: lambda ordering broke");
        for (int m = 0; m < l; ++m)
            if (place->lambda[l] == place->lambda[m])
                throw FieldError("make_place: repeated root");
    }
    return place;
}

// ---------------------------------------------------------------------------
// VadicElement
// ---------------------------------------------------------------------------

VadicElement ve_zero(const PlacePtr& place, int Nt, const FieldSpecPtr&, const Rat&) {
    VadicElement x;
    x.place = place;
    x.Nt = Nt;
    x.comp.resize(place->d);
    return x;
}

VadicElement ve_scalar(const PlacePtr& place, int Nt, const HahnSeries& h) {
    VadicElement x;
    x.place = place;
    x.Nt = Nt;
    x.comp.resize(place->d);
    for (int l = 0; l < place->d; ++l)
        if (!h.is_zero() || h.cap < BIG) x.comp[l][0] = h;
    return x;
}

VadicElement ve_one(const Session& S, const PlacePtr& place, int Nt, const Rat& cap) {
    return ve_scalar(place, Nt, hs_const(fe_one(S.field), cap));
}

void ve_normalize(const Session& S, VadicElement& x) {
    for (auto& m : x.comp)
        for (auto it = m.begin(); it != m.end();) {
            hs_normalize(S, it->second);
            if (it->first >= x.Nt || (it->second.is_zero() && !(it->second.cap < BIG)))
                it = m.erase(it);
            else
                ++it;
        }
}

long long ve_imin(const VadicElement& a) {
    long long imin = a.Nt;
    for (auto& m : a.comp)
        for (auto& [i, h] : m)
            if (!h.is_zero()) imin = std::min(imin, i);
    return imin;
}

std::optional<Rat> ve_min_val(const VadicElement& a) {
    std::optional<Rat> out;
    for (auto& m : a.comp)
        for (auto& [i, h] : m)
            if (!h.is_zero()) out = out ? std::min(*out, h.val()) : h.val();
    return out;
}

Rat ve_min_cap(const VadicElement& a) {
    Rat out = BIG;
    for (auto& m : a.comp)
        for (auto& [i, h] : m) out = std::min(out, h.cap);
    return out;
}

bool ve_is_zero(const VadicElement& a) {
    for (auto& m : a.comp)
        for (auto& [i, h] : m)
            if (!h.is_zero()) return false;
    return true;
}

VadicElement ve_add(const Session& S, const VadicElement& a, const VadicElement& b) {
    VadicElement out = a;
    out.Nt = std::min(a.Nt, b.Nt);
    for (int l = 0; l < a.place->d; ++l)
        for (auto& [i, h] : b.comp[l]) {
            auto it = out.comp[l].find(i);
            if (it == out.comp[l].end())
                out.comp[l][i] = h;
            else
                it->second = hs_add(S, it->second, h);
        }
    ve_normalize(S, out);
    return out;
}

VadicElement ve_neg(const VadicElement& a) {
    VadicElement out = a;
    for (auto& m : out.comp)
        for (auto& [i, h] : m) h = hs_neg(h);
    return out;
}

VadicElement ve_sub(const Session& S, const VadicElement& a, const VadicElement& b) {
    return ve_add(S, a, ve_neg(b));
}

VadicElement ve_mul(const Session& S, const VadicElement& a, const VadicElement& b) {
    long long ia = ve_imin(a), ib = ve_imin(b);
    long long Ntout = std::min((long long)a.Nt + ib, (long long)b.Nt + ia);
    Ntout = std::min(Ntout, (long long)a.Nt + (long long)b.Nt);
    VadicElement out;
    out.place = a.place;
    out.Nt = (int)std::min<long long>(Ntout, 1 << 20);
    out.comp.resize(a.place->d);
    for (int l = 0; l < a.place->d; ++l)
        for (auto& [i, ha] : a.comp[l])
            for (auto& [j, hb] : b.comp[l]) {
                long long k = i + j;
                if (k >= Ntout) continue;
                HahnSeries p = hs_mul(S, ha, hb);
                auto it = out.comp[l].find(k);
                if (it == out.comp[l].end())
                    out.comp[l][k] = p;
                else
                    it->second = hs_add(S, it->second, p);
            }
    ve_normalize(S, out);
    return out;
}

VadicElement ve_scale(const Session& S, const VadicElement& a, const HahnSeries& c) {
    VadicElement out = a;
    for (auto& m : out.comp)
        for (auto& [i, h] : m) h = hs_mul(S, h, c);
    ve_normalize(S, out);
    return out;
}

VadicElement ve_inv(const Session& S, const VadicElement& a) {
    VadicElement out;
    out.place = a.place;
    out.comp.resize(a.place->d);
    long long Ntout = 1 << 20;
    std::vector<std::vector<std::pair<long long, HahnSeries>>> dense(a.place->d);
    for (int l = 0; l < a.place->d; ++l) {
        long long imin = a.Nt;
        for (auto& [i, h] : a.comp[l])
            if (!h.is_zero()) imin = std::min(imin, i);
        if (imin == a.Nt) throw PrecisionError("ve_inv: component with no visible leading term");
        Ntout = std::min(Ntout, (long long)a.Nt - 2 * imin);
        long long rel = a.Nt - imin;
        std::vector<HahnSeries> c((size_t)rel, hs_zero(S.field, BIG));
        for (auto& [i, h] : a.comp[l])
            if (i >= imin && i < a.Nt) c[(size_t)(i - imin)] = h;
        HahnSeries lead_inv = hs_inv(S, c[0]);
        std::vector<HahnSeries> q;
        q.push_back(lead_inv);
        for (long long j = 1; j < rel; ++j) {
            HahnSeries acc = hs_zero(S.field, BIG);
            for (long long k = 1; k <= j; ++k)
                acc = hs_add(S, acc, hs_mul(S, c[(size_t)k], q[(size_t)(j - k)]));
            q.push_back(hs_neg(hs_mul(S, acc, lead_inv)));
        }
        for (long long j = 0; j < rel; ++j) dense[l].emplace_back(-imin + j, q[(size_t)j]);
    }
    out.Nt = (int)Ntout;
    for (int l = 0; l < a.place->d; ++l)
        for (auto& [i, h] : dense[l])
            if (i < Ntout) out.comp[l][i] = h;
    ve_normalize(S, out);
    return out;
}

VadicElement ve_pow(const Session& S, const VadicElement& a, long long n) {
    if (n < 0) return ve_pow(S, ve_inv(S, a), -n);
    VadicElement out = ve_one(S, a.place, a.Nt, BIG);
    for (long long i = 0; i < n; ++i) out = ve_mul(S, out, a);
    return out;
}

VadicElement ve_sigma(const Session& S, const VadicElement& a) {
    VadicElement out;
    out.place = a.place;
    out.Nt = a.Nt;
    out.comp.resize(a.place->d);
    int d = a.place->d;
    for (int l = 0; l < d; ++l)
        for (auto& [i, h] : a.comp[(l - 1 + d) % d]) out.comp[l][i] = hs_qpow(S, h, 1);
    ve_normalize(S, out);
    return out;
}

SigmaFixedVerdict is_sigma_fixed(const Session& S, const VadicElement& a) {
    int d = a.place->d;
    for (int l = 0; l < d; ++l) {
        int l2 = (l + 1) % d;
        std::map<long long, char> keys;
        for (auto& [i, h] : a.comp[l]) keys[i] = 1;
        for (auto& [i, h] : a.comp[l2]) keys[i] = 1;
        for (auto& [i, _] : keys) {
            auto geti = [&](int lc) {
                auto it = a.comp[lc].find(i);
                return it == a.comp[lc].end() ? hs_zero(S.field, BIG) : it->second;
            };
            HahnSeries x = geti(l), y = geti(l2);
            for (auto& [e, c] : x.terms)
                if (e != Rat(0))
                    return {false, "component " + std::to_string(l) + ", index " +
                                       std::to_string(i) + ", exponent " + to_string(e)};
            HahnSeries diff = hs_sub(S, hs_qpow(S, x, 1), y);
            if (!diff.is_zero())
                return {false, "component " + std::to_string(l) + ", index " + std::to_string(i) +
                                   ": a^q != shifted coefficient"};
        }
    }
    return {true, ""};
}

ThetaEval eval_theta_power(const Session& S, const VadicElement& x, long long nu,
                           const std::function<Rat(long long)>& tail_val) {
    long long Q = 1;
    for (long long k = 0; k < x.place->d * nu; ++k) Q *= S.q();
    ThetaEval out;
    out.value = hs_zero(S.field, BIG);
    Rat cap = BIG;
    std::optional<Rat> running;
    int stalls = 0;
    for (auto& [i, h] : x.comp[x.place->ref]) {
        cap = std::min(cap, h.cap + Rat(i) * Rat(Q));
        if (h.is_zero()) continue;
        Rat tv = h.val() + Rat(i) * Rat(Q);
        if (running && !(tv > *running)) {
            if (++stalls >= 3) {
                out.diverged = true;
                out.note = "divergence suspected at index " + std::to_string(i);
                return out;
            }
        } else {
            stalls = 0;
        }
        running = running ? std::min(*running, tv) : tv;
        out.value = hs_add(S, out.value, hs_shift(S, h, Rat(i) * Rat(Q)));
    }
    if (tail_val) {
        Rat prev = tail_val(x.Nt) + Rat(x.Nt) * Rat(Q);
        cap = std::min(cap, prev);
        for (long long i = x.Nt + 1; i < x.Nt + 64; ++i) {
            Rat b = tail_val(i) + Rat(i) * Rat(Q);
            cap = std::min(cap, b);
            if (i == x.Nt + 63 && b < prev) {
                out.diverged = true;
                out.note = "tail bound not increasing";
                return out;
            }
            prev = b;
        }
    }
    out.cap = cap;
    out.value = hs_truncate(out.value, cap);
    hs_normalize(S, out.value);
    return out;
}

VadicElement expand_exact(const Session& S, const PlacePtr& place, const ExactScalar& x, int Nt,
                          const Rat& cap) {
    VadicElement out;
    out.place = place;
    out.Nt = Nt;
    out.comp.resize(place->d);
    FieldElement lref = place->lambda[place->ref];
    auto expand_poly = [&](const std::vector<RatTheta>& poly, int l) {
        // Horner in t = lambda_l + w; result: w-coefficients as Hahn series
        HahnSeries lam = hs_const(S.lift(place->lambda[l]), BIG);
        std::vector<HahnSeries> acc;
        for (int k = (int)poly.size() - 1; k >= 0; --k) {
            std::vector<HahnSeries> next(acc.size() + 1, hs_zero(S.field, BIG));
            for (size_t j = 0; j < acc.size(); ++j) {
                next[j] = hs_add(S, next[j], hs_mul(S, acc[j], lam));
                next[j + 1] = hs_add(S, next[j + 1], acc[j]);
            }
            next[0] = hs_add(S, next[0], rt_expand(S, poly[k], lref, cap));
            acc = std::move(next);
        }
        while (!acc.empty() && acc.back().is_zero() && !(acc.back().cap < BIG)) acc.pop_back();
        return acc;
    };
    for (int l = 0; l < place->d; ++l) {
        auto N = expand_poly(x.num, l);
        auto D = expand_poly(x.den, l);
        if (D.empty()) throw FieldError("expand_exact: zero denominator");
        if (D.size() == 1) {
            HahnSeries dinv = hs_inv(S, D[0]);
            for (size_t i = 0; i < N.size() && (long long)i < Nt; ++i) {
                HahnSeries q = hs_mul(S, N[i], dinv);
                if (!q.is_zero() || q.cap < BIG) out.comp[l][(long long)i] = q;
            }
        } else {
            if (D[0].is_zero())
                throw FieldError("expand_exact: pole at place component " + std::to_string(l));
            HahnSeries d0inv = hs_inv(S, D[0]);
            std::vector<HahnSeries> q;
            for (long long i = 0; i < Nt; ++i) {
                HahnSeries acc = i < (long long)N.size() ? N[(size_t)i] : hs_zero(S.field, cap);
                for (long long k = 1; k <= i && k < (long long)D.size(); ++k)
                    acc = hs_sub(S, acc, hs_mul(S, D[(size_t)k], q[(size_t)(i - k)]));
                q.push_back(hs_mul(S, acc, d0inv));
                out.comp[l][i] = q.back();
            }
        }
    }
    ve_normalize(S, out);
    return out;
}

}  // namespace fde
