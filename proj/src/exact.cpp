#include "fde/exact.hpp"

#include <algorithm>

namespace fde {

// ---------------------------------------------------------------------------
// ThetaPoly
// ---------------------------------------------------------------------------

ThetaPoly tp_trim(ThetaPoly f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

bool tp_is_zero(const ThetaPoly& f) { return tp_trim(f).empty(); }

int tp_deg(const ThetaPoly& f) {
    for (int i = (int)f.size() - 1; i >= 0; --i)
        if (!f[i].is_zero()) return i;
    return -1;
}

ThetaPoly tp_add(const ThetaPoly& a, const ThetaPoly& b) {
    ThetaPoly out = a.size() >= b.size() ? a : b;
    const ThetaPoly& small = a.size() >= b.size() ? b : a;
    for (size_t i = 0; i < small.size(); ++i) out[i] = out[i] + small[i];
    return tp_trim(out);
}

ThetaPoly tp_neg(const ThetaPoly& a) {
    ThetaPoly out = a;
    for (auto& c : out) c = -c;
    return out;
}

ThetaPoly tp_sub(const ThetaPoly& a, const ThetaPoly& b) { return tp_add(a, tp_neg(b)); }

ThetaPoly tp_mul(const ThetaPoly& a, const ThetaPoly& b) {
    if (tp_is_zero(a) || tp_is_zero(b)) return {};
    ThetaPoly out(a.size() + b.size() - 1, fe_zero(a[0].spec()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return tp_trim(out);
}

ThetaPoly tp_monic(const ThetaPoly& a0) {
    ThetaPoly a = tp_trim(a0);
    if (a.empty()) return a;
    FieldElement li = a.back().inv();
    for (auto& c : a) c = c * li;
    return a;
}

std::pair<ThetaPoly, ThetaPoly> tp_divmod(const ThetaPoly& a0, const ThetaPoly& b0) {
    ThetaPoly a = tp_trim(a0), b = tp_trim(b0);
    if (b.empty()) throw FieldError("tp_divmod: division by zero");
    FieldElement li = b.back().inv();
    ThetaPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, fe_zero(b[0].spec()));
    while (a.size() >= b.size() && !a.empty()) {
        FieldElement c = a.back() * li;
        size_t shift = a.size() - b.size();
        q[shift] = q[shift] + c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - c * b[i];
        a = tp_trim(a);
    }
    return {tp_trim(q), a};
}

ThetaPoly tp_gcd(ThetaPoly a, ThetaPoly b) {
    a = tp_trim(a);
    b = tp_trim(b);
    while (!b.empty()) {
        auto r = tp_divmod(a, b).second;
        a = b;
        b = r;
    }
    return tp_monic(a);
}

FieldElement tp_eval(const ThetaPoly& f, const FieldElement& x) {
    FieldElement acc = fe_zero(x.spec());
    for (int i = (int)f.size() - 1; i >= 0; --i) acc = acc * x + embed(f[i], x.spec());
    return acc;
}

// ---------------------------------------------------------------------------
// RatTheta
// ---------------------------------------------------------------------------

RatTheta rt_make(const FieldSpecPtr& spec, ThetaPoly num, ThetaPoly den) {
    num = tp_trim(std::move(num));
    den = tp_trim(std::move(den));
    if (den.empty()) throw FieldError("rt_make: zero denominator");
    RatTheta out;
    out.spec = spec;
    if (num.empty()) {
        out.den = {fe_one(spec)};
        return out;
    }
    ThetaPoly g = tp_gcd(num, den);
    if (tp_deg(g) > 0) {
        num = tp_divmod(num, g).first;
        den = tp_divmod(den, g).first;
    }
    FieldElement li = den.back().inv();
    for (auto& c : num) c = c * li;
    for (auto& c : den) c = c * li;
    out.num = std::move(num);
    out.den = std::move(den);
    return out;
}

RatTheta rt_zero(const FieldSpecPtr& spec) { return rt_make(spec, {}, {fe_one(spec)}); }
RatTheta rt_one(const FieldSpecPtr& spec) { return rt_make(spec, {fe_one(spec)}, {fe_one(spec)}); }
RatTheta rt_int(const FieldSpecPtr& spec, long long n) {
    return rt_make(spec, {fe_from_int(spec, n)}, {fe_one(spec)});
}
RatTheta rt_const(const FieldElement& c) { return rt_make(c.spec(), {c}, {fe_one(c.spec())}); }
RatTheta rt_theta(const FieldSpecPtr& spec) {
    return rt_make(spec, {fe_zero(spec), fe_one(spec)}, {fe_one(spec)});
}
RatTheta rt_poly(const FieldSpecPtr& spec, ThetaPoly num) {
    return rt_make(spec, std::move(num), {fe_one(spec)});
}

RatTheta rt_add(const RatTheta& a, const RatTheta& b) {
    return rt_make(a.spec, tp_add(tp_mul(a.num, b.den), tp_mul(b.num, a.den)),
                   tp_mul(a.den, b.den));
}
RatTheta rt_neg(const RatTheta& a) { return rt_make(a.spec, tp_neg(a.num), a.den); }
RatTheta rt_sub(const RatTheta& a, const RatTheta& b) { return rt_add(a, rt_neg(b)); }
RatTheta rt_mul(const RatTheta& a, const RatTheta& b) {
    return rt_make(a.spec, tp_mul(a.num, b.num), tp_mul(a.den, b.den));
}
RatTheta rt_inv(const RatTheta& a) {
    if (a.is_zero()) throw FieldError("rt_inv: zero");
    return rt_make(a.spec, a.den, a.num);
}
RatTheta rt_div(const RatTheta& a, const RatTheta& b) { return rt_mul(a, rt_inv(b)); }

bool rt_equal(const RatTheta& a, const RatTheta& b) {
    return tp_is_zero(tp_sub(tp_mul(a.num, b.den), tp_mul(b.num, a.den)));
}

RatTheta rt_sigma(const RatTheta& a, long long q) {
    auto spread = [&](const ThetaPoly& f) {
        ThetaPoly out;
        if (f.empty()) return out;
        out.assign((f.size() - 1) * (size_t)q + 1, fe_zero(a.spec));
        for (size_t i = 0; i < f.size(); ++i) out[i * (size_t)q] = f[i];
        return out;
    };
    return rt_make(a.spec, spread(a.num), spread(a.den));
}

HahnSeries rt_expand(const Session& S, const RatTheta& a, const FieldElement& lambda,
                     const Rat& cap) {
    FieldElement lam = S.lift(lambda);
    HahnSeries u = hs_mono(fe_one(S.field), Rat(1), cap + Rat(1));
    auto eval = [&](const ThetaPoly& f) {
        HahnSeries acc = hs_zero(S.field, cap);
        for (int i = (int)f.size() - 1; i >= 0; --i) {
            acc = hs_mul(S, acc, hs_add(S, hs_const(lam, cap + Rat(1)), u));
            acc.cap = cap;
            acc = hs_add(S, acc, hs_const(S.lift(embed(f[i], S.field)), cap));
        }
        return acc;
    };
    HahnSeries n = eval(a.num);
    if (a.is_zero()) return n;
    HahnSeries d = eval(a.den);
    return hs_mul(S, n, hs_inv(S, d));
}

std::string rt_str(const RatTheta& a) {
    auto poly = [](const ThetaPoly& f) {
        if (f.empty()) return std::string("0");
        std::string s;
        for (int i = (int)f.size() - 1; i >= 0; --i) {
            if (f[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            if (i == 0 || !f[i].is_one()) s += f[i].str();
            if (i > 0) {
                if (!f[i].is_one()) s += "*";
                s += "theta";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? std::string("0") : s;
    };
    std::string s = poly(a.num);
    if (tp_deg(a.den) > 0 || !a.den[0].is_one()) s = "(" + s + ")/(" + poly(a.den) + ")";
    return s;
}

// ---------------------------------------------------------------------------
// ExactScalar
// ---------------------------------------------------------------------------

namespace {

std::vector<RatTheta> ep_trim(std::vector<RatTheta> f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

std::vector<RatTheta> ep_add(const FieldSpecPtr& spec, const std::vector<RatTheta>& a,
                             const std::vector<RatTheta>& b) {
    std::vector<RatTheta> out(std::max(a.size(), b.size()), rt_zero(spec));
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = rt_add(out[i], b[i]);
    return ep_trim(out);
}

std::vector<RatTheta> ep_neg(const std::vector<RatTheta>& a) {
    auto out = a;
    for (auto& c : out) c = rt_neg(c);
    return out;
}

std::vector<RatTheta> ep_mul(const FieldSpecPtr& spec, const std::vector<RatTheta>& a,
                             const std::vector<RatTheta>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<RatTheta> out(a.size() + b.size() - 1, rt_zero(spec));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = rt_add(out[i + j], rt_mul(a[i], b[j]));
    return ep_trim(out);
}

std::pair<std::vector<RatTheta>, std::vector<RatTheta>> ep_divmod(const FieldSpecPtr& spec,
                                                                  std::vector<RatTheta> a,
                                                                  std::vector<RatTheta> b) {
    a = ep_trim(std::move(a));
    b = ep_trim(std::move(b));
    if (b.empty()) throw FieldError("ep_divmod: division by zero");
    RatTheta li = rt_inv(b.back());
    std::vector<RatTheta> q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, rt_zero(spec));
    while (a.size() >= b.size() && !a.empty()) {
        RatTheta c = rt_mul(a.back(), li);
        size_t shift = a.size() - b.size();
        q[shift] = rt_add(q[shift], c);
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = rt_sub(a[shift + i], rt_mul(c, b[i]));
        a = ep_trim(std::move(a));
    }
    return {ep_trim(std::move(q)), a};
}

std::vector<RatTheta> ep_gcd(const FieldSpecPtr& spec, std::vector<RatTheta> a,
                             std::vector<RatTheta> b) {
    a = ep_trim(std::move(a));
    b = ep_trim(std::move(b));
    while (!b.empty()) {
        auto r = ep_divmod(spec, a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        RatTheta li = rt_inv(a.back());
        for (auto& c : a) c = rt_mul(c, li);
    }
    return a;
}

}  // namespace

ExactScalar es_make(const FieldSpecPtr& spec, std::vector<RatTheta> num,
                    std::vector<RatTheta> den) {
    num = ep_trim(std::move(num));
    den = ep_trim(std::move(den));
    if (den.empty()) throw FieldError("es_make: zero denominator");
    ExactScalar out;
    out.spec = spec;
    if (num.empty()) {
        out.den = {rt_one(spec)};
        return out;
    }
    auto g = ep_gcd(spec, num, den);
    if (g.size() > 1) {
        num = ep_divmod(spec, num, g).first;
        den = ep_divmod(spec, den, g).first;
    }
    RatTheta li = rt_inv(den.back());
    for (auto& c : num) c = rt_mul(c, li);
    for (auto& c : den) c = rt_mul(c, li);
    out.num = std::move(num);
    out.den = std::move(den);
    return out;
}

ExactScalar es_zero(const FieldSpecPtr& spec) { return es_make(spec, {}, {rt_one(spec)}); }
ExactScalar es_one(const FieldSpecPtr& spec) {
    return es_make(spec, {rt_one(spec)}, {rt_one(spec)});
}
ExactScalar es_int(const FieldSpecPtr& spec, long long n) {
    return es_make(spec, {rt_int(spec, n)}, {rt_one(spec)});
}
ExactScalar es_from_rt(const RatTheta& a) { return es_make(a.spec, {a}, {rt_one(a.spec)}); }
ExactScalar es_t(const FieldSpecPtr& spec) {
    return es_make(spec, {rt_zero(spec), rt_one(spec)}, {rt_one(spec)});
}
ExactScalar es_theta(const FieldSpecPtr& spec) { return es_from_rt(rt_theta(spec)); }
ExactScalar es_t_minus_theta(const FieldSpecPtr& spec) {
    return es_make(spec, {rt_neg(rt_theta(spec)), rt_one(spec)}, {rt_one(spec)});
}

ExactScalar es_add(const ExactScalar& a, const ExactScalar& b) {
    return es_make(a.spec,
                   ep_add(a.spec, ep_mul(a.spec, a.num, b.den), ep_mul(a.spec, b.num, a.den)),
                   ep_mul(a.spec, a.den, b.den));
}
ExactScalar es_neg(const ExactScalar& a) {
    ExactScalar out = a;
    out.num = ep_neg(out.num);
    return out;
}
ExactScalar es_sub(const ExactScalar& a, const ExactScalar& b) { return es_add(a, es_neg(b)); }
ExactScalar es_mul(const ExactScalar& a, const ExactScalar& b) {
    return es_make(a.spec, ep_mul(a.spec, a.num, b.num), ep_mul(a.spec, a.den, b.den));
}
ExactScalar es_inv(const ExactScalar& a) {
    if (a.is_zero()) throw FieldError("es_inv: zero");
    return es_make(a.spec, a.den, a.num);
}
ExactScalar es_div(const ExactScalar& a, const ExactScalar& b) { return es_mul(a, es_inv(b)); }

ExactScalar es_pow(const ExactScalar& a, long long n) {
    ExactScalar base = n < 0 ? es_inv(a) : a;
    if (n < 0) n = -n;
    ExactScalar out = es_one(a.spec);
    for (long long i = 0; i < n; ++i) out = es_mul(out, base);
    return out;
}

bool es_equal(const ExactScalar& a, const ExactScalar& b) { return es_sub(a, b).is_zero(); }

ExactScalar es_sigma(const ExactScalar& a, long long q) {
    ExactScalar out = a;
    for (auto& c : out.num) c = rt_sigma(c, q);
    for (auto& c : out.den) c = rt_sigma(c, q);
    return out;
}

std::string es_str(const ExactScalar& a) {
    auto poly = [](const std::vector<RatTheta>& f) {
        if (f.empty()) return std::string("0");
        std::string s;
        for (int i = (int)f.size() - 1; i >= 0; --i) {
            if (f[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + rt_str(f[i]) + ")";
            if (i > 0) {
                s += "*t";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? std::string("0") : s;
    };
    std::string s = poly(a.num);
    if (a.den.size() > 1 || !(a.den.size() == 1 && rt_equal(a.den[0], rt_one(a.spec))))
        s = "(" + s + ") / (" + poly(a.den) + ")";
    return s;
}

// ---------------------------------------------------------------------------
// matrices
// ---------------------------------------------------------------------------

EMatrix em_identity(const FieldSpecPtr& spec, int r) {
    EMatrix m(r, std::vector<ExactScalar>(r, es_zero(spec)));
    for (int i = 0; i < r; ++i) m[i][i] = es_one(spec);
    return m;
}

EMatrix em_mul(const EMatrix& a, const EMatrix& b) {
    int n = (int)a.size(), k = (int)b.size(), m = (int)b[0].size();
    EMatrix out(n, std::vector<ExactScalar>(m, es_zero(a[0][0].spec)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < k; ++l) out[i][j] = es_add(out[i][j], es_mul(a[i][l], b[l][j]));
    return out;
}

ExactScalar em_det(const EMatrix& a0) {
    EMatrix a = a0;
    int n = (int)a.size();
    ExactScalar det = es_one(a[0][0].spec);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!a[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return es_zero(a[0][0].spec);
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = es_neg(det);
        }
        det = es_mul(det, a[c][c]);
        ExactScalar pi = es_inv(a[c][c]);
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            ExactScalar f = es_mul(a[r][c], pi);
            for (int j = c; j < n; ++j) a[r][j] = es_sub(a[r][j], es_mul(f, a[c][j]));
        }
    }
    return det;
}

EMatrix em_inv(const EMatrix& a0) {
    EMatrix a = a0;
    int n = (int)a.size();
    EMatrix inv = em_identity(a[0][0].spec, n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!a[r][c].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw FieldError("em_inv: singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        ExactScalar pi = es_inv(a[c][c]);
        for (int j = 0; j < n; ++j) {
            a[c][j] = es_mul(a[c][j], pi);
            inv[c][j] = es_mul(inv[c][j], pi);
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            ExactScalar f = a[r][c];
            for (int j = 0; j < n; ++j) {
                a[r][j] = es_sub(a[r][j], es_mul(f, a[c][j]));
                inv[r][j] = es_sub(inv[r][j], es_mul(f, inv[c][j]));
            }
        }
    }
    return inv;
}

EMatrix em_sigma(const EMatrix& a, long long q) {
    EMatrix out = a;
    for (auto& row : out)
        for (auto& e : row) e = es_sigma(e, q);
    return out;
}

}  // namespace fde
