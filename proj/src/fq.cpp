#include "fde/fq.hpp"

#include <algorithm>
#include <cassert>

namespace fde {
namespace {

using Vec = std::vector<int>;

int pmod(int a, int p) {
    int r = a % p;
    return r < 0 ? r + p : r;
}

int pinv(int a, int p) {
    // extended Euclid in F_p
    int t = 0, nt = 1, r = p, nr = pmod(a, p);
    while (nr != 0) {
        int q = r / nr;
        int tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw FieldError("pinv: not invertible");
    return pmod(t, p);
}

Vec& vtrim(Vec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

Vec vmul(const Vec& a, const Vec& b, int p) {
    if (a.empty() || b.empty()) return {};
    Vec out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = pmod(out[i + j] + a[i] * b[j], p);
    }
    return vtrim(out);
}

// a mod f, f monic
Vec vmod(Vec a, const Vec& f, int p) {
    vtrim(a);
    size_t n = f.size() - 1;
    while (a.size() > n) {
        int lead = a.back();
        size_t shift = a.size() - 1 - n;
        if (lead != 0)
            for (size_t i = 0; i <= n; ++i)
                a[shift + i] = pmod(a[shift + i] - lead * f[i], p);
        a.pop_back();
        vtrim(a);
    }
    return a;
}

Vec vsub(const Vec& a, const Vec& b, int p) {
    Vec out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        int x = i < a.size() ? a[i] : 0;
        int y = i < b.size() ? b[i] : 0;
        out[i] = pmod(x - y, p);
    }
    return vtrim(out);
}

Vec vgcd(Vec a, Vec b, int p) {
    vtrim(a);
    vtrim(b);
    while (!b.empty()) {
        int li = pinv(b.back(), p);
        Vec bm(b);
        for (auto& c : bm) c = pmod(c * li, p);
        Vec r = vmod(a, bm, p);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        int li = pinv(a.back(), p);
        for (auto& c : a) c = pmod(c * li, p);
    }
    return a;
}

Vec vpowmod(Vec base, unsigned long long e, const Vec& fmonic, int p) {
    Vec out{1};
    base = vmod(std::move(base), fmonic, p);
    while (e > 0) {
        if (e & 1ull) out = vmod(vmul(out, base, p), fmonic, p);
        base = vmod(vmul(base, base, p), fmonic, p);
        e >>= 1;
    }
    return out;
}

// X^{p^k} mod f
Vec x_frob(int k, const Vec& f, int p) {
    Vec r{0, 1};
    for (int i = 0; i < k; ++i) r = vpowmod(r, (unsigned long long)p, f, p);
    return r;
}

}  // namespace

bool is_irreducible(int p, const std::vector<int>& f) {
    Vec g(f);
    vtrim(g);
    int n = (int)g.size() - 1;
    if (n < 1) return false;
    if (n == 1) return true;
    if (g[0] == 0) return false;  // divisible by X
    // X^{p^n} == X mod f
    Vec xpn = x_frob(n, g, p);
    Vec x{0, 1};
    if (vsub(xpn, x, p) != Vec{}) return false;
    // gcd(X^{p^{n/l}} - X, f) = 1 for every prime l | n
    int m = n;
    for (int l = 2; l * l <= m; ++l) {
        if (m % l) continue;
        Vec d = vsub(x_frob(n / l, g, p), x, p);
        if (vgcd(g, d, p).size() != 1) return false;
        while (m % l == 0) m /= l;
    }
    if (m > 1 && m < n) {
        Vec d = vsub(x_frob(n / m, g, p), x, p);
        if (vgcd(g, d, p).size() != 1) return false;
    }
    if (m == n) {  // n prime
        Vec d = vsub(x_frob(1, g, p), x, p);
        if (vgcd(g, d, p).size() != 1) return false;
    }
    return true;
}

std::vector<int> find_irreducible(int p, int n) {
    if (n < 1) throw FieldError("find_irreducible: degree must be >= 1");
    if (n == 1) return {0, 1};  // X
    // scan monic candidates in canonical (c_0 most significant) order
    Vec c(n, 0);
    c[0] = 1;  // constant term 0 is always reducible for n >= 2
    while (true) {
        Vec f(c);
        f.push_back(1);
        if (is_irreducible(p, f)) return f;
        // odometer increment, c_{n-1} fastest
        int i = n - 1;
        while (i >= 0 && c[i] == p - 1) c[i--] = 0;
        if (i < 0) throw FieldError("find_irreducible: exhausted candidates");
        ++c[i];
    }
}

FieldElement::FieldElement(FieldSpecPtr spec, std::vector<int> coeffs)
    : spec_(std::move(spec)), c_(std::move(coeffs)) {
    c_.resize(spec_->deg, 0);
    for (auto& x : c_) x = pmod(x, spec_->p);
}

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](int x) { return x == 0; });
}

bool FieldElement::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](int x) { return x == 0; });
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    if (spec_.get() != o.spec_.get()) throw FieldError("field mismatch in +");
    Vec out(c_);
    for (size_t i = 0; i < out.size(); ++i) out[i] = pmod(out[i] + o.c_[i], spec_->p);
    return FieldElement(spec_, std::move(out));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    if (spec_.get() != o.spec_.get()) throw FieldError("field mismatch in -");
    Vec out(c_);
    for (size_t i = 0; i < out.size(); ++i) out[i] = pmod(out[i] - o.c_[i], spec_->p);
    return FieldElement(spec_, std::move(out));
}

FieldElement FieldElement::operator-() const {
    Vec out(c_);
    for (auto& x : out) x = pmod(-x, spec_->p);
    return FieldElement(spec_, std::move(out));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    if (spec_.get() != o.spec_.get()) throw FieldError("field mismatch in *");
    Vec prod = vmod(vmul(c_, o.c_, spec_->p), spec_->defpoly, spec_->p);
    return FieldElement(spec_, std::move(prod));
}

bool FieldElement::operator==(const FieldElement& o) const {
    return spec_.get() == o.spec_.get() && c_ == o.c_;
}

FieldElement FieldElement::inv() const {
    if (is_zero()) throw FieldError("inverse of zero");
    // extended Euclid of c and defpoly over F_p
    int p = spec_->p;
    Vec r0(spec_->defpoly), r1(c_);
    vtrim(r1);
    Vec t0{}, t1{1};
    while (!r1.empty()) {
        // divide r0 by r1
        Vec q;
        Vec rem(r0);
        vtrim(rem);
        int li = pinv(r1.back(), p);
        while (rem.size() >= r1.size() && !rem.empty()) {
            int coef = pmod((int)(rem.back() * li), p);
            size_t shift = rem.size() - r1.size();
            if (q.size() < shift + 1) q.resize(shift + 1, 0);
            q[shift] = coef;
            for (size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] = pmod(rem[shift + i] - coef * r1[i], p);
            vtrim(rem);
        }
        Vec t2 = vsub(t0, vmul(q, t1, p), p);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t2;
    }
    // r0 = gcd, a nonzero constant since defpoly is irreducible
    int gi = pinv(r0.empty() ? 0 : r0[0], p);
    for (auto& x : t0) x = pmod(x * gi, p);
    return FieldElement(spec_, vmod(std::move(t0), spec_->defpoly, p));
}

FieldElement FieldElement::pow(unsigned long long e) const {
    FieldElement out = fe_one(spec_);
    FieldElement b = *this;
    while (e > 0) {
        if (e & 1ull) out = out * b;
        b = b * b;
        e >>= 1;
    }
    return out;
}

std::string FieldElement::str() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c_[i]);
    }
    return s + "]";
}

FieldElement fe_zero(const FieldSpecPtr& spec) { return FieldElement(spec, {}); }

FieldElement fe_one(const FieldSpecPtr& spec) { return FieldElement(spec, {1}); }

FieldElement fe_from_int(const FieldSpecPtr& spec, long long n) {
    return FieldElement(spec, {(int)pmod((int)(n % spec->p), spec->p)});
}

FieldElement fe_gen(const FieldSpecPtr& spec) {
    if (spec->deg == 1) {
        // generator of F_p[X]/(X - c) is the class of X, i.e. the root c
        return FieldElement(spec, {pmod(-spec->defpoly[0], spec->p)});
    }
    return FieldElement(spec, {0, 1});
}

bool canonical_less(const FieldElement& a, const FieldElement& b) {
    return a.coeffs() < b.coeffs();  // c_0 most significant
}

FieldElement element_at(const FieldSpecPtr& spec, unsigned long long index) {
    Vec c(spec->deg, 0);
    for (int i = spec->deg - 1; i >= 0; --i) {
        c[i] = (int)(index % spec->p);
        index /= spec->p;
    }
    return FieldElement(spec, std::move(c));
}

unsigned __int128 field_size(const FieldSpecPtr& spec) {
    unsigned __int128 n = 1;
    const unsigned __int128 cap = ((unsigned __int128)1) << 126;
    for (int i = 0; i < spec->deg; ++i) {
        if (n > cap / (unsigned)spec->p) throw FieldError("field too large for enumeration order");
        n *= (unsigned)spec->p;
    }
    return n;
}

FieldSpecPtr make_field(int p, int s, int M) {
    auto spec = std::make_shared<FieldSpec>();
    spec->p = p;
    spec->s = s;
    spec->deg = s * M;
    spec->defpoly = find_irreducible(p, spec->deg);
    return spec;
}

// ---------------------------------------------------------------------------
// polynomial arithmetic over a field, for root finding
// ---------------------------------------------------------------------------

namespace {

using PolyF = std::vector<FieldElement>;

PolyF& ftrim(PolyF& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

PolyF fmul(const PolyF& a, const PolyF& b) {
    if (a.empty() || b.empty()) return {};
    const auto& spec = a[0].spec();
    PolyF out(a.size() + b.size() - 1, fe_zero(spec));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    }
    return ftrim(out);
}

// a mod f with f monic
PolyF fmod(PolyF a, const PolyF& f) {
    ftrim(a);
    size_t n = f.size() - 1;
    while (a.size() > n) {
        FieldElement lead = a.back();
        size_t shift = a.size() - 1 - n;
        if (!lead.is_zero())
            for (size_t i = 0; i <= n; ++i) a[shift + i] = a[shift + i] - lead * f[i];
        a.pop_back();
        ftrim(a);
    }
    return a;
}

PolyF fsub(const PolyF& a, const PolyF& b) {
    const auto& spec = a.empty() ? b[0].spec() : a[0].spec();
    PolyF out(std::max(a.size(), b.size()), fe_zero(spec));
    for (size_t i = 0; i < out.size(); ++i) {
        if (i < a.size()) out[i] = out[i] + a[i];
        if (i < b.size()) out[i] = out[i] - b[i];
    }
    return ftrim(out);
}

PolyF fmonic(PolyF a) {
    ftrim(a);
    if (a.empty()) return a;
    FieldElement li = a.back().inv();
    for (auto& c : a) c = c * li;
    return a;
}

PolyF fgcd(PolyF a, PolyF b) {
    ftrim(a);
    ftrim(b);
    while (!b.empty()) {
        PolyF bm = fmonic(b);
        PolyF r = fmod(a, bm);
        a = b;
        b = r;
    }
    return fmonic(a);
}

PolyF fpowmod(PolyF base, unsigned __int128 e, const PolyF& fmonic_) {
    const auto& spec = fmonic_[0].spec();
    PolyF out{fe_one(spec)};
    base = fmod(std::move(base), fmonic_);
    while (e > 0) {
        if (e & 1) out = fmod(fmul(out, base), fmonic_);
        base = fmod(fmul(base, base), fmonic_);
        e >>= 1;
    }
    return out;
}

void split_roots(const PolyF& g, std::vector<FieldElement>& out) {
    if (g.size() <= 1) return;
    const auto& spec = g[0].spec();
    if (g.size() == 2) {
        out.push_back(-(g[0] * g[1].inv()));
        return;
    }
    int p = spec->p;
    unsigned __int128 P = field_size(spec);
    const unsigned long long scan_limit = 1ull << 20;
    if (p % 2 == 1) {
        for (unsigned long long idx = 0; idx < scan_limit; ++idx) {
            FieldElement delta = element_at(spec, idx);
            PolyF shifted{delta, fe_one(spec)};
            PolyF w = fpowmod(shifted, (P - 1) / 2, g);
            w = fsub(w, {fe_one(spec)});
            PolyF d = fgcd(g, w);
            if (d.size() > 1 && d.size() < g.size()) {
                split_roots(d, out);
                PolyF q = fmonic(g);
                // divide g by d exactly
                PolyF rem(q), quot;
                while (rem.size() >= d.size() && !rem.empty()) {
                    FieldElement coef = rem.back();
                    size_t shift = rem.size() - d.size();
                    if (quot.size() < shift + 1) quot.resize(shift + 1, fe_zero(spec));
                    quot[shift] = coef;
                    for (size_t i = 0; i < d.size(); ++i)
                        rem[shift + i] = rem[shift + i] - coef * d[i];
                    ftrim(rem);
                }
                split_roots(quot, out);
                return;
            }
        }
    } else {
        for (unsigned long long idx = 1; idx < scan_limit; ++idx) {
            FieldElement beta = element_at(spec, idx);
            // trace polynomial of beta*X mod g
            PolyF bx{fe_zero(spec), beta};
            PolyF term = fmod(bx, g);
            PolyF tr = term;
            for (int k = 1; k < spec->deg; ++k) {
                term = fmod(fmul(term, term), g);
                tr = fsub(tr, PolyF{});  // no-op keeps sizes trimmed
                // accumulate
                PolyF sum(std::max(tr.size(), term.size()), fe_zero(spec));
                for (size_t i = 0; i < sum.size(); ++i) {
                    if (i < tr.size()) sum[i] = sum[i] + tr[i];
                    if (i < term.size()) sum[i] = sum[i] + term[i];
                }
                ftrim(sum);
                tr = sum;
            }
            PolyF d = fgcd(g, tr);
            if (d.size() > 1 && d.size() < g.size()) {
                split_roots(d, out);
                PolyF rem = fmonic(g), quot;
                while (rem.size() >= d.size() && !rem.empty()) {
                    FieldElement coef = rem.back();
                    size_t shift = rem.size() - d.size();
                    if (quot.size() < shift + 1) quot.resize(shift + 1, fe_zero(spec));
                    quot[shift] = coef;
                    for (size_t i = 0; i < d.size(); ++i)
                        rem[shift + i] = rem[shift + i] - coef * d[i];
                    ftrim(rem);
                }
                split_roots(quot, out);
                return;
            }
        }
    }
    throw FieldError("split_roots: deterministic scan exhausted");
}

}  // namespace

std::vector<FieldElement> poly_roots(std::vector<FieldElement> f) {
    ftrim(f);
    if (f.empty()) throw FieldError("poly_roots of zero polynomial");
    if (f.size() == 1) return {};
    const auto& spec = f[0].spec();
    PolyF fm = fmonic(f);
    // X^{p^N} mod f by iterated p-th powers
    PolyF r{fe_zero(spec), fe_one(spec)};
    r = fmod(std::move(r), fm);
    for (int k = 0; k < spec->deg; ++k) r = fpowmod(r, (unsigned __int128)spec->p, fm);
    PolyF g = fgcd(fm, fsub(r, PolyF{fe_zero(spec), fe_one(spec)}));
    std::vector<FieldElement> out;
    split_roots(g, out);
    std::sort(out.begin(), out.end(), canonical_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FieldSpecPtr extend_field(const FieldSpecPtr& spec, int k) {
    if (k < 1) throw FieldError("extend_field: degree must be >= 1");
    auto ext = std::make_shared<FieldSpec>();
    ext->p = spec->p;
    ext->s = spec->s;
    ext->deg = spec->deg * k;
    ext->defpoly = find_irreducible(spec->p, ext->deg);
    ext->base = spec;
    FieldSpecPtr cext = ext;
    // least root of the base defining polynomial in the new field
    PolyF f;
    for (int c : spec->defpoly) f.push_back(fe_from_int(cext, c));
    auto roots = poly_roots(f);
    if (roots.empty()) throw FieldError("extend_field: base polynomial has no root");
    ext->base_gen_image = roots.front().coeffs();
    return cext;
}

namespace {

// image of src's generator inside target; follows recorded tower links first
FieldElement gen_image(const FieldSpecPtr& src, const FieldSpecPtr& target) {
    if (src.get() == target.get()) return fe_gen(target);
    {
        std::lock_guard<std::mutex> lk(target->mu);
        auto it = target->embed_cache.find(src.get());
        if (it != target->embed_cache.end()) return FieldElement(target, it->second);
    }
    FieldElement img = fe_zero(target);
    bool found = false;
    if (target->base && target->base->deg % src->deg == 0) {
        // map through the recorded subfield so tower embeddings compose
        FieldElement in_base = gen_image(src, target->base);
        FieldElement g(target, target->base_gen_image);
        FieldElement acc = fe_zero(target);
        const auto& bc = in_base.coeffs();
        for (int i = (int)bc.size() - 1; i >= 0; --i)
            acc = acc * g + fe_from_int(target, bc[i]);
        img = acc;
        found = true;
    }
    if (!found) {
        PolyF f;
        for (int c : src->defpoly) f.push_back(fe_from_int(target, c));
        auto roots = poly_roots(f);
        if (roots.empty()) throw FieldError("embed: no root of subfield polynomial");
        img = roots.front();
    }
    {
        std::lock_guard<std::mutex> lk(target->mu);
        target->embed_cache.emplace(src.get(), img.coeffs());
    }
    return img;
}

}  // namespace

FieldElement embed(const FieldElement& x, const FieldSpecPtr& target) {
    if (x.spec().get() == target.get()) return x;
    if (target->deg % x.spec()->deg != 0)
        throw FieldError("embed: source degree does not divide target degree");
    FieldElement g = gen_image(x.spec(), target);
    FieldElement acc = fe_zero(target);
    const auto& c = x.coeffs();
    for (int i = (int)c.size() - 1; i >= 0; --i) acc = acc * g + fe_from_int(target, c[i]);
    return acc;
}

FieldElement frobenius_power(const FieldElement& x, long long j) {
    const auto& spec = x.spec();
    long long M = spec->M();
    long long jm = ((j % M) + M) % M;
    FieldElement out = x;
    long long steps = jm * spec->s;  // p-power applications
    for (long long i = 0; i < steps; ++i) out = out.pow((unsigned long long)spec->p);
    return out;
}

std::optional<FieldElement> nth_root(const FieldElement& x, long long m) {
    const auto& spec = x.spec();
    if (m < 1 || m % spec->p == 0) throw FieldError("nth_root: need m >= 1 coprime to p");
    if (x.is_zero()) return fe_zero(spec);
    if (m == 1) return x;
    PolyF f((size_t)m + 1, fe_zero(spec));
    f[0] = -x;
    f[(size_t)m] = fe_one(spec);
    auto roots = poly_roots(f);
    if (roots.empty()) return std::nullopt;
    return roots.front();
}

std::vector<FieldElement> roots_additive(int e, const FieldElement& gamma,
                                         const FieldElement& beta) {
    if (gamma.is_zero()) throw FieldError("roots_additive: gamma must be nonzero");
    const auto& spec = gamma.spec();
    int p = spec->p, N = spec->deg;
    // F_p-linearization of x -> gamma*x^{q^e} - x
    std::vector<Vec> A(N, Vec(N, 0));
    for (int j = 0; j < N; ++j) {
        Vec basis(N, 0);
        basis[j] = 1;
        FieldElement bj(spec, basis);
        FieldElement img = gamma * frobenius_power(bj, e) - bj;
        for (int i = 0; i < N; ++i) A[i][j] = img.coeffs()[i];
    }
    Vec rhs(N);
    for (int i = 0; i < N; ++i) rhs[i] = pmod(-beta.coeffs()[i], p);
    // Gaussian elimination with augmented column
    std::vector<Vec> M(N, Vec(N + 1, 0));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) M[i][j] = A[i][j];
        M[i][N] = rhs[i];
    }
    std::vector<int> pivot_col(N, -1);
    int row = 0;
    for (int col = 0; col < N && row < N; ++col) {
        int pr = -1;
        for (int r = row; r < N; ++r)
            if (M[r][col] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(M[row], M[pr]);
        int li = pinv(M[row][col], p);
        for (int c = col; c <= N; ++c) M[row][c] = pmod(M[row][c] * li, p);
        for (int r = 0; r < N; ++r) {
            if (r == row || M[r][col] == 0) continue;
            int f = M[r][col];
            for (int c = col; c <= N; ++c) M[r][c] = pmod(M[r][c] - f * M[row][c], p);
        }
        pivot_col[row] = col;
        ++row;
    }
    for (int r = row; r < N; ++r)
        if (M[r][N] != 0) return {};  // inconsistent: no solutions
    // particular solution
    Vec part(N, 0);
    for (int r = 0; r < row; ++r) part[pivot_col[r]] = M[r][N];
    // kernel basis from free columns
    std::vector<int> is_pivot(N, 0);
    for (int r = 0; r < row; ++r) is_pivot[pivot_col[r]] = 1;
    std::vector<Vec> kernel;
    for (int col = 0; col < N; ++col) {
        if (is_pivot[col]) continue;
        Vec k(N, 0);
        k[col] = 1;
        for (int r = 0; r < row; ++r) k[pivot_col[r]] = pmod(-M[r][col], p);
        kernel.push_back(k);
    }
    if (kernel.size() > 24) throw FieldError("roots_additive: kernel unexpectedly large");
    std::vector<FieldElement> out;
    unsigned long long combos = 1;
    for (size_t i = 0; i < kernel.size(); ++i) combos *= (unsigned long long)p;
    for (unsigned long long idx = 0; idx < combos; ++idx) {
        Vec sol(part);
        unsigned long long t = idx;
        for (const auto& k : kernel) {
            int coef = (int)(t % p);
            t /= p;
            if (coef)
                for (int i = 0; i < N; ++i) sol[i] = pmod(sol[i] + coef * k[i], p);
        }
        out.emplace_back(spec, sol);
    }
    std::sort(out.begin(), out.end(), canonical_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace fde
