#pragma once

#include <string>
#include <vector>

#include "fde/fq.hpp"
#include "fde/rational.hpp"

namespace fde {

struct DenomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One working field per session.  When a solver needs a root outside the
/// current field the tower is extended, an event is logged, and values are
/// lifted lazily through embed().
struct Session {
    int p = 2;
    int s = 1;  // q = p^s
    FieldSpecPtr qfield;  // the fixed F_q at the bottom of the tower
    FieldSpecPtr field;   // current working field
    long long max_denom = 4096;
    int max_field_deg = 64;
    int prec_t = 8;
    Rat prec_u = Rat(4);
    std::string branch = "max-val";
    unsigned long long seed = 0;
    mutable std::vector<std::string> events;

    long long q() const {
        long long out = 1;
        for (int i = 0; i < s; ++i) out *= p;
        return out;
    }

    static Session create(int p, int s) {
        Session S;
        S.p = p;
        S.s = s;
        S.qfield = make_field(p, s, 1);
        S.field = S.qfield;
        return S;
    }

    void log(const std::string& msg) const { events.push_back(msg); }

    /// Extend the working field by degree factor k (over the current field).
    void extend(int k) {
        if (field->deg * k > max_field_deg)
            throw FieldError("max-field-deg exceeded: " + std::to_string(field->deg * k));
        field = extend_field(field, k);
        log("tower-extension: working field degree now " + std::to_string(field->deg));
    }

    FieldElement lift(const FieldElement& x) const {
        if (x.spec().get() == field.get()) return x;
        return embed(x, field);
    }

    void check_denom(const Rat& r) const {
        if (r.denominator() > max_denom)
            throw DenomError("max-denom exceeded: " + to_string(r));
    }

    /// m-th root of x, extending the tower if needed.
    FieldElement root_or_extend(const FieldElement& x0, long long m) {
        FieldElement x = lift(x0);
        while (true) {
            if (auto r = nth_root(x, m)) return *r;
            if (2 * field->deg > max_field_deg)
                throw FieldError("max-field-deg exceeded while searching m-th root");
            extend(2);
            x = lift(x);
        }
    }

    /// All nonzero roots of a^m = c in the tower, extending until the full
    /// root set (m of them when gcd(m, p) = 1 and c != 0) is present.
    std::vector<FieldElement> all_power_roots(const FieldElement& c0, long long m) {
        FieldElement c = lift(c0);
        while (true) {
            std::vector<FieldElement> f((size_t)m + 1, fe_zero(field));
            f[0] = -c;
            f[(size_t)m] = fe_one(field);
            auto roots = poly_roots(f);
            if ((long long)roots.size() == m) return roots;
            if (2 * field->deg > max_field_deg) {
                if (!roots.empty()) return roots;
                throw FieldError("max-field-deg exceeded while splitting x^m = c");
            }
            extend(2);
            c = lift(c);
        }
    }

    /// Roots of gamma*x^{q^e} - x + beta = 0, extending the tower until at
    /// least one appears.
    std::vector<FieldElement> additive_roots_or_extend(int e, const FieldElement& gamma0,
                                                       const FieldElement& beta0) {
        FieldElement gamma = lift(gamma0), beta = lift(beta0);
        while (true) {
            auto roots = roots_additive(e, gamma, beta);
            if (!roots.empty()) return roots;
            if (2 * field->deg > max_field_deg)
                throw FieldError("no-residue-root: max-field-deg exceeded");
            extend(2);
            gamma = lift(gamma);
            beta = lift(beta);
        }
    }
};

}  // namespace fde
