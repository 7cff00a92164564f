#pragma once

#include <functional>
#include <map>
#include <memory>

#include "fde/exact.hpp"
#include "fde/hahn.hpp"

namespace fde {

/// A place v of F_q[t]: monic irreducible of degree d, with its roots ordered
/// so that lambda_l^q = lambda_{l+1 mod d}.  Component 0 is the reference
/// component; all coefficient series live in the u = theta - lambda_0 model.
struct PlaceData {
    int d = 1;
    std::vector<FieldElement> v;       // over the session F_q, little-endian monic
    std::vector<FieldElement> lambda;  // in the working field at creation time
    int ref = 0;
};
using PlacePtr = std::shared_ptr<const PlaceData>;

/// Checks monicity/irreducibility over F_q, extends the session tower to hold
/// the roots, and fixes the Frobenius-coherent root ordering.
PlacePtr make_place(Session& S, const std::vector<FieldElement>& vcoeffs);

/// Truncated element of the v-adic product ring: for each component l a
/// Laurent expansion sum_i a_{l,i} (t-lambda_l)^i whose coefficients a_{l,i}
/// are Hahn series at the reference place.  Indices >= Nt are unknown.
struct VadicElement {
    PlacePtr place;
    int Nt = 8;
    std::vector<std::map<long long, HahnSeries>> comp;
};

VadicElement ve_zero(const PlacePtr& place, int Nt, const FieldSpecPtr& spec, const Rat& cap);
VadicElement ve_one(const Session& S, const PlacePtr& place, int Nt, const Rat& cap);
/// The element of the base field embedded diagonally: every component is the
/// i = 0 constant h.
VadicElement ve_scalar(const PlacePtr& place, int Nt, const HahnSeries& h);

void ve_normalize(const Session& S, VadicElement& x);
VadicElement ve_add(const Session& S, const VadicElement& a, const VadicElement& b);
VadicElement ve_sub(const Session& S, const VadicElement& a, const VadicElement& b);
VadicElement ve_neg(const VadicElement& a);
VadicElement ve_mul(const Session& S, const VadicElement& a, const VadicElement& b);
VadicElement ve_scale(const Session& S, const VadicElement& a, const HahnSeries& c);
VadicElement ve_inv(const Session& S, const VadicElement& a);
VadicElement ve_pow(const Session& S, const VadicElement& a, long long n);

/// sigma: component l of the output is the termwise q-power of component l-1.
VadicElement ve_sigma(const Session& S, const VadicElement& a);

/// Least stored coefficient index over all components; Nt when nothing stored.
long long ve_imin(const VadicElement& a);
/// Minimal valuation of any stored nonzero coefficient; nullopt when all zero.
std::optional<Rat> ve_min_val(const VadicElement& a);
/// Minimal coefficient cap.
Rat ve_min_cap(const VadicElement& a);
bool ve_is_zero(const VadicElement& a);

struct SigmaFixedVerdict {
    bool fixed = true;
    std::string witness;
};
/// True iff every stored coefficient is a theta-free constant and
/// a_{l,i}^q = a_{l+1,i} cyclically.
SigmaFixedVerdict is_sigma_fixed(const Session& S, const VadicElement& a);

struct ThetaEval {
    HahnSeries value;
    Rat cap = Rat(0);     // achieved absolute precision of value
    bool diverged = false;
    std::string note;
};
/// Substitutes t = theta^{q^{d nu}} in the reference component:
/// sum_i a_{ref,i} u^{i q^{d nu}}.  `tail_val(i)` must lower-bound v(a_{ref,i})
/// for i >= Nt; when absent the tail is taken as absent (exact elements).
ThetaEval eval_theta_power(const Session& S, const VadicElement& x, long long nu,
                           const std::function<Rat(long long)>& tail_val = nullptr);

/// Componentwise Taylor/Laurent expansion of an exact scalar: substitute
/// t = lambda_l + w and theta = lambda_ref + u.
VadicElement expand_exact(const Session& S, const PlacePtr& place, const ExactScalar& x, int Nt,
                          const Rat& cap);

}  // namespace fde
