#pragma once

#include <map>
#include <vector>

#include "fde/fq.hpp"
#include "fde/rational.hpp"
#include "fde/session.hpp"

namespace fde {

/// Truncated generalized power series in the uniformizer u = theta - lambda_ref:
/// finitely many terms with rational exponents below an absolute precision cap.
/// Represents an unknown x with v(x - stored part) >= cap.
struct HahnSeries {
    std::map<Rat, FieldElement> terms;  // exponent -> nonzero coefficient, all < cap
    Rat cap = Rat(0);
    FieldSpecPtr spec;

    bool is_zero() const { return terms.empty(); }
    /// Least stored exponent; cap for the empty series.
    Rat val() const { return terms.empty() ? cap : terms.begin()->first; }
    const FieldElement& lead() const { return terms.begin()->second; }
};

HahnSeries hs_zero(const FieldSpecPtr& spec, const Rat& cap);
HahnSeries hs_mono(const FieldElement& c, const Rat& exp, const Rat& cap);
HahnSeries hs_const(const FieldElement& c, const Rat& cap);

/// Normalizes in place: drops zero coefficients and terms at/above cap,
/// checks the exponent-denominator bound.
void hs_normalize(const Session& S, HahnSeries& h);

HahnSeries hs_lift(const HahnSeries& h, const FieldSpecPtr& target);
/// Brings two series into the same (deeper) field.
void hs_unify(HahnSeries& a, HahnSeries& b);

HahnSeries hs_add(const Session& S, const HahnSeries& a, const HahnSeries& b);
HahnSeries hs_neg(const HahnSeries& a);
HahnSeries hs_sub(const Session& S, const HahnSeries& a, const HahnSeries& b);
HahnSeries hs_mul(const Session& S, const HahnSeries& a, const HahnSeries& b);
HahnSeries hs_scale(const HahnSeries& a, const FieldElement& c);
/// Multiplication by the exact monomial u^e (no cap loss beyond the shift).
HahnSeries hs_shift(const Session& S, const HahnSeries& a, const Rat& e);
HahnSeries hs_inv(const Session& S, const HahnSeries& a);
/// x -> x^{q^j}: exponents and cap scale by q^j, coefficients are raised to q^j.
HahnSeries hs_qpow(const Session& S, const HahnSeries& a, long long j);
HahnSeries hs_pow(const Session& S, const HahnSeries& a, long long n);  // n >= 0
HahnSeries hs_truncate(const HahnSeries& a, const Rat& cap);
bool hs_equal_below(const Session& S, const HahnSeries& a, const HahnSeries& b, const Rat& cutoff);

// ---------------------------------------------------------------------------
// Newton polygon
// ---------------------------------------------------------------------------

struct NewtonPolygon {
    std::vector<std::pair<long long, Rat>> points;     // (degree, valuation)
    std::vector<std::pair<Rat, long long>> hull;       // (slope, horizontal length)
};

/// Lower convex hull of (degree, valuation) points; root valuations of the
/// associated polynomial are the negated slopes with multiplicity = segment
/// length.  Requires >= 2 points with distinct x-coordinates.
NewtonPolygon newton_polygon(std::vector<std::pair<long long, Rat>> points);

// ---------------------------------------------------------------------------
// solvers
// ---------------------------------------------------------------------------

enum class BranchPolicy { MaxVal, MinVal, Enumerate };
BranchPolicy parse_branch(const std::string& s);

/// x with x^m = c to the propagated cap; leading coefficient is the canonical
/// m-th root (tower-extended if needed), tail by Hensel iteration.
HahnSeries solve_radical(Session& S, const HahnSeries& c, long long m);

struct ASBranch {
    HahnSeries root;
    Rat residual_val;                 // valuation of gamma*x^{q^e} - x + B for the emitted x
    std::vector<std::string> record;  // slope / residue-root choices
};

/// Roots of gamma*X^{q^e} - X + B = 0 as truncated Hahn series.  Policy
/// MaxVal/MinVal picks one branch (max resp. min root valuation at the leading
/// step, canonically least residue root); Enumerate returns all branches.
/// `stop`: refinement target; the forcing term is driven to valuation >= stop.
std::vector<ASBranch> solve_artin_schreier(Session& S, const HahnSeries& gamma, int e,
                                           const HahnSeries& B, BranchPolicy policy,
                                           const Rat& stop);

}  // namespace fde
