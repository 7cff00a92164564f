#pragma once

#include "fde/solvers.hpp"

namespace fde {

/// Outcome of a bounded-degree linear-relation search.  A relation stores one
/// theta-polynomial per input value (little-endian, coefficients in the chosen
/// subfield) and the residual valuation achieved by substitution; an
/// independence certificate records the rank computed at the stated bounds.
struct RelationCertificate {
    bool relation = false;
    std::vector<std::vector<FieldElement>> coeffs;
    Rat residual_val = Rat(0);
    long long D = 0;
    Rat cutoff = Rat(0);          // requested precision
    Rat effective_cutoff = Rat(0);  // rows actually used: exponents < this
    int rank = 0;
    int unknowns = 0;
    std::string note;
};

/// Searches for c = (P_1..P_k), P_j in F_{q^cdeg}[theta] of degree <= D, with
/// every stored coefficient of sum P_j(theta) y_j at exponents < cutoff equal
/// to zero (theta = lambda_ref + u).  The F_p kernel is computed exactly; a
/// nontrivial kernel yields the lexicographically least vector, re-verified by
/// substitution.  Rows above the achieved caps are unavailable: an
/// independence verdict is then certified at the effective cutoff only, and a
/// relation that cannot be verified to the requested cutoff is an error.
RelationCertificate kernel_search(Session& S, const PlacePtr& place,
                                  const std::vector<HahnSeries>& values, long long D,
                                  const Rat& cutoff, int cdeg = 1, long long size_cap = 4096);

/// The rank r+1 polylogarithm module: Phi has (t-theta)^n in the corner,
/// sigma(alpha_j) (t-theta)^n down the first column and an identity tail; Psi
/// has first column (Omega^n, Omega^n L_j) and an identity tail.  Verified on
/// construction.
struct PolylogMotive {
    FundamentalPair pair;
    VadicElement omega_n;
    VadicElement omega_minus_n;
    std::vector<VadicElement> L;
    std::vector<std::vector<std::string>> branch_records;
};

PolylogMotive build_polylog_motive(Session& S, const PlacePtr& place, long long n,
                                   const std::vector<RatTheta>& alphas, int Nt, const Rat& stop,
                                   BranchPolicy policy = BranchPolicy::MaxVal);

/// Affine-linear polynomial c_0 X_0 + ... + c_r X_r + cst over the exact base
/// ring.
struct LinPoly {
    std::vector<ExactScalar> coef;
    ExactScalar cst;
};

ExactScalar lp_eval(const LinPoly& f, const std::vector<ExactScalar>& x);

/// G_i = (b_0 - 1) F_i(X_1..X_r) - F_i(b_1..b_r)(X_0 - 1) for the linear forms
/// F_i = sum_j c[i][j] X_j.  Requires b_0 != 1; every G_i vanishes at
/// (X_0, X_j) = (1, 0).
std::vector<LinPoly> gamma_polys(const std::vector<std::vector<ExactScalar>>& c,
                                 const std::vector<ExactScalar>& b);

/// H_i = G_i - X_0 f_i' with f_i' = G_i(f_0..f_r) f_0^{-1}; H_i(f) = 0
/// exactly.  Requires f_0 invertible.
std::vector<LinPoly> z_polys(const std::vector<LinPoly>& G, const std::vector<ExactScalar>& f);

struct ZPointReport {
    bool ok = true;
    std::vector<Rat> residuals;  // per polynomial: least stored residual valuation, or its cap
    std::vector<std::string> lines;
};

/// Evaluates each H_i at (X_0, X_j) = (Omega^n, Omega^n L_j), rescales by
/// Omega^{-n} and reports the residual valuations; pass iff every stored
/// residual term sits at or above the cutoff.
ZPointReport verify_Z_point(Session& S, const std::vector<LinPoly>& H,
                            const VadicElement& omega_n, const std::vector<VadicElement>& L,
                            const Rat& cutoff);

struct DimBoundsReport {
    int r = 0;
    int s = 0;
    int upper = 0;  // r + 2 - s
    int lower = 1;  // certified at the certificate's bounds only
    bool conditional = true;
    std::vector<std::string> lines;
};

/// Bookkeeping for the span of {L_1..L_r, Omega^{-n}, 1}: the upper bound
/// r+2-s from s verified relations, the certified lower bound from an optional
/// independence certificate, and the transcendence-degree bracket.  Never
/// unconditional: bounded-degree independence is not independence.
DimBoundsReport dim_bounds_report(int r, int s, const RelationCertificate* indep);

/// s x m matrices over a product of field extensions of a common coefficient
/// field E = F_{(p^sdeg)^edeg}; component l lives in the extension of E of
/// degree mdeg[l].
struct ProductFieldMatrix {
    int p = 2;
    int sdeg = 1;   // q = p^sdeg
    int edeg = 1;   // [E : F_q]
    FieldSpecPtr E;
    std::vector<FieldSpecPtr> fields;
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::vector<FieldElement>>> comp;  // [l][row][col]
};

ProductFieldMatrix pf_make(int p, int sdeg, int edeg, const std::vector<int>& mdeg, int rows,
                           int cols);
/// Componentwise full-rank random instance from a seeded generator.
ProductFieldMatrix pf_random(int p, int sdeg, int edeg, const std::vector<int>& mdeg, int rows,
                             int cols, unsigned long long seed);

struct PfReduction {
    std::vector<std::vector<FieldElement>> B;                   // rows x rows over E
    std::vector<std::vector<std::vector<FieldElement>>> A;      // per component, cols x cols
    ProductFieldMatrix normal;                                  // B D A, identity on top
};

/// Left-multiplies by B in GL_rows(E) (shared across components) and
/// right-multiplies per component by A_l in GL_cols so every component of the
/// result has the identity as its top cols x cols block.  Row-operation
/// constants are scanned in canonical order starting from the seed; requires
/// #E > number of components and componentwise rank = cols.
PfReduction pf_reduce(const ProductFieldMatrix& D, unsigned long long seed = 0);

/// B D A recomputed from scratch (for independent verification).
ProductFieldMatrix pf_apply(const ProductFieldMatrix& D,
                            const std::vector<std::vector<FieldElement>>& B,
                            const std::vector<std::vector<std::vector<FieldElement>>>& A);

}  // namespace fde
