#pragma once

#include "fde/vadic.hpp"

namespace fde {

/// Square matrix over the exact base ring acting as the Frobenius twist of a
/// module basis.  The motive flag pins det = c (t - theta)^s exactly.
struct PhiMatrix {
    int r = 1;
    EMatrix m;
    bool motive = false;
    RatTheta c;
    long long s = 0;
};

PhiMatrix phi_make(const EMatrix& m);
/// Sets the (c, s) determinant form after checking det m = c (t-theta)^s
/// exactly; throws FieldError when the identity fails.
void phi_set_motive(PhiMatrix& phi, const RatTheta& c, long long s);

/// r x r matrix of truncated v-adic elements.
using PsiMatrix = std::vector<std::vector<VadicElement>>;

PsiMatrix pm_from_element(const VadicElement& x);
PsiMatrix pm_identity(const Session& S, const PlacePtr& place, int r, int Nt, const Rat& cap);
PsiMatrix pm_mul(const Session& S, const PsiMatrix& a, const PsiMatrix& b);
PsiMatrix pm_sigma(const Session& S, const PsiMatrix& a);
VadicElement pm_det(const Session& S, const PsiMatrix& a);
/// Gauss-Jordan over truncated elements; throws PrecisionError when no
/// invertible pivot is visible.
PsiMatrix pm_inv(const Session& S, const PsiMatrix& a);

/// Entrywise expansion of an exact matrix at the place.
PsiMatrix expand_phi(const Session& S, const PlacePtr& place, const PhiMatrix& phi, int Nt,
                     const Rat& cap);

struct FundamentalPair {
    PhiMatrix phi;
    PsiMatrix psi;
    Rat verified_cap = Rat(0);
    std::string det_witness;
};

struct VerifyReport {
    bool ok = false;
    std::optional<Rat> min_residual;  // least stored residual valuation, if any survives
    Rat verified_cap = Rat(0);
    std::string worst;
};

/// Checks sigma(Psi) - expand(Phi) Psi entrywise.  Success means every
/// residual entry has no stored term below min(cutoff, its propagated cap);
/// verified_cap is the least such floor.  Also certifies det Psi has a visible
/// leading term.  Default cutoff is unbounded (full stored precision).
VerifyReport verify_fundamental(const Session& S, const PhiMatrix& phi, const PsiMatrix& psi,
                                const Rat& cutoff = Rat(1000000000LL));
/// verify_fundamental + packaging; throws FieldError on failure.
FundamentalPair make_pair(const Session& S, const PhiMatrix& phi, const PsiMatrix& psi,
                          const Rat& cutoff = Rat(1000000000LL));

FundamentalPair direct_sum(const Session& S, const FundamentalPair& a, const FundamentalPair& b);
/// The constructors below re-verify their output; `cutoff` bounds the floor
/// the verification is required to reach, as in verify_fundamental.
FundamentalPair kronecker(const Session& S, const FundamentalPair& a, const FundamentalPair& b,
                          const Rat& cutoff = Rat(1000000000LL));
FundamentalPair dual(const Session& S, const FundamentalPair& a,
                     const Rat& cutoff = Rat(1000000000LL));
/// Phi' = sigma(M) Phi M^{-1}, Psi' = M Psi.
FundamentalPair base_change(const Session& S, const FundamentalPair& a, const EMatrix& M,
                            const Rat& cutoff = Rat(1000000000LL));

struct AmbiguityResult {
    PsiMatrix delta;
    bool fixed = false;
    std::string witness;
};
/// delta = Psi^{-1} Psi' with an entrywise sigma-fixedness verdict; Psi' is
/// verified against the same Phi first.
AmbiguityResult ambiguity(const Session& S, const FundamentalPair& a, const PsiMatrix& psi2);

/// Right action by a sigma-fixed invertible gamma: (Phi, Psi gamma).  Throws
/// FieldError when gamma is not sigma-fixed.
FundamentalPair gamma_act(const Session& S, const FundamentalPair& a, const PsiMatrix& gamma);

}  // namespace fde
