#pragma once

#include "fde/phi.hpp"

namespace fde {

struct ValuationRow {
    long long m = 0;  // component offset from the reference
    long long i = 0;  // coefficient index
    Rat val;          // computed valuation (cap when the coefficient vanishes)
    Rat formula;      // expected value (equality) or lower bound
    bool equality = true;
    bool vanished = false;
    bool pass = false;
};

struct ValuationReport {
    bool ok = true;
    std::string first_fail;
    std::vector<ValuationRow> rows;
};

ValuationReport valuation_report(const std::vector<ValuationRow>& rows);

/// v(a_{ref+m,i}) = q^m / (q^{i d} (q^d - 1)) for the Carlitz solution.
Rat omega_val_formula(long long q, int d, long long m, long long i);
/// Lower bound -q^m (i/q^d + n/(q^d - 1)) for the polylogarithm coefficients.
Rat polylog_val_bound(long long q, int d, long long n, long long m, long long i);

struct OmegaResult {
    VadicElement omega;
    std::vector<std::string> branch_record;
    std::vector<ValuationRow> table;
};

/// Solves sigma(X) = (t - theta) X coefficientwise: index 0 by the cyclic
/// radical relation, higher indices by reduction to a single additive
/// equation per index followed by back-substitution around the components.
OmegaResult solve_omega(Session& S, const PlacePtr& place, int Nt, const Rat& stop);

struct PolylogResult {
    VadicElement L;
    RatTheta alpha;
    long long n = 1;
    std::vector<std::string> branch_record;
    std::vector<ValuationRow> table;
};

/// Solves sigma(X) = sigma(alpha) + X/(t - theta)^n.  Requires alpha regular
/// at every root of v.  Branching happens at index 0 only: MaxVal/MinVal pick
/// one root there, Enumerate returns one result per visible branch.
std::vector<PolylogResult> solve_polylog(Session& S, const PlacePtr& place, const RatTheta& alpha,
                                         long long n, int Nt, const Rat& stop,
                                         BranchPolicy policy);

struct ChainReport {
    bool ok = true;
    Rat overlap_cap = Rat(0);
    bool psi_theta_zero = false;
    std::vector<std::string> lines;
};

/// Rank-1 evaluation chain: for nu = 0..nu_max checks
///   psi(theta^{q^{d nu}})^{q^d}
///     = prod_{j<d} sigma^j(c) * (theta^{q^{d(nu+1)}} - theta^{q^j})^s
///       * psi(theta^{q^{d(nu+1)}})
/// below the overlapping caps, where det-form data (c, s) comes from a rank-1
/// matrix.  Raising the evaluated value to q^d twists the coefficients by d
/// steps, so the twist indices j run over 0..d-1 independently of nu.  tail
/// bounds the unseen coefficient valuations, as in eval_theta_power.
ChainReport abp_chain_check(const Session& S, const VadicElement& psi, const RatTheta& c,
                            long long s_exp, long long nu_max,
                            const std::function<Rat(long long)>& tail = nullptr);

struct CarlitzMotive {
    FundamentalPair pair;
    OmegaResult omega;
    std::vector<long long> exp_denoms;  // strictly growing q^{i d} (q^d - 1)
};

/// Phi = (t - theta) with det form (1, 1), Psi the solved Omega; verified.
CarlitzMotive carlitz_motive(Session& S, const PlacePtr& place, int Nt, const Rat& stop);

/// Binomial coefficient mod p via base-p digits.
long long binom_mod_p(long long n, long long k, long long p);

}  // namespace fde
