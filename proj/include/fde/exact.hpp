#pragma once

#include <vector>

#include "fde/hahn.hpp"

namespace fde {

/// Polynomial in theta over F_q, little-endian; empty vector = 0.
using ThetaPoly = std::vector<FieldElement>;

ThetaPoly tp_trim(ThetaPoly f);
bool tp_is_zero(const ThetaPoly& f);
int tp_deg(const ThetaPoly& f);  // -1 for 0
ThetaPoly tp_add(const ThetaPoly& a, const ThetaPoly& b);
ThetaPoly tp_sub(const ThetaPoly& a, const ThetaPoly& b);
ThetaPoly tp_neg(const ThetaPoly& a);
ThetaPoly tp_mul(const ThetaPoly& a, const ThetaPoly& b);
ThetaPoly tp_monic(const ThetaPoly& a);
/// (quotient, remainder) by a monic-normalizable divisor.
std::pair<ThetaPoly, ThetaPoly> tp_divmod(const ThetaPoly& a, const ThetaPoly& b);
ThetaPoly tp_gcd(ThetaPoly a, ThetaPoly b);
FieldElement tp_eval(const ThetaPoly& f, const FieldElement& x);

/// Rational function in theta over F_q: num/den with den monic, gcd cancelled.
struct RatTheta {
    FieldSpecPtr spec;  // coefficient field (the session F_q)
    ThetaPoly num, den;

    bool is_zero() const { return num.empty(); }
};

RatTheta rt_make(const FieldSpecPtr& spec, ThetaPoly num, ThetaPoly den);
RatTheta rt_zero(const FieldSpecPtr& spec);
RatTheta rt_one(const FieldSpecPtr& spec);
RatTheta rt_int(const FieldSpecPtr& spec, long long n);
RatTheta rt_const(const FieldElement& c);
RatTheta rt_theta(const FieldSpecPtr& spec);
RatTheta rt_poly(const FieldSpecPtr& spec, ThetaPoly num);
RatTheta rt_add(const RatTheta& a, const RatTheta& b);
RatTheta rt_sub(const RatTheta& a, const RatTheta& b);
RatTheta rt_neg(const RatTheta& a);
RatTheta rt_mul(const RatTheta& a, const RatTheta& b);
RatTheta rt_inv(const RatTheta& a);
RatTheta rt_div(const RatTheta& a, const RatTheta& b);
bool rt_equal(const RatTheta& a, const RatTheta& b);
/// theta -> theta^q (coefficients are sigma-fixed).
RatTheta rt_sigma(const RatTheta& a, long long q);
/// Expansion at theta = lambda + u as a truncated Hahn series.  Laurent tails
/// appear when den vanishes at lambda; den == 0 identically is rejected
/// upstream by rt_make.
HahnSeries rt_expand(const Session& S, const RatTheta& a, const FieldElement& lambda,
                     const Rat& cap);
std::string rt_str(const RatTheta& a);

/// Rational function in t whose coefficients are RatTheta: elements of the
/// exact base ring the matrices Phi live over.  den is never zero.
struct ExactScalar {
    FieldSpecPtr spec;
    std::vector<RatTheta> num, den;  // polynomials in t, little-endian

    bool is_zero() const { return num.empty(); }
};

ExactScalar es_make(const FieldSpecPtr& spec, std::vector<RatTheta> num,
                    std::vector<RatTheta> den);
ExactScalar es_zero(const FieldSpecPtr& spec);
ExactScalar es_one(const FieldSpecPtr& spec);
ExactScalar es_int(const FieldSpecPtr& spec, long long n);
ExactScalar es_from_rt(const RatTheta& a);
ExactScalar es_t(const FieldSpecPtr& spec);
ExactScalar es_theta(const FieldSpecPtr& spec);
ExactScalar es_t_minus_theta(const FieldSpecPtr& spec);
ExactScalar es_add(const ExactScalar& a, const ExactScalar& b);
ExactScalar es_sub(const ExactScalar& a, const ExactScalar& b);
ExactScalar es_neg(const ExactScalar& a);
ExactScalar es_mul(const ExactScalar& a, const ExactScalar& b);
ExactScalar es_inv(const ExactScalar& a);
ExactScalar es_div(const ExactScalar& a, const ExactScalar& b);
ExactScalar es_pow(const ExactScalar& a, long long n);  // n may be negative
bool es_equal(const ExactScalar& a, const ExactScalar& b);
/// sigma: q-power on theta-coefficients, t untouched.
ExactScalar es_sigma(const ExactScalar& a, long long q);
std::string es_str(const ExactScalar& a);

// Dense matrices over ExactScalar, row-major.
using EMatrix = std::vector<std::vector<ExactScalar>>;
EMatrix em_identity(const FieldSpecPtr& spec, int r);
EMatrix em_mul(const EMatrix& a, const EMatrix& b);
ExactScalar em_det(const EMatrix& a);
/// Exact Gauss-Jordan inverse; throws FieldError on det = 0.
EMatrix em_inv(const EMatrix& a);
EMatrix em_sigma(const EMatrix& a, long long q);

}  // namespace fde
