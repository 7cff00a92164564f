#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fde {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec;
using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

/// A working finite field F_{q^M} with q = p^s, presented as F_p[X]/(f) where
/// deg f = M*s.  Specs built by extend_field() keep a link to the field they
/// were built over together with the image of its generator, so embeddings
/// along a tower compose coherently.
struct FieldSpec {
    int p = 2;
    int s = 1;                     // q = p^s
    int deg = 1;                   // degree over F_p, always a multiple of s
    std::vector<int> defpoly;      // monic, length deg+1, coefficients mod p, little-endian
    FieldSpecPtr base;             // subfield this spec extends, may be null
    std::vector<int> base_gen_image;  // coefficients of the image of base's generator

    int M() const { return deg / s; }

    // lazily filled generator-image cache for cross-tower embeddings, keyed by
    // the source spec
    mutable std::map<const FieldSpec*, std::vector<int>> embed_cache;
    mutable std::mutex mu;
};

/// Element of F_{p^deg}: coefficient vector of length deg w.r.t. the power
/// basis of the defining polynomial.  Immutable in practice; arithmetic
/// returns fresh values.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldSpecPtr spec, std::vector<int> coeffs);

    const FieldSpecPtr& spec() const { return spec_; }
    const std::vector<int>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_one() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement inv() const;
    FieldElement pow(unsigned long long e) const;

    std::string str() const;

private:
    FieldSpecPtr spec_;
    std::vector<int> c_;
};

FieldElement fe_zero(const FieldSpecPtr& spec);
FieldElement fe_one(const FieldSpecPtr& spec);
FieldElement fe_from_int(const FieldSpecPtr& spec, long long n);  // image of n mod p
FieldElement fe_gen(const FieldSpecPtr& spec);                    // the class of X

/// Canonical element ordering: lexicographic on the F_p coefficient sequence,
/// c_0 most significant.  Used for every deterministic tie-break.
bool canonical_less(const FieldElement& a, const FieldElement& b);
/// index -> element in canonical order (index written base p, c_0 receiving
/// the most significant digit).
FieldElement element_at(const FieldSpecPtr& spec, unsigned long long index);
unsigned __int128 field_size(const FieldSpecPtr& spec);  // throws if >= 2^127

/// Least monic irreducible of degree n over F_p in the canonical polynomial
/// ordering.  Deterministic.
std::vector<int> find_irreducible(int p, int n);
bool is_irreducible(int p, const std::vector<int>& f);

FieldSpecPtr make_field(int p, int s, int M);
/// Extension of degree k over `spec`, with spec embedded via the least root of
/// its defining polynomial.  Re-embedding of live elements is the caller's
/// (lazy) concern: embed() lifts on demand.
FieldSpecPtr extend_field(const FieldSpecPtr& spec, int k);

/// Ring-homomorphic embedding F_{p^m} -> F_{p^M} for m | M.  Follows recorded
/// tower links when possible, otherwise maps the generator to the least root
/// of the source defining polynomial.
FieldElement embed(const FieldElement& x, const FieldSpecPtr& target);

/// x^{q^j}, j may be negative.
FieldElement frobenius_power(const FieldElement& x, long long j);

/// All roots of the monic polynomial f (coefficients in the field) lying in
/// the field of its coefficients, sorted canonically.  Deterministic
/// equal-degree splitting.
std::vector<FieldElement> poly_roots(std::vector<FieldElement> f);

/// y with y^m = x, canonically least, or nullopt if no m-th root exists in
/// x's field.  Requires gcd(m, p) = 1.
std::optional<FieldElement> nth_root(const FieldElement& x, long long m);

/// All x in the working field with gamma*x^{q^e} - x + beta = 0, via
/// F_p-linearization; sorted canonically.  Size is 0 or a power of q.
std::vector<FieldElement> roots_additive(int e, const FieldElement& gamma,
                                         const FieldElement& beta);

}  // namespace fde
