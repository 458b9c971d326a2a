#ifndef MOFS_CONSTRUCTIONS_HPP
#define MOFS_CONSTRUCTIONS_HPP

#include <optional>
#include <vector>

#include "mofs/core.hpp"

namespace mofs::construct {

/// GF(p^u) with elements encoded as integers 0..p^u-1 (base-p coefficient
/// vectors of residue polynomials). The modulus is the lexicographically
/// smallest monic irreducible of degree u over GF(p); irreducibility is
/// verified by trial division and every nonzero element is checked to have
/// an inverse, so a bad field cannot be constructed silently.
class GaloisField {
public:
    GaloisField(int p, int u);

    int size() const { return q_; }
    int characteristic() const { return p_; }
    int degree() const { return u_; }
    const std::vector<int>& modulus() const { return modulus_; }  // coefficients, degree u monic

    int add(int a, int b) const;
    int neg(int a) const;
    int sub(int a, int b) const { return add(a, neg(b)); }
    int mul(int a, int b) const;
    int pow(int a, long long e) const;
    int inv(int a) const;

private:
    int p_, u_, q_;
    std::vector<int> modulus_;
    std::vector<int> mul_table_;  // q*q when q <= 256, else empty
    int mul_raw(int a, int b) const;
};

/// Decomposes q as p^u for a prime p, or nullopt.
std::optional<std::pair<int, int>> prime_power(int q);

/// A complete set of (q^h-1)^2/(q-1) pairwise orthogonal squares of type
/// (q^h; q^{h-1}). Built from the surjective GF(q)-linear trace of
/// GF(q^h): square (a,b) holds trace(ax + by) at cell (x,y), with (a,b)
/// ranging over nonzero pairs up to GF(q)* scaling. The result is
/// re-validated exhaustively and construction fails loudly on any defect.
MofsSet complete_mofs_prime_power(int q, int h, int order_bound = 64);

/// Replaces every entry by a constant d x d block in every square.
/// The blown-up set is re-verified before it is returned.
MofsSet dilate(const MofsSet& set, int d);

enum class DilationVerdict { MaximalByCompleteness, MaximalByRelation, NotMaximalDivisible, Unknown };

struct DilationCertificate {
    DilationVerdict verdict = DilationVerdict::Unknown;
    int d = 0;
    int base_order = 0;
    int base_symbols = 0;
    std::optional<FrequencySquare> witness;  // NotMaximalDivisible: verified extension of the dilation
};

/// Certifies maximality (or constructs a counterexample) for the
/// d-dilation of `set`. `jp_relation_found` reports whether the base set
/// satisfies a Jedwab-Popatia relation (see mofs::relations).
DilationCertificate dilation_certificate(const MofsSet& set, int d, bool jp_relation_found);

/// For m | d, a square of type (dn; dn/m) orthogonal to every member of a
/// d-dilated set: a fixed circulant of type (d; d/m) dropped onto every
/// block position. Requires the input to be block-constant.
FrequencySquare circulant_extension(const MofsSet& dilated, int d);

/// Replaces entry c of X by a d x d binary circulant with c ones per row
/// and column. Every row and column of X must sum to d*order/2; the output
/// is a binary square of order d*order.
FrequencySquare lift_blocks(const Grid& x, int d);

/// Parameter test for the dilated-complete-set family: with q = p^u and
/// p^v the highest p-power dividing n, accepts exactly when
/// 0 <= v - u*h < u/2.
bool high_power_applicable(int q, int h, long long n);

}  // namespace mofs::construct

#endif
