#ifndef MOFS_POLYTOPE_HPP
#define MOFS_POLYTOPE_HPP

#include <gmpxx.h>

#include <vector>

namespace mofs::polytope {

/// lcm(1..n). Guarded: refuses n beyond one million (the result would be
/// astronomically large well before that).
mpz_class gamma_lcm(long long n);

/// f(1) = 2 and f(m) = (2m-2) * lcm(1..2m-1) for m >= 2.
mpz_class coarsening_modulus(long long m);

/// The divisibility tower m_1 = m_2 = 1, m_3 = 2,
/// m_{i+1} = 2 m_i (m_i - 1) lcm(1..2m_i - 1). Construction verifies the
/// identity m_{i+1} = m_i * f(m_i) for i >= 2. Indices at most 5 are
/// computable; beyond that the lcm argument explodes.
struct TowerConstants {
    std::vector<mpz_class> m;  // m[0] unused; m[1..i_max]
    const mpz_class& at(int i) const { return m.at(i); }
};

TowerConstants tower_constants(int i_max);

/// P(b) in R^{2m+1}: { x >= 0, sum x_i = b, sum i*x_i = m*b }.
struct PolytopeSpec {
    int m = 1;
    mpq_class b = 1;
};

bool contains(const PolytopeSpec& spec, const std::vector<mpq_class>& x);

/// The vertex set: b*e_m together with the two-point combinations
/// v_{i,j} = b(j-m)/(j-i) e_i + b(m-i)/(j-i) e_j for 0 <= i < m < j <= 2m.
std::vector<std::vector<mpq_class>> vertices(const PolytopeSpec& spec);

/// Splits a nonnegative integer vector with sum 2*beta and weighted sum
/// 2*m*beta into 2*beta/f(m) pieces, each with sum f(m) and weighted sum
/// m*f(m). Greedy extraction of integer polytope points; the remainder
/// stays decomposable at every step, so extraction cannot dead-end.
std::vector<std::vector<long long>> decompose(const std::vector<long long>& x, int m, long long beta);

}  // namespace mofs::polytope

#endif
