#ifndef MOFS_ALGEBRA_RANK_HPP
#define MOFS_ALGEBRA_RANK_HPP

#include <gmpxx.h>

#include <vector>

#include "mofs/core.hpp"

namespace mofs::rank {

/// The indicator vectors attached to a set of squares, flattened to
/// n^2-dimensional 0/1 rows: the all-ones matrix, the row indicators
/// 1..n-1, the column indicators 1..n-1, and one symbol-position
/// indicator per (symbol 1..m-1, square) pair. Stored sparse.
struct IndicatorFamily {
    int n = 0, m = 0, k = 0;
    std::vector<std::vector<int>> vectors;  // each a sorted list of set positions
    int size() const { return static_cast<int>(vectors.size()); }
};

IndicatorFamily indicator_family(const MofsSet& set);

struct RankResult {
    long long rank = 0;
    bool independent = false;
};

/// Exact rank over the rationals via fraction-free (Bareiss) elimination
/// on arbitrary-precision integers. No floating point.
RankResult verify_independence(const IndicatorFamily& family);

/// Exact rank of a dense integer matrix (row-major), same elimination.
long long exact_rank(std::vector<std::vector<mpz_class>> rows);

struct Bound {
    long long value = 0;   // floor((n-1)^2 / (m-1))
    bool exact = true;     // false when (m-1) does not divide (n-1)^2
};

/// The size ceiling (n-1)^2/(m-1) for a set of type-(n; n/m) squares.
Bound hrs_bound(long long n, long long m);

/// X[i][j] = occurrences of `symbol` in the d x d block (i,j) of F.
std::vector<std::vector<long long>> block_count_matrix(const FrequencySquare& f, int d, int symbol);

}  // namespace mofs::rank

#endif
