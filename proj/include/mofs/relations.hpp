#ifndef MOFS_RELATIONS_HPP
#define MOFS_RELATIONS_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "mofs/core.hpp"

namespace mofs::relations {

/// A subset tuple (X_0, X_1, X_2, ..., X_{k+1}): X_0 over rows, X_1 over
/// columns, then one symbol subset per square. It is a relation when every
/// orthogonal-array row [i, j, F_1[i,j], ..., F_k[i,j]] meets the tuple in
/// an even number of coordinates.
struct Relation {
    std::set<int> rows;                  // X_0
    std::set<int> cols;                  // X_1
    std::vector<std::set<int>> symbols;  // X_2..X_{k+1}
};

/// One row per cell (i,j) in lexicographic order: [i, j, F_1[i,j], ...].
std::vector<std::vector<int>> orthogonal_array(const MofsSet& set);

/// Definitional check: even intersection with every OA row.
bool is_relation(const MofsSet& set, const Relation& rel);

struct RelationSpace {
    int n = 0, m = 0, k = 0;
    long long dimension = 0;
    /// Basis of the GF(2) solution space over n row bits, n column bits
    /// and m*k symbol bits, packed little-endian into 64-bit words.
    std::vector<std::vector<std::uint64_t>> basis;
    int bits() const { return 2 * n + m * k; }
    Relation decode(const std::vector<std::uint64_t>& vec) const;
};

/// Solves the parity system with one equation per cell:
/// bit(row i) + bit(col j) + sum_t bit(square t, symbol F_t[i,j]) = 0.
/// Every basis vector is re-verified against the definition.
RelationSpace relation_space(const MofsSet& set);

struct JpSearchResult {
    std::vector<Relation> relations;
    bool complete = true;  // false when an enumeration bound was hit
};

/// All relations with singleton symbol sets per square and a proper
/// nontrivial row or column part. Complete below the given bounds
/// (symbol-choice enumeration m^k, else nullspace enumeration 2^dim).
JpSearchResult find_jp_relations(const MofsSet& set, long long choice_bound = 1 << 20, int dim_bound = 24);

struct RelationCertificate {
    bool maximal = false;     // true implies the set is maximal
    bool lambda_odd = false;
    bool jp_found = false;
    bool search_complete = true;
};

/// Certificate that the set is maximal: requires lambda odd and a
/// Jedwab-Popatia relation. Never decided by search.
RelationCertificate certify_maximal_by_relation(const MofsSet& set);

}  // namespace mofs::relations

#endif
