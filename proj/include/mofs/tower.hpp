#ifndef MOFS_TOWER_HPP
#define MOFS_TOWER_HPP

#include <vector>

#include "mofs/core.hpp"

namespace mofs::tower {

/// Ordered equal-size disjoint column blocks covering 0..n-1.
struct Equipartition {
    std::vector<std::vector<int>> parts;
    int columns() const;
    void check(int n) const;  // throws on a malformed partition
};

/// Conditions for a two-row working window: the part count and every part
/// size are even, and each part holds exactly half its columns with symbol
/// 1 in the given row of the given square.
bool is_good(const Equipartition& partition, const Join& join, int row, int square_index);

/// Merges parts into 2*beta/f(m_s) groups so the result is good for the
/// (target_row, target_square) pair as well; goodness for previously
/// satisfied pairs survives because coarsening preserves it. Buckets are
/// filled greedily by ascending ones-count with parts in index order.
Equipartition coarsen(const Equipartition& partition, const Join& join, int target_row, int target_square,
                      long long m_s, long long beta_s);

/// A binary square orthogonal to every input square (which need not be
/// orthogonal to each other). Requires 4*m_{2k} | n where k is the number
/// of inputs; rows are processed in consecutive pairs, and for each pair
/// an equipartition is refined through the 2k (row, square) targets and
/// then split in half to fill the two rows.
FrequencySquare tower_mate(const std::vector<FrequencySquare>& squares);

/// The divisibility requirement 4*m_{2k} for k squares.
long long tower_modulus(int k);

}  // namespace mofs::tower

#endif
