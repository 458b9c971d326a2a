#ifndef MOFS_EXACT_SEARCH_HPP
#define MOFS_EXACT_SEARCH_HPP

#include <functional>
#include <optional>

#include "mofs/core.hpp"

namespace mofs::exact {

/// Limits for the backtracking searches. Exceeding a limit produces an
/// explicit Indeterminate outcome, never a silent wrong answer.
struct SearchBudget {
    long long node_limit = default_node_limit();
    long long time_limit_ms = 0;  // 0 = unlimited
    int threads = 1;

    static long long default_node_limit();  // MOFS_NODE_BUDGET env var or 4e9
};

/// Optional progress transcript: called once per search depth the first
/// time it is reached, with the cell and the symbol placed there.
using Transcript = std::function<void(int depth, int row, int col, int symbol)>;

enum class MateStatus { Found, NoneExists, Indeterminate };

struct MateResult {
    MateStatus status = MateStatus::Indeterminate;
    std::optional<FrequencySquare> witness;  // Found only; lexicographically least
    long long nodes = 0;
};

/// Streams every type-(n; n/m) square exactly once in lexicographic
/// row-major order. The visitor returns false to stop early.
/// Returns the number of squares visited, or nullopt on budget exhaustion.
std::optional<long long> enumerate_squares(int n, int m, const std::function<bool(const FrequencySquare&)>& visit,
                                           const SearchBudget& budget = {});

/// Number of type-(n; n/m) squares; nullopt on budget exhaustion.
std::optional<long long> count_squares(int n, int m, const SearchBudget& budget = {});

/// Independent cross-check of count_squares: dynamic programming over
/// column-count profiles instead of cell-level backtracking.
long long count_squares_profile_dp(int n, int m);

/// Decides whether some square of the set's type is orthogonal to every
/// member. Cell-by-cell backtracking with per-row/column symbol counts,
/// running pair counts against every member, and column/pair capacity
/// pruning. With threads > 1 the search shards on first-row completions;
/// the verdict and witness are independent of the shard count.
MateResult find_mate(const MofsSet& set, const SearchBudget& budget = {}, const Transcript& transcript = {});

enum class Maximality { Maximal, NotMaximal, Indeterminate };

struct MaximalityResult {
    Maximality verdict = Maximality::Indeterminate;
    std::optional<FrequencySquare> extension;  // NotMaximal only
    long long nodes = 0;
};

MaximalityResult is_maximal(const MofsSet& set, const SearchBudget& budget = {},
                            const Transcript& transcript = {});

}  // namespace mofs::exact

#endif
