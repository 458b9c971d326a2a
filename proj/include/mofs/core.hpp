#ifndef MOFS_CORE_HPP
#define MOFS_CORE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mofs {

using Grid = std::vector<std::vector<int>>;

/// An n x n array over symbols 0..m-1 in which every symbol occurs
/// exactly lambda = n/m times in each row and each column.
class FrequencySquare {
public:
    /// Validates the grid and throws std::invalid_argument (with the
    /// offending row/column index) if it is not a frequency square.
    static FrequencySquare from_grid(Grid grid, int symbol_count);

    /// Infers the symbol count as max(entry)+1 and validates.
    static FrequencySquare from_grid(Grid grid);

    /// No validation. Only for code that re-checks afterwards.
    static FrequencySquare unchecked(Grid grid, int symbol_count);

    int order() const { return n_; }
    int symbol_count() const { return m_; }
    int lambda() const { return n_ / m_; }
    bool binary() const { return m_ == 2; }

    int at(int r, int c) const { return grid_[r][c]; }
    const std::vector<int>& row(int r) const { return grid_[r]; }
    const Grid& grid() const { return grid_; }

    /// Bit c is set iff cell (r,c) holds symbol 1. Binary squares with
    /// n <= 64 only; the column-counting loops in the row-pair analysis
    /// live on these masks.
    std::uint64_t row_mask(int r) const;

    /// nullopt when the grid satisfies the invariants, otherwise a
    /// human-readable description of the first violation.
    std::optional<std::string> check() const;

    bool operator==(const FrequencySquare&) const = default;

private:
    FrequencySquare(Grid g, int n, int m) : grid_(std::move(g)), n_(n), m_(m) {}
    Grid grid_;
    int n_ = 0;
    int m_ = 0;
};

/// Square file format: line 1 is "n m"; then n lines. When m <= 10 a line
/// is n digit characters, otherwise n space-separated integers.
FrequencySquare parse_square(const std::string& text);
std::string format_square(const FrequencySquare& sq);

/// A text stream holding one or more square blocks back to back.
std::vector<FrequencySquare> parse_square_blocks(const std::string& text);

/// An ordered collection of frequency squares sharing one type, with the
/// pairwise orthogonality status recorded at construction.
class MofsSet {
public:
    MofsSet(int n, int m);  // empty set of an explicit type
    explicit MofsSet(std::vector<FrequencySquare> squares);  // throws on type mismatch

    /// Skips the per-square invariant check (grids may be invalid); the
    /// pair flags are still computed. Used by the validator path.
    static MofsSet unchecked(int n, int m, std::vector<FrequencySquare> squares);

    int size() const { return static_cast<int>(squares_.size()); }
    int order() const { return n_; }
    int symbol_count() const { return m_; }
    int lambda() const { return n_ / m_; }
    const FrequencySquare& operator[](int i) const { return squares_[i]; }
    const std::vector<FrequencySquare>& squares() const { return squares_; }

    bool pair_orthogonal(int i, int j) const;
    bool all_orthogonal() const;

    MofsSet with_appended(FrequencySquare sq) const;

private:
    int n_;
    int m_;
    std::vector<FrequencySquare> squares_;
    std::vector<std::uint8_t> pair_ok_;  // upper-triangle flags
    void compute_pair_flags();
};

/// True iff every ordered symbol pair occurs exactly lambda^2 times when
/// F and G are superimposed. Throws on a type mismatch.
bool are_orthogonal(const FrequencySquare& f, const FrequencySquare& g);

struct ValidationReport {
    struct SquareIssue {
        int square;
        std::string message;
    };
    struct PairIssue {
        int first, second;  // square indices
        int sym_a, sym_b;   // first offending ordered pair
        long long count;
        long long expected;
    };
    std::vector<SquareIssue> invalid_squares;
    std::vector<PairIssue> failing_pairs;
    bool ok() const { return invalid_squares.empty() && failing_pairs.empty(); }
};

ValidationReport validate_mofs(const MofsSet& set);

/// Cellwise tupling of k same-type squares; cell (r,c) reads as the
/// k-tuple of the member squares' entries.
class Join {
public:
    explicit Join(std::vector<FrequencySquare> squares);
    Join(const FrequencySquare& a, const FrequencySquare& b);

    int order() const { return n_; }
    int count() const { return static_cast<int>(squares_.size()); }
    const FrequencySquare& square(int t) const { return squares_[t]; }
    std::vector<int> at(int r, int c) const;

private:
    std::vector<FrequencySquare> squares_;
    int n_;
};

/// Number of (0,0) cells in row r of a join of exactly two binary squares.
int psi(const Join& join, int r);

/// Number of columns holding 0 in both rows of one binary square. The
/// shared-1 count equals it; both mixed counts equal n/2 - eta.
int eta(const FrequencySquare& f, int r1, int r2);

enum class IsomorphismKind {
    RowPermutation,
    ColumnPermutation,
    TransposeAll,
    SymbolPermutation,  // applies to one square
    ReorderSquares,
};

struct Isomorphism {
    IsomorphismKind kind;
    std::vector<int> perm;  // image list; unused for TransposeAll
    int square_index = -1;  // SymbolPermutation only
};

MofsSet apply_isomorphism(const MofsSet& set, const Isomorphism& iso);

/// JSON set file: {"n":..., "m":..., "squares":[[row arrays]...]}.
std::string set_to_json(const MofsSet& set);
MofsSet set_from_json(const std::string& text);

/// Uniform-ish random square of type (n; n/m) built row by row with
/// forced-cell handling (exact for m = 2, backtracking otherwise).
FrequencySquare random_square(int n, int m, std::mt19937_64& rng);

/// Applies a random chain of row/column/symbol/transpose operations.
MofsSet random_isomorphic_copy(const MofsSet& set, std::mt19937_64& rng);

}  // namespace mofs

#endif
