#ifndef MOFS_BALANCE_HPP
#define MOFS_BALANCE_HPP

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mofs/core.hpp"
#include "mofs/exact_search.hpp"

namespace mofs::balance {

using Mat3 = std::array<std::array<long long, 3>, 3>;
using Mat4 = std::array<std::array<long long, 4>, 4>;

/// Column-pattern counts for one row pair of a binary pair join. Columns
/// are classified by the vertical pattern (value in r1 above value in r2)
/// of each square, in the order (0,1), (1,0), (0,0), (1,1); the condensed
/// 3x3 matrix merges the two constant patterns.
struct PairProfile {
    int r1 = 0, r2 = 0;
    int n = 0, m = 0;  // m = n/2 throughout this module
    Mat4 aprime{};
    Mat3 a{};
    int psi1 = 0, psi2 = 0;
};

PairProfile pair_profile(const Join& join, int r1, int r2);
PairProfile pair_profile(const FrequencySquare& f1, const FrequencySquare& f2, int r1, int r2);
/// Row-level entry point: the four rows are F1[r1], F1[r2], F2[r1], F2[r2].
PairProfile pair_profile_rows(const std::vector<int>& f1r1, const std::vector<int>& f1r2,
                              const std::vector<int>& f2r1, const std::vector<int>& f2r2);

/// The forced linear and parity identities a condensed matrix of a real
/// row pair satisfies (entry sum 2m, equal first row/column sums tied to
/// the doubled third line, even third-line sums).
bool admissible(const Mat3& a, long long m);

/// Orbit under swapping the first two rows, swapping the first two
/// columns and transposing (group of order 8), sorted and deduplicated.
/// Throws on an inadmissible matrix (the operations preserve
/// admissibility, so every orbit member is admissible too).
std::vector<Mat3> orbit3(const Mat3& a);
Mat3 canonical3(const Mat3& a);

/// Orbit of the 4x4 profile under the order-16 group generated by the two
/// symbol swaps, the row swap and the square swap.
std::vector<Mat4> orbit4(const Mat4& a);

enum class ExceptionLabel { None, E1, E2, E3, E4, E5, E6 };
std::string to_string(ExceptionLabel label);

/// Matches A against the six non-balanceable templates for order n
/// (x = floor(n/6), y = floor(n/8)); the residue of n selects which
/// families can occur at all.
ExceptionLabel classify_exception(const Mat3& a, int n);

/// The template matrix for a label at order n (throws when the label does
/// not occur at that order).
Mat3 exception_template(ExceptionLabel label, int n);

struct BalanceWitness {
    Mat3 b{};
    int p = 0, q = 0;
};

/// Exact decision: a 3x3 matrix B with entry sum m, first-minus-second
/// row sum p, first-minus-second column sum q and 0 <= b_ij <= a_ij, or
/// definitive nonexistence. Enumerates the consistent row/column sum
/// triples and solves each bounded transportation instance by max-flow.
std::optional<BalanceWitness> find_balancer(const Mat3& a, long long m, int p, int q);

using Rect = std::vector<std::vector<int>>;  // rows x n, binary

/// The 2xn rectangle realized by a witness: the chosen columns of each
/// pattern class get 0 over 1, the rest 1 over 0. Against F1 the pair
/// (0,0) then appears m+p times, against F2 m+q times.
Rect build_rectangle(const FrequencySquare& f1, const FrequencySquare& f2, int r1, int r2,
                     const BalanceWitness& witness);

Rect flip_rectangle(const Rect& rect);

/// Ordered-pair counts of rect against the listed rows of f stacked in
/// the same order; `orthogonal` when all four counts are |rows|*n/4.
std::array<long long, 4> rect_pair_counts(const Rect& rect, const FrequencySquare& f, const std::vector<int>& rows);
bool rect_orthogonal(const Rect& rect, const FrequencySquare& f, const std::vector<int>& rows);
bool is_frequency_rectangle(const Rect& rect);

enum class TLabel { None, T1, T2, T3, T4, T1star, T2star, T3star, T4star };
std::string to_string(TLabel label);

enum RowClassBit {
    kAlpha1 = 1 << 0,
    kAlpha2 = 1 << 1,
    kBeta1 = 1 << 2,
    kBeta2 = 1 << 3,
    kGamma1 = 1 << 4,
    kGamma2 = 1 << 5,
};

struct PairTag {
    int r1 = 0, r2 = 0;
    ExceptionLabel exception = ExceptionLabel::None;
    TLabel t = TLabel::None;
    int t_reference = -1;  // the row the T pattern is read against
};

struct RowTypeTable {
    int n = 0, x = 0, y = 0;
    std::vector<unsigned> row_tags;  // RowClassBit masks
    std::vector<PairTag> pairs;      // every unordered pair, r1 < r2
    const PairTag& pair(int r1, int r2) const;
};

/// Exception labels for every row pair plus the derived per-row classes:
/// alpha/beta subtypes from the psi multisets, gamma subtypes from
/// psi = 2y+1, and T/T* labels for gamma pairs. Needs n = 0 mod 4, n >= 8.
RowTypeTable classify_row_types(const FrequencySquare& f1, const FrequencySquare& f2);

struct PairAssignment {
    int r1 = 0, r2 = 0;
    BalanceWitness witness;
    bool flipped = false;  // use the 0/1-swapped rectangle, realizing (-p,-q)
};

/// Pairs whose signed (p,q) contributions cancel, so the stacked
/// rectangles are orthogonal to both restrictions.
struct BalancedGroup {
    std::vector<PairAssignment> pairs;
};

struct PartitionOutcome {
    bool ok = false;
    std::vector<BalancedGroup> groups;
    std::string message;      // failure reason when !ok
    int unbalanced_pairs = 0;  // leftover pairs the matching could not avoid
};

/// Partitions the rows into balanceable groups: maximum matching on the
/// balanceable-pair graph first, then leftover pairs are repaired by
/// re-pairing against matched pairs, by signed (p,q) cancellation in
/// groups of two or three pairs, and finally by a bounded exhaustive
/// search over small row subsets. Every returned group is re-verified.
/// Orthogonality of the two squares is not required for the attempt.
PartitionOutcome partition_rows(const FrequencySquare& f1, const FrequencySquare& f2);

struct BinaryMateResult {
    enum class Status { Found, NoneExists, Indeterminate, PartitionNotFound };
    Status status = Status::PartitionNotFound;
    std::optional<FrequencySquare> square;
    bool partition_failed = false;  // true when the exact-search fallback ran
    bool guaranteed = false;        // n = 0 mod 4 and n >= 8
};

/// A binary square orthogonal to both inputs, assembled from per-pair
/// rectangles. On partition failure falls back to the exact search unless
/// the fallback budget is zero.
BinaryMateResult find_binary_mate(const FrequencySquare& f1, const FrequencySquare& f2,
                                  const exact::SearchBudget& fallback_budget = {});

/// Every matrix satisfying the admissibility identities with entry sum 2m,
/// in lexicographic order.
void enumerate_admissible(long long m, const std::function<void(const Mat3&)>& visit);

/// A random admissible matrix with entry sum 2m (rejection sampling over
/// the third-line parametrization).
Mat3 random_admissible(long long m, std::mt19937_64& rng);

}  // namespace mofs::balance

#endif
