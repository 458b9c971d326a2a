#include "mofs/tower.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mofs/polytope.hpp"

namespace mofs::tower {

int Equipartition::columns() const {
    int total = 0;
    for (const auto& part : parts) total += static_cast<int>(part.size());
    return total;
}

void Equipartition::check(int n) const {
    if (parts.empty()) throw std::invalid_argument("equipartition has no parts");
    const std::size_t size = parts[0].size();
    std::vector<char> seen(n, 0);
    for (const auto& part : parts) {
        if (part.size() != size) throw std::invalid_argument("equipartition parts differ in size");
        for (int c : part) {
            if (c < 0 || c >= n || seen[c]) throw std::invalid_argument("equipartition does not partition columns");
            seen[c] = 1;
        }
    }
    if (static_cast<int>(size * parts.size()) != n) throw std::invalid_argument("equipartition misses columns");
}

bool is_good(const Equipartition& partition, const Join& join, int row, int square_index) {
    if (partition.parts.size() % 2 != 0) return false;
    const FrequencySquare& sq = join.square(square_index);
    for (const auto& part : partition.parts) {
        if (part.size() % 2 != 0) return false;
        int ones = 0;
        for (int c : part) ones += sq.at(row, c);
        if (2 * ones != static_cast<int>(part.size())) return false;
    }
    return true;
}

Equipartition coarsen(const Equipartition& partition, const Join& join, int target_row, int target_square,
                      long long m_s, long long beta_s) {
    const int n = join.order();
    partition.check(n);
    if (static_cast<long long>(partition.parts.size()) != 2 * beta_s)
        throw std::invalid_argument("coarsen: expected " + std::to_string(2 * beta_s) + " parts");
    const FrequencySquare& sq = join.square(target_square);

    // ones-count per part within the target row
    std::vector<int> ones(partition.parts.size());
    for (std::size_t j = 0; j < partition.parts.size(); ++j) {
        int cnt = 0;
        for (int c : partition.parts[j]) cnt += sq.at(target_row, c);
        if (cnt > 2 * m_s) throw std::invalid_argument("coarsen: part holds more ones than 2*m_s");
        ones[j] = cnt;
    }
    std::vector<long long> x(2 * m_s + 1, 0);
    for (int cnt : ones) ++x[cnt];

    auto split = polytope::decompose(x, static_cast<int>(m_s), beta_s);

    // parts of each ones-count in index order, consumed in ascending count
    std::vector<std::vector<int>> by_count(2 * m_s + 1);
    for (std::size_t j = 0; j < ones.size(); ++j) by_count[ones[j]].push_back(static_cast<int>(j));
    std::vector<std::size_t> next(2 * m_s + 1, 0);

    Equipartition out;
    out.parts.resize(split.size());
    for (std::size_t bucket = 0; bucket < split.size(); ++bucket) {
        for (int value = 0; value <= 2 * m_s; ++value)
            for (long long take = 0; take < split[bucket][value]; ++take) {
                int part_index = by_count[value][next[value]++];
                auto& dest = out.parts[bucket];
                dest.insert(dest.end(), partition.parts[part_index].begin(), partition.parts[part_index].end());
            }
        std::sort(out.parts[bucket].begin(), out.parts[bucket].end());
    }
    if (!is_good(out, join, target_row, target_square))
        throw std::logic_error("coarsen: output failed the goodness check");
    return out;
}

long long tower_modulus(int k) {
    auto tc = polytope::tower_constants(2 * k);
    if (!tc.at(2 * k).fits_slong_p())
        throw std::invalid_argument("tower modulus for k = " + std::to_string(k) + " exceeds the representable range");
    return 4 * tc.at(2 * k).get_si();
}

FrequencySquare tower_mate(const std::vector<FrequencySquare>& squares) {
    if (squares.empty()) throw std::invalid_argument("tower_mate needs at least one square");
    const int k = static_cast<int>(squares.size());
    const int n = squares[0].order();
    for (const auto& sq : squares) {
        if (sq.order() != n) throw std::invalid_argument("tower_mate: squares differ in order");
        if (sq.symbol_count() != 2) throw std::invalid_argument("tower_mate: squares must be binary");
    }
    const long long need = tower_modulus(k);
    if (n % need != 0) throw std::invalid_argument("tower_mate requires " + std::to_string(need) + " | n");

    auto tc = polytope::tower_constants(2 * k);
    Join join(squares);
    Grid out(n, std::vector<int>(n, 0));

    for (int r1 = 0; r1 < n; r1 += 2) {
        const int r2 = r1 + 1;
        // initial pairing from square 0: match columns that disagree in
        // both rows, (0,0)-columns against (1,1)-columns and mixed against
        // mixed, so the pairing is good for both rows at once
        std::vector<int> c00, c01, c10, c11;
        for (int c = 0; c < n; ++c) {
            int a = squares[0].at(r1, c), b = squares[0].at(r2, c);
            (a == 0 ? (b == 0 ? c00 : c01) : (b == 0 ? c10 : c11)).push_back(c);
        }
        if (c00.size() != c11.size() || c01.size() != c10.size())
            throw std::logic_error("tower_mate: column classes out of balance");
        Equipartition part;
        for (std::size_t i = 0; i < c00.size(); ++i) part.parts.push_back({std::min(c00[i], c11[i]), std::max(c00[i], c11[i])});
        for (std::size_t i = 0; i < c01.size(); ++i) part.parts.push_back({std::min(c01[i], c10[i]), std::max(c01[i], c10[i])});
        std::sort(part.parts.begin(), part.parts.end());

        int s = 2;
        for (int u = 1; u < k; ++u)
            for (int row : {r1, r2}) {
                const long long m_s = tc.at(s).get_si();
                const long long beta_s = n / (4 * m_s);
                part = coarsen(part, join, row, u, m_s, beta_s);
                ++s;
            }
        for (int u = 0; u < k; ++u)
            for (int row : {r1, r2})
                if (!is_good(part, join, row, u)) throw std::logic_error("tower_mate: final partition not good");

        const std::size_t half = part.parts.size() / 2;
        for (std::size_t j = 0; j < part.parts.size(); ++j) {
            const int top = j < half ? 0 : 1;
            for (int c : part.parts[j]) {
                out[r1][c] = top;
                out[r2][c] = 1 - top;
            }
        }
    }

    FrequencySquare mate = FrequencySquare::from_grid(std::move(out), 2);
    for (const auto& sq : squares)
        if (!are_orthogonal(mate, sq)) throw std::logic_error("tower_mate: output failed orthogonality");
    return mate;
}

}  // namespace mofs::tower
