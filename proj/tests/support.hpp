#ifndef MOFS_TESTS_SUPPORT_HPP
#define MOFS_TESTS_SUPPORT_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mofs/core.hpp"

namespace testdata {

// The two superimposed triples of binary frequency squares (orders 4 and
// 6) that admit no common orthogonal mate. Digit k of a cell belongs to
// square k. Note the members are not pairwise orthogonal.
inline const char* kTriple4 =
    "111 011 100 000\n"
    "101 000 010 111\n"
    "010 100 111 001\n"
    "000 111 001 110\n";

inline const char* kTriple6 =
    "111 111 111 000 000 000\n"
    "111 111 111 000 000 000\n"
    "110 110 000 111 001 001\n"
    "001 001 100 011 110 110\n"
    "000 000 011 100 111 111\n"
    "000 000 000 111 111 111\n";

inline std::vector<mofs::FrequencySquare> parse_superimposed(const std::string& text, int k) {
    std::vector<std::vector<std::vector<int>>> grids(k);
    std::vector<std::vector<int>> row_acc(k);
    std::size_t pos = 0;
    auto flush_row = [&]() {
        if (row_acc[0].empty()) return;
        for (int t = 0; t < k; ++t) {
            grids[t].push_back(row_acc[t]);
            row_acc[t].clear();
        }
    };
    while (pos < text.size()) {
        char ch = text[pos];
        if (ch == '\n') {
            flush_row();
            ++pos;
            continue;
        }
        if (ch == ' ') {
            ++pos;
            continue;
        }
        for (int t = 0; t < k; ++t) row_acc[t].push_back(text[pos + t] - '0');
        pos += k;
    }
    flush_row();
    std::vector<mofs::FrequencySquare> squares;
    for (int t = 0; t < k; ++t) squares.push_back(mofs::FrequencySquare::from_grid(grids[t], 2));
    return squares;
}

// Four rows of an order-8 binary pair join, used as the running example
// for the row-pair machinery. First coordinates give F1, second F2.
inline const std::vector<std::vector<int>> kExampleF1Rows = {
    {0, 0, 0, 1, 1, 1, 0, 1},
    {1, 1, 1, 0, 0, 0, 0, 1},
    {0, 0, 1, 1, 0, 1, 0, 1},
    {1, 1, 0, 0, 1, 0, 0, 1},
};
inline const std::vector<std::vector<int>> kExampleF2Rows = {
    {0, 0, 0, 0, 1, 1, 1, 1},
    {1, 1, 0, 0, 1, 1, 0, 0},
    {0, 1, 0, 1, 0, 1, 1, 0},
    {1, 0, 1, 0, 0, 1, 0, 1},
};

// The 4x8 rectangle exhibited for the same four rows.
inline const std::vector<std::vector<int>> kExampleRectangle = {
    {0, 1, 0, 0, 1, 1, 0, 1},
    {1, 0, 1, 1, 0, 0, 1, 0},
    {1, 0, 0, 0, 1, 1, 1, 0},
    {0, 1, 1, 1, 0, 0, 0, 1},
};

// Completes the given rows to a full binary frequency square of order n
// by backtracking over the remaining cells (first completion in
// lexicographic order).
inline mofs::FrequencySquare complete_binary_square(std::vector<std::vector<int>> rows, int n) {
    const int m = n / 2;
    std::vector<int> col_ones(n, 0);
    for (const auto& row : rows)
        for (int c = 0; c < n; ++c) col_ones[c] += row[c];
    const int start = static_cast<int>(rows.size());
    rows.resize(n, std::vector<int>(n, 0));

    std::function<bool(int, int, int)> place = [&](int r, int c, int row_ones) -> bool {
        if (r == n) return true;
        if (c == n) return row_ones == m && place(r + 1, 0, 0);
        const int rows_after = n - r - 1;
        for (int v = 0; v <= 1; ++v) {
            if (v == 1 && (row_ones == m || col_ones[c] == m)) continue;
            if (v == 0 && (c - row_ones == m || m - col_ones[c] > rows_after)) continue;
            rows[r][c] = v;
            col_ones[c] += v;
            if (place(r, c + 1, row_ones + v)) return true;
            col_ones[c] -= v;
        }
        return false;
    };
    if (!place(start, 0, 0)) throw std::runtime_error("completion failed");
    return mofs::FrequencySquare::from_grid(rows, 2);
}

}  // namespace testdata

#endif
