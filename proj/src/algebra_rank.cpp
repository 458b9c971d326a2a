#include "mofs/algebra_rank.hpp"

#include <stdexcept>

namespace mofs::rank {

IndicatorFamily indicator_family(const MofsSet& set) {
    IndicatorFamily fam;
    fam.n = set.order();
    fam.m = set.symbol_count();
    fam.k = set.size();
    const int n = fam.n;
    std::vector<int> all(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n * n; ++i) all[i] = i;
    fam.vectors.push_back(all);
    for (int r = 1; r < n; ++r) {
        std::vector<int> v(n);
        for (int c = 0; c < n; ++c) v[c] = r * n + c;
        fam.vectors.push_back(std::move(v));
    }
    for (int c = 1; c < n; ++c) {
        std::vector<int> v(n);
        for (int r = 0; r < n; ++r) v[r] = r * n + c;
        fam.vectors.push_back(std::move(v));
    }
    for (int t = 0; t < fam.k; ++t)
        for (int s = 1; s < fam.m; ++s) {
            std::vector<int> v;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    if (set[t].at(r, c) == s) v.push_back(r * n + c);
            fam.vectors.push_back(std::move(v));
        }
    return fam;
}

long long exact_rank(std::vector<std::vector<mpz_class>> rows) {
    if (rows.empty()) return 0;
    const std::size_t nrows = rows.size();
    const std::size_t ncols = rows[0].size();
    mpz_class prev_pivot = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
        std::size_t pivot = rank;
        while (pivot < nrows && rows[pivot][col] == 0) ++pivot;
        if (pivot == nrows) continue;
        std::swap(rows[rank], rows[pivot]);
        const mpz_class& p = rows[rank][col];
        for (std::size_t i = rank + 1; i < nrows; ++i) {
            for (std::size_t j = col + 1; j < ncols; ++j) {
                mpz_class v = rows[i][j] * p - rows[i][col] * rows[rank][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
                rows[i][j] = std::move(v);
            }
            rows[i][col] = 0;
        }
        prev_pivot = p;
        ++rank;
    }
    return static_cast<long long>(rank);
}

RankResult verify_independence(const IndicatorFamily& family) {
    const std::size_t cols = static_cast<std::size_t>(family.n) * family.n;
    std::vector<std::vector<mpz_class>> rows;
    rows.reserve(family.vectors.size());
    for (const auto& sparse : family.vectors) {
        std::vector<mpz_class> row(cols, 0);
        for (int idx : sparse) row[idx] = 1;
        rows.push_back(std::move(row));
    }
    RankResult out;
    out.rank = exact_rank(std::move(rows));
    out.independent = out.rank == static_cast<long long>(family.vectors.size());
    return out;
}

Bound hrs_bound(long long n, long long m) {
    if (m < 2) throw std::invalid_argument("hrs_bound needs m >= 2");
    if (n % m != 0) throw std::invalid_argument("hrs_bound needs m | n");
    Bound b;
    const long long num = (n - 1) * (n - 1);
    b.value = num / (m - 1);
    b.exact = num % (m - 1) == 0;
    return b;
}

std::vector<std::vector<long long>> block_count_matrix(const FrequencySquare& f, int d, int symbol) {
    if (d < 1 || f.order() % d != 0)
        throw std::invalid_argument("block size " + std::to_string(d) + " does not divide order " +
                                    std::to_string(f.order()));
    const int n = f.order() / d;
    std::vector<std::vector<long long>> x(n, std::vector<long long>(n, 0));
    for (int r = 0; r < f.order(); ++r)
        for (int c = 0; c < f.order(); ++c)
            if (f.at(r, c) == symbol) ++x[r / d][c / d];
    return x;
}

}  // namespace mofs::rank
