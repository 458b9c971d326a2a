#include "mofs/relations.hpp"

#include <algorithm>
#include <stdexcept>

namespace mofs::relations {

namespace {

bool get_bit(const std::vector<std::uint64_t>& v, int i) { return (v[i >> 6] >> (i & 63)) & 1; }
void set_bit(std::vector<std::uint64_t>& v, int i) { v[i >> 6] |= std::uint64_t(1) << (i & 63); }

}  // namespace

std::vector<std::vector<int>> orthogonal_array(const MofsSet& set) {
    std::vector<std::vector<int>> rows;
    rows.reserve(static_cast<std::size_t>(set.order()) * set.order());
    for (int i = 0; i < set.order(); ++i)
        for (int j = 0; j < set.order(); ++j) {
            std::vector<int> row{i, j};
            for (int t = 0; t < set.size(); ++t) row.push_back(set[t].at(i, j));
            rows.push_back(std::move(row));
        }
    return rows;
}

bool is_relation(const MofsSet& set, const Relation& rel) {
    if (static_cast<int>(rel.symbols.size()) != set.size()) return false;
    for (int i = 0; i < set.order(); ++i)
        for (int j = 0; j < set.order(); ++j) {
            int parity = (rel.rows.count(i) ? 1 : 0) ^ (rel.cols.count(j) ? 1 : 0);
            for (int t = 0; t < set.size(); ++t) parity ^= rel.symbols[t].count(set[t].at(i, j)) ? 1 : 0;
            if (parity) return false;
        }
    return true;
}

Relation RelationSpace::decode(const std::vector<std::uint64_t>& vec) const {
    Relation rel;
    rel.symbols.resize(k);
    for (int i = 0; i < n; ++i)
        if (get_bit(vec, i)) rel.rows.insert(i);
    for (int j = 0; j < n; ++j)
        if (get_bit(vec, n + j)) rel.cols.insert(j);
    for (int t = 0; t < k; ++t)
        for (int s = 0; s < m; ++s)
            if (get_bit(vec, 2 * n + t * m + s)) rel.symbols[t].insert(s);
    return rel;
}

RelationSpace relation_space(const MofsSet& set) {
    RelationSpace space;
    space.n = set.order();
    space.m = set.symbol_count();
    space.k = set.size();
    const int n = space.n, m = space.m, k = space.k;
    const int bits = space.bits();
    const int words = (bits + 63) / 64;

    std::vector<std::vector<std::uint64_t>> eqs;
    eqs.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<std::uint64_t> eq(words, 0);
            set_bit(eq, i);
            set_bit(eq, n + j);
            for (int t = 0; t < k; ++t) {
                // toggling handles even multiplicities of one symbol bit
                int pos = 2 * n + t * m + set[t].at(i, j);
                eq[pos >> 6] ^= std::uint64_t(1) << (pos & 63);
            }
            eqs.push_back(std::move(eq));
        }

    // reduced row echelon over GF(2)
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int col = 0; col < bits && rank < eqs.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < eqs.size() && !get_bit(eqs[pivot], col)) ++pivot;
        if (pivot == eqs.size()) continue;
        std::swap(eqs[rank], eqs[pivot]);
        for (std::size_t r = 0; r < eqs.size(); ++r)
            if (r != rank && get_bit(eqs[r], col))
                for (int w = 0; w < words; ++w) eqs[r][w] ^= eqs[rank][w];
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<char> is_pivot(bits, 0);
    for (int c : pivot_col) is_pivot[c] = 1;

    for (int f = 0; f < bits; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint64_t> vec(words, 0);
        set_bit(vec, f);
        for (std::size_t r = 0; r < rank; ++r)
            if (get_bit(eqs[r], f)) set_bit(vec, pivot_col[r]);
        space.basis.push_back(std::move(vec));
    }
    space.dimension = static_cast<long long>(space.basis.size());

    for (const auto& vec : space.basis)
        if (!is_relation(set, space.decode(vec)))
            throw std::logic_error("relation basis vector failed the parity re-check");
    return space;
}

namespace {

std::vector<std::uint64_t> encode(const Relation& rel, int n, int m, int k) {
    const int bits = 2 * n + m * k;
    std::vector<std::uint64_t> vec((bits + 63) / 64, 0);
    for (int i : rel.rows) set_bit(vec, i);
    for (int j : rel.cols) set_bit(vec, n + j);
    for (int t = 0; t < k; ++t)
        for (int s : rel.symbols[t]) set_bit(vec, 2 * n + t * m + s);
    return vec;
}

bool jp_shape(const Relation& rel, int n) {
    for (const auto& xs : rel.symbols)
        if (xs.size() != 1) return false;
    const bool rows_proper = !rel.rows.empty() && static_cast<int>(rel.rows.size()) < n;
    const bool cols_proper = !rel.cols.empty() && static_cast<int>(rel.cols.size()) < n;
    return rows_proper || cols_proper;
}

}  // namespace

JpSearchResult find_jp_relations(const MofsSet& set, long long choice_bound, int dim_bound) {
    JpSearchResult out;
    const int n = set.order(), m = set.symbol_count(), k = set.size();
    if (k == 0) return out;

    long long choices = 1;
    bool choice_feasible = true;
    for (int t = 0; t < k; ++t) {
        choices *= m;
        if (choices > choice_bound) {
            choice_feasible = false;
            break;
        }
    }

    std::set<std::vector<std::uint64_t>> seen;
    auto emit = [&](Relation rel) {
        if (!jp_shape(rel, n)) return;
        if (!is_relation(set, rel)) throw std::logic_error("candidate relation failed the parity re-check");
        if (seen.insert(encode(rel, n, m, k)).second) out.relations.push_back(std::move(rel));
    };

    if (choice_feasible) {
        // fold the singleton symbol choices in, then solve the two-variable
        // system x_row(i) + x_col(j) = c(i,j)
        std::vector<int> choice(k, 0);
        std::vector<std::uint8_t> c(static_cast<std::size_t>(n) * n);
        while (true) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int parity = 0;
                    for (int t = 0; t < k; ++t) parity ^= set[t].at(i, j) == choice[t] ? 1 : 0;
                    c[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(parity);
                }
            for (int x0 = 0; x0 < 2; ++x0) {
                std::vector<std::uint8_t> xr(n), xc(n);
                xr[0] = static_cast<std::uint8_t>(x0);
                for (int j = 0; j < n; ++j) xc[j] = c[j] ^ xr[0];
                for (int i = 0; i < n; ++i) xr[i] = c[static_cast<std::size_t>(i) * n] ^ xc[0];
                bool consistent = true;
                for (int i = 0; i < n && consistent; ++i)
                    for (int j = 0; j < n; ++j)
                        if ((xr[i] ^ xc[j]) != c[static_cast<std::size_t>(i) * n + j]) {
                            consistent = false;
                            break;
                        }
                if (!consistent) continue;
                Relation rel;
                rel.symbols.resize(k);
                for (int t = 0; t < k; ++t) rel.symbols[t].insert(choice[t]);
                for (int i = 0; i < n; ++i)
                    if (xr[i]) rel.rows.insert(i);
                for (int j = 0; j < n; ++j)
                    if (xc[j]) rel.cols.insert(j);
                emit(std::move(rel));
            }
            int t = k - 1;
            while (t >= 0 && choice[t] == m - 1) choice[t--] = 0;
            if (t < 0) break;
            ++choice[t];
        }
        return out;
    }

    RelationSpace space = relation_space(set);
    if (space.dimension <= dim_bound) {
        const int words = (space.bits() + 63) / 64;
        std::vector<std::uint64_t> cur(words, 0);
        // Gray-code walk over the whole space
        const std::uint64_t total = std::uint64_t(1) << space.dimension;
        auto quick_jp_shape = [&](const std::vector<std::uint64_t>& vec) {
            for (int t = 0; t < k; ++t) {
                int weight = 0;
                for (int s = 0; s < m; ++s) weight += get_bit(vec, 2 * n + t * m + s) ? 1 : 0;
                if (weight != 1) return false;
            }
            int rw = 0, cw = 0;
            for (int i = 0; i < n; ++i) rw += get_bit(vec, i) ? 1 : 0;
            for (int j = 0; j < n; ++j) cw += get_bit(vec, n + j) ? 1 : 0;
            return (rw > 0 && rw < n) || (cw > 0 && cw < n);
        };
        for (std::uint64_t g = 1; g < total; ++g) {
            int flip = __builtin_ctzll(g);
            for (int w = 0; w < words; ++w) cur[w] ^= space.basis[flip][w];
            if (!quick_jp_shape(cur)) continue;
            Relation rel = space.decode(cur);
            emit(std::move(rel));
        }
        return out;
    }

    // bounds exceeded: report the basis vectors that happen to be JP
    out.complete = false;
    for (const auto& vec : space.basis) emit(space.decode(vec));
    return out;
}

RelationCertificate certify_maximal_by_relation(const MofsSet& set) {
    RelationCertificate cert;
    cert.lambda_odd = set.lambda() % 2 == 1;
    if (set.size() == 0) return cert;
    auto jp = find_jp_relations(set);
    cert.jp_found = !jp.relations.empty();
    cert.search_complete = jp.complete;
    cert.maximal = cert.lambda_odd && cert.jp_found;
    return cert;
}

}  // namespace mofs::relations
