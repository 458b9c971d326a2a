#include "mofs/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mofs {

namespace {

std::optional<std::string> check_grid(const Grid& grid, int m) {
    const int n = static_cast<int>(grid.size());
    if (n == 0) return "empty grid";
    if (m < 1) return "symbol count must be positive";
    if (n % m != 0) return "symbol count " + std::to_string(m) + " does not divide order " + std::to_string(n);
    const int lambda = n / m;
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(grid[r].size()) != n)
            return "row " + std::to_string(r) + " has length " + std::to_string(grid[r].size());
        for (int c = 0; c < n; ++c) {
            if (grid[r][c] < 0 || grid[r][c] >= m)
                return "cell (" + std::to_string(r) + "," + std::to_string(c) + ") holds symbol " +
                       std::to_string(grid[r][c]) + " outside 0.." + std::to_string(m - 1);
        }
    }
    std::vector<int> cnt(m);
    for (int r = 0; r < n; ++r) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (int c = 0; c < n; ++c) ++cnt[grid[r][c]];
        for (int s = 0; s < m; ++s)
            if (cnt[s] != lambda)
                return "row " + std::to_string(r) + " has symbol " + std::to_string(s) + " " +
                       std::to_string(cnt[s]) + " times (expected " + std::to_string(lambda) + ")";
    }
    for (int c = 0; c < n; ++c) {
        std::fill(cnt.begin(), cnt.end(), 0);
        for (int r = 0; r < n; ++r) ++cnt[grid[r][c]];
        for (int s = 0; s < m; ++s)
            if (cnt[s] != lambda)
                return "column " + std::to_string(c) + " has symbol " + std::to_string(s) + " " +
                       std::to_string(cnt[s]) + " times (expected " + std::to_string(lambda) + ")";
    }
    return std::nullopt;
}

}  // namespace

FrequencySquare FrequencySquare::from_grid(Grid grid, int symbol_count) {
    if (auto err = check_grid(grid, symbol_count))
        throw std::invalid_argument("invalid frequency square: " + *err);
    const int n = static_cast<int>(grid.size());
    return FrequencySquare(std::move(grid), n, symbol_count);
}

FrequencySquare FrequencySquare::from_grid(Grid grid) {
    int m = 0;
    for (const auto& row : grid)
        for (int v : row) m = std::max(m, v + 1);
    return from_grid(std::move(grid), m);
}

FrequencySquare FrequencySquare::unchecked(Grid grid, int symbol_count) {
    const int n = static_cast<int>(grid.size());
    return FrequencySquare(std::move(grid), n, symbol_count);
}

std::uint64_t FrequencySquare::row_mask(int r) const {
    if (m_ != 2 || n_ > 64) throw std::logic_error("row_mask requires a binary square of order <= 64");
    std::uint64_t mask = 0;
    for (int c = 0; c < n_; ++c)
        if (grid_[r][c] == 1) mask |= std::uint64_t(1) << c;
    return mask;
}

std::optional<std::string> FrequencySquare::check() const { return check_grid(grid_, m_); }

FrequencySquare parse_square(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("square file: missing header line");
    std::istringstream hs(header);
    int n = 0, m = 0;
    if (!(hs >> n >> m) || n <= 0 || m <= 0)
        throw std::invalid_argument("square file: header must be \"n m\"");
    Grid grid(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r) {
        std::string line;
        if (!std::getline(in, line)) throw std::invalid_argument("square file: missing row " + std::to_string(r));
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (m <= 10) {
            if (static_cast<int>(line.size()) != n)
                throw std::invalid_argument("square file: row " + std::to_string(r) + " has " +
                                            std::to_string(line.size()) + " characters (expected " +
                                            std::to_string(n) + ")");
            for (int c = 0; c < n; ++c) {
                if (line[c] < '0' || line[c] > '9')
                    throw std::invalid_argument("square file: row " + std::to_string(r) + " column " +
                                                std::to_string(c) + " is not a digit");
                grid[r][c] = line[c] - '0';
            }
        } else {
            std::istringstream ls(line);
            for (int c = 0; c < n; ++c)
                if (!(ls >> grid[r][c]))
                    throw std::invalid_argument("square file: row " + std::to_string(r) +
                                                " has fewer than " + std::to_string(n) + " entries");
        }
    }
    return FrequencySquare::from_grid(std::move(grid), m);
}

std::string format_square(const FrequencySquare& sq) {
    std::ostringstream out;
    const int n = sq.order(), m = sq.symbol_count();
    out << n << ' ' << m << '\n';
    for (int r = 0; r < n; ++r) {
        if (m <= 10) {
            for (int c = 0; c < n; ++c) out << char('0' + sq.at(r, c));
        } else {
            for (int c = 0; c < n; ++c) {
                if (c) out << ' ';
                out << sq.at(r, c);
            }
        }
        out << '\n';
    }
    return out.str();
}

std::vector<FrequencySquare> parse_square_blocks(const std::string& text) {
    std::vector<FrequencySquare> result;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> block;
    auto flush = [&]() {
        if (block.empty()) return;
        std::string joined;
        for (const auto& l : block) joined += l + "\n";
        result.push_back(parse_square(joined));
        block.clear();
    };
    while (std::getline(in, line)) {
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) trimmed.pop_back();
        if (trimmed.empty()) {
            flush();
            continue;
        }
        // a new "n m" header while a block is complete starts the next square
        block.push_back(trimmed);
        if (block.size() >= 2) {
            std::istringstream hs(block[0]);
            int n = 0, m = 0;
            hs >> n >> m;
            if (n > 0 && static_cast<int>(block.size()) == n + 1) flush();
        }
    }
    flush();
    return result;
}

MofsSet::MofsSet(int n, int m) : n_(n), m_(m) {
    if (n <= 0 || m <= 0 || n % m != 0) throw std::invalid_argument("bad set type");
}

MofsSet::MofsSet(std::vector<FrequencySquare> squares) {
    if (squares.empty()) throw std::invalid_argument("empty set needs an explicit type");
    n_ = squares[0].order();
    m_ = squares[0].symbol_count();
    for (std::size_t i = 0; i < squares.size(); ++i)
        if (squares[i].order() != n_ || squares[i].symbol_count() != m_)
            throw std::invalid_argument("square " + std::to_string(i) + " has a different type");
    squares_ = std::move(squares);
    compute_pair_flags();
}

MofsSet MofsSet::unchecked(int n, int m, std::vector<FrequencySquare> squares) {
    MofsSet set(n, m);
    set.squares_ = std::move(squares);
    set.compute_pair_flags();
    return set;
}

void MofsSet::compute_pair_flags() {
    const int k = size();
    pair_ok_.assign(static_cast<std::size_t>(k) * k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            bool ok = false;
            if (squares_[i].order() == n_ && squares_[j].order() == n_) {
                try {
                    ok = are_orthogonal(squares_[i], squares_[j]);
                } catch (const std::invalid_argument&) {
                    ok = false;
                }
            }
            pair_ok_[static_cast<std::size_t>(i) * k + j] = ok ? 1 : 0;
        }
}

bool MofsSet::pair_orthogonal(int i, int j) const {
    if (i < 0 || j < 0 || i >= size() || j >= size()) throw std::out_of_range("pair index");
    if (i == j) return false;
    if (i > j) std::swap(i, j);
    return pair_ok_[static_cast<std::size_t>(i) * size() + j] != 0;
}

bool MofsSet::all_orthogonal() const {
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (!pair_orthogonal(i, j)) return false;
    return true;
}

MofsSet MofsSet::with_appended(FrequencySquare sq) const {
    std::vector<FrequencySquare> all = squares_;
    all.push_back(std::move(sq));
    return MofsSet(std::move(all));
}

bool are_orthogonal(const FrequencySquare& f, const FrequencySquare& g) {
    if (f.order() != g.order() || f.symbol_count() != g.symbol_count())
        throw std::invalid_argument("orthogonality needs squares of one type");
    const int n = f.order(), m = f.symbol_count();
    const long long want = static_cast<long long>(f.lambda()) * f.lambda();
    std::vector<long long> cnt(static_cast<std::size_t>(m) * m, 0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) ++cnt[static_cast<std::size_t>(f.at(r, c)) * m + g.at(r, c)];
    for (long long v : cnt)
        if (v != want) return false;
    return true;
}

ValidationReport validate_mofs(const MofsSet& set) {
    ValidationReport report;
    const int k = set.size(), m = set.symbol_count();
    for (int i = 0; i < k; ++i)
        if (auto err = set[i].check()) report.invalid_squares.push_back({i, *err});
    const long long want = static_cast<long long>(set.lambda()) * set.lambda();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            std::vector<long long> cnt(static_cast<std::size_t>(m) * m, 0);
            for (int r = 0; r < set.order(); ++r)
                for (int c = 0; c < set.order(); ++c)
                    ++cnt[static_cast<std::size_t>(set[i].at(r, c)) * m + set[j].at(r, c)];
            for (int a = 0; a < m; ++a) {
                bool bad = false;
                for (int b = 0; b < m; ++b)
                    if (cnt[static_cast<std::size_t>(a) * m + b] != want) {
                        report.failing_pairs.push_back({i, j, a, b, cnt[static_cast<std::size_t>(a) * m + b], want});
                        bad = true;
                        break;
                    }
                if (bad) break;
            }
        }
    return report;
}

Join::Join(std::vector<FrequencySquare> squares) : squares_(std::move(squares)) {
    if (squares_.empty()) throw std::invalid_argument("join of zero squares");
    n_ = squares_[0].order();
    for (const auto& s : squares_)
        if (s.order() != n_) throw std::invalid_argument("join members differ in order");
}

Join::Join(const FrequencySquare& a, const FrequencySquare& b) : Join(std::vector<FrequencySquare>{a, b}) {}

std::vector<int> Join::at(int r, int c) const {
    std::vector<int> tuple;
    tuple.reserve(squares_.size());
    for (const auto& s : squares_) tuple.push_back(s.at(r, c));
    return tuple;
}

int psi(const Join& join, int r) {
    if (join.count() != 2) throw std::invalid_argument("psi needs a join of exactly two squares");
    if (join.square(0).symbol_count() != 2 || join.square(1).symbol_count() != 2)
        throw std::invalid_argument("psi needs binary squares");
    if (r < 0 || r >= join.order()) throw std::out_of_range("psi: row index");
    int count = 0;
    for (int c = 0; c < join.order(); ++c)
        if (join.square(0).at(r, c) == 0 && join.square(1).at(r, c) == 0) ++count;
    return count;
}

int eta(const FrequencySquare& f, int r1, int r2) {
    if (f.symbol_count() != 2) throw std::invalid_argument("eta needs a binary square");
    if (r1 < 0 || r1 >= f.order() || r2 < 0 || r2 >= f.order()) throw std::out_of_range("eta: row index");
    if (r1 == r2) throw std::invalid_argument("eta needs two distinct rows");
    int count = 0;
    for (int c = 0; c < f.order(); ++c)
        if (f.at(r1, c) == 0 && f.at(r2, c) == 0) ++count;
    return count;
}

namespace {

bool is_permutation_of(const std::vector<int>& perm, int size) {
    if (static_cast<int>(perm.size()) != size) return false;
    std::vector<char> seen(size, 0);
    for (int v : perm) {
        if (v < 0 || v >= size || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

}  // namespace

MofsSet apply_isomorphism(const MofsSet& set, const Isomorphism& iso) {
    const int n = set.order(), m = set.symbol_count(), k = set.size();
    std::vector<FrequencySquare> out;
    out.reserve(k);
    switch (iso.kind) {
        case IsomorphismKind::RowPermutation: {
            if (!is_permutation_of(iso.perm, n)) throw std::invalid_argument("row permutation malformed");
            for (int t = 0; t < k; ++t) {
                Grid g(n, std::vector<int>(n));
                for (int r = 0; r < n; ++r) g[iso.perm[r]] = set[t].row(r);
                out.push_back(FrequencySquare::from_grid(std::move(g), m));
            }
            break;
        }
        case IsomorphismKind::ColumnPermutation: {
            if (!is_permutation_of(iso.perm, n)) throw std::invalid_argument("column permutation malformed");
            for (int t = 0; t < k; ++t) {
                Grid g(n, std::vector<int>(n));
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) g[r][iso.perm[c]] = set[t].at(r, c);
                out.push_back(FrequencySquare::from_grid(std::move(g), m));
            }
            break;
        }
        case IsomorphismKind::TransposeAll: {
            for (int t = 0; t < k; ++t) {
                Grid g(n, std::vector<int>(n));
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) g[c][r] = set[t].at(r, c);
                out.push_back(FrequencySquare::from_grid(std::move(g), m));
            }
            break;
        }
        case IsomorphismKind::SymbolPermutation: {
            if (!is_permutation_of(iso.perm, m)) throw std::invalid_argument("symbol permutation malformed");
            if (iso.square_index < 0 || iso.square_index >= k)
                throw std::invalid_argument("symbol permutation: square index out of range");
            for (int t = 0; t < k; ++t) {
                if (t != iso.square_index) {
                    out.push_back(set[t]);
                    continue;
                }
                Grid g(n, std::vector<int>(n));
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) g[r][c] = iso.perm[set[t].at(r, c)];
                out.push_back(FrequencySquare::from_grid(std::move(g), m));
            }
            break;
        }
        case IsomorphismKind::ReorderSquares: {
            if (!is_permutation_of(iso.perm, k)) throw std::invalid_argument("square permutation malformed");
            out.resize(k, set[0]);
            for (int t = 0; t < k; ++t) out[iso.perm[t]] = set[t];
            break;
        }
    }
    return MofsSet(std::move(out));
}

std::string set_to_json(const MofsSet& set) {
    nlohmann::json j;
    j["n"] = set.order();
    j["m"] = set.symbol_count();
    auto squares = nlohmann::json::array();
    for (int t = 0; t < set.size(); ++t) squares.push_back(set[t].grid());
    j["squares"] = std::move(squares);
    return j.dump();
}

MofsSet set_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    std::vector<FrequencySquare> squares;
    for (const auto& g : j.at("squares")) squares.push_back(FrequencySquare::from_grid(g.get<Grid>(), m));
    if (squares.empty()) return MofsSet(n, m);
    MofsSet set(std::move(squares));
    if (set.order() != n || set.symbol_count() != m) throw std::invalid_argument("set file: header/grid mismatch");
    return set;
}

namespace {

// Fills rows top to bottom. Cells whose column already saturated a symbol
// are forced; the remainder of the row is a random assignment of the still
// needed symbol multiset, retried on dead ends.
bool fill_rows(Grid& grid, int n, int m, int from_row, std::vector<std::vector<int>>& col_cnt,
               std::mt19937_64& rng, int depth_budget) {
    const int lambda = n / m;
    if (from_row == n) return true;
    if (depth_budget <= 0) return false;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // must-place detection: symbol s must occupy every column where the
        // remaining rows exactly match its deficit
        std::vector<int> row(n, -1);
        std::vector<int> need(m, lambda);
        const int rows_left = n - from_row;
        bool ok = true;
        std::vector<int> free_cols;
        for (int c = 0; c < n && ok; ++c) {
            int forced = -1;
            for (int s = 0; s < m; ++s) {
                if (lambda - col_cnt[c][s] == rows_left) {
                    if (forced != -1) ok = false;
                    forced = s;
                }
            }
            if (forced != -1) {
                row[c] = forced;
                if (--need[forced] < 0) ok = false;
            } else {
                free_cols.push_back(c);
            }
        }
        if (ok) {
            std::vector<int> pool;
            for (int s = 0; s < m; ++s)
                for (int i = 0; i < need[s]; ++i) pool.push_back(s);
            std::shuffle(pool.begin(), pool.end(), rng);
            std::size_t idx = 0;
            for (int c : free_cols) {
                // skip symbols whose column count is already full
                std::size_t probe = idx;
                bool placed = false;
                for (std::size_t tries = 0; tries < pool.size(); ++tries) {
                    std::size_t p = (probe + tries) % pool.size();
                    int s = pool[p];
                    if (s >= 0 && col_cnt[c][s] < lambda) {
                        row[c] = s;
                        pool[p] = -1;
                        placed = true;
                        break;
                    }
                }
                if (!placed) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        for (int c = 0; c < n; ++c) {
            grid[from_row][c] = row[c];
            ++col_cnt[c][row[c]];
        }
        if (fill_rows(grid, n, m, from_row + 1, col_cnt, rng, depth_budget - 1)) return true;
        for (int c = 0; c < n; ++c) --col_cnt[c][row[c]];
    }
    return false;
}

}  // namespace

FrequencySquare random_square(int n, int m, std::mt19937_64& rng) {
    if (n <= 0 || m <= 0 || n % m != 0) throw std::invalid_argument("random_square: bad type");
    Grid grid(n, std::vector<int>(n, 0));
    std::vector<std::vector<int>> col_cnt(n, std::vector<int>(m, 0));
    for (int attempt = 0; attempt < 256; ++attempt) {
        for (auto& col : col_cnt) std::fill(col.begin(), col.end(), 0);
        if (fill_rows(grid, n, m, 0, col_cnt, rng, 4 * n)) return FrequencySquare::from_grid(grid, m);
    }
    throw std::runtime_error("random_square: generation failed");
}

MofsSet random_isomorphic_copy(const MofsSet& set, std::mt19937_64& rng) {
    const int n = set.order(), m = set.symbol_count();
    MofsSet cur = set;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    cur = apply_isomorphism(cur, {IsomorphismKind::RowPermutation, perm, -1});
    std::shuffle(perm.begin(), perm.end(), rng);
    cur = apply_isomorphism(cur, {IsomorphismKind::ColumnPermutation, perm, -1});
    for (int t = 0; t < cur.size(); ++t) {
        std::vector<int> sp(m);
        std::iota(sp.begin(), sp.end(), 0);
        std::shuffle(sp.begin(), sp.end(), rng);
        cur = apply_isomorphism(cur, {IsomorphismKind::SymbolPermutation, sp, t});
    }
    if (rng() & 1) cur = apply_isomorphism(cur, {IsomorphismKind::TransposeAll, {}, -1});
    return cur;
}

}  // namespace mofs
