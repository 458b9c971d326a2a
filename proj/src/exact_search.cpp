#include "mofs/exact_search.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

namespace mofs::exact {

long long SearchBudget::default_node_limit() {
    if (const char* env = std::getenv("MOFS_NODE_BUDGET")) {
        long long v = std::atoll(env);
        if (v > 0) return v;
    }
    return 4'000'000'000LL;
}

namespace {

// Cell-by-cell backtracking over row-major cells with ascending symbol
// order, so completions arrive in lexicographic order. Maintains per-row
// and per-column symbol counts, and against every fixed member square the
// running ordered-pair counts plus the remaining-capacity tallies used for
// pruning.
class Engine {
public:
    enum class Outcome { Exhausted, Stopped, Budget, Cancelled };

    Engine(int n, int m, const std::vector<const FrequencySquare*>& members)
        : n_(n), m_(m), lam_(n / m), lam2_(static_cast<long long>(lam_) * lam_), k_(static_cast<int>(members.size())) {
        grid_.assign(static_cast<std::size_t>(n_) * n_, -1);
        row_cnt_.assign(static_cast<std::size_t>(n_) * m_, 0);
        col_cnt_.assign(static_cast<std::size_t>(n_) * m_, 0);
        member_.assign(static_cast<std::size_t>(k_) * n_ * n_, 0);
        pair_cnt_.assign(static_cast<std::size_t>(k_) * m_ * m_, 0);
        remain_.assign(static_cast<std::size_t>(k_) * m_, 0);
        for (int t = 0; t < k_; ++t)
            for (int r = 0; r < n_; ++r)
                for (int c = 0; c < n_; ++c) {
                    int a = members[t]->at(r, c);
                    member_[(static_cast<std::size_t>(t) * n_ + r) * n_ + c] = static_cast<std::int8_t>(a);
                    ++remain_[static_cast<std::size_t>(t) * m_ + a];
                }
    }

    void set_budget(std::atomic<long long>* nodes, long long limit, long long time_limit_ms) {
        nodes_ = nodes;
        node_limit_ = limit;
        if (time_limit_ms > 0)
            deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(time_limit_ms);
    }
    void set_transcript(const Transcript* transcript) { transcript_ = transcript; }
    void set_cancel(const std::atomic<int>* cancel_below, int shard_index) {
        cancel_below_ = cancel_below;
        shard_index_ = shard_index;
    }

    // Presets a full first row (used by sharding); assumes it is valid.
    void preset_row0(const std::vector<std::int8_t>& row) {
        for (int c = 0; c < n_; ++c) place(c, row[c]);
    }

    Outcome run(const std::function<bool(const std::vector<std::int8_t>&)>& on_complete, int start_idx) {
        on_complete_ = &on_complete;
        return dfs(start_idx);
    }

    const std::vector<std::int8_t>& grid() const { return grid_; }

    // Enumerates the valid completions of row 0 (each a length-n symbol
    // vector), in lexicographic order.
    static std::vector<std::vector<std::int8_t>> row0_completions(int n, int m) {
        std::vector<std::vector<std::int8_t>> out;
        std::vector<std::int8_t> row(n, -1);
        std::vector<int> cnt(m, 0);
        const int lam = n / m;
        std::function<void(int)> rec = [&](int c) {
            if (c == n) {
                out.push_back(row);
                return;
            }
            for (int s = 0; s < m; ++s) {
                if (cnt[s] == lam) continue;
                row[c] = static_cast<std::int8_t>(s);
                ++cnt[s];
                rec(c + 1);
                --cnt[s];
            }
        };
        rec(0);
        return out;
    }

private:
    void place(int idx, int s) {
        const int r = idx / n_, c = idx % n_;
        grid_[idx] = static_cast<std::int8_t>(s);
        ++row_cnt_[static_cast<std::size_t>(r) * m_ + s];
        ++col_cnt_[static_cast<std::size_t>(c) * m_ + s];
        for (int t = 0; t < k_; ++t) {
            int a = member_[static_cast<std::size_t>(t) * n_ * n_ + idx];
            ++pair_cnt_[(static_cast<std::size_t>(t) * m_ + a) * m_ + s];
            --remain_[static_cast<std::size_t>(t) * m_ + a];
        }
    }

    void unplace(int idx, int s) {
        const int r = idx / n_, c = idx % n_;
        grid_[idx] = -1;
        --row_cnt_[static_cast<std::size_t>(r) * m_ + s];
        --col_cnt_[static_cast<std::size_t>(c) * m_ + s];
        for (int t = 0; t < k_; ++t) {
            int a = member_[static_cast<std::size_t>(t) * n_ * n_ + idx];
            --pair_cnt_[(static_cast<std::size_t>(t) * m_ + a) * m_ + s];
            ++remain_[static_cast<std::size_t>(t) * m_ + a];
        }
    }

    bool admissible(int idx, int s) const {
        const int r = idx / n_, c = idx % n_;
        if (row_cnt_[static_cast<std::size_t>(r) * m_ + s] >= lam_) return false;
        const int* col = &col_cnt_[static_cast<std::size_t>(c) * m_];
        if (col[s] >= lam_) return false;
        // a symbol whose column deficit equals the cells left in this
        // column must be placed here
        const int cells_left = n_ - r;
        for (int s2 = 0; s2 < m_; ++s2)
            if (s2 != s && lam_ - col[s2] == cells_left) return false;
        for (int t = 0; t < k_; ++t) {
            const int a = member_[static_cast<std::size_t>(t) * n_ * n_ + idx];
            const long long* pc = &pair_cnt_[(static_cast<std::size_t>(t) * m_ + a) * m_];
            if (pc[s] >= lam2_) return false;
            // every pair (a,b) must still be completable from the cells
            // where this member holds a
            const long long rem_after = remain_[static_cast<std::size_t>(t) * m_ + a] - 1;
            for (int b = 0; b < m_; ++b) {
                long long need = lam2_ - pc[b] - (b == s ? 1 : 0);
                if (need > rem_after) return false;
            }
        }
        return true;
    }

    Outcome dfs(int idx) {
        if (idx == n_ * n_) {
            return (*on_complete_)(grid_) ? Outcome::Exhausted : Outcome::Stopped;
        }
        for (int s = 0; s < m_; ++s) {
            long long seen = nodes_->fetch_add(1, std::memory_order_relaxed) + 1;
            if (seen > node_limit_) return Outcome::Budget;
            if ((seen & 0x3FF) == 0) {
                if (cancel_below_ && cancel_below_->load(std::memory_order_relaxed) < shard_index_)
                    return Outcome::Cancelled;
                if (deadline_ != std::chrono::steady_clock::time_point{} &&
                    std::chrono::steady_clock::now() > deadline_)
                    return Outcome::Budget;
            }
            if (!admissible(idx, s)) continue;
            place(idx, s);
            if (transcript_ && *transcript_ && idx >= deepest_) {
                deepest_ = idx + 1;
                (*transcript_)(idx, idx / n_, idx % n_, s);
            }
            Outcome sub = dfs(idx + 1);
            unplace(idx, s);
            if (sub != Outcome::Exhausted) return sub;
        }
        return Outcome::Exhausted;
    }

    int n_, m_, lam_;
    long long lam2_;
    int k_;
    std::vector<std::int8_t> grid_;
    std::vector<int> row_cnt_, col_cnt_;
    std::vector<std::int8_t> member_;
    std::vector<long long> pair_cnt_;
    std::vector<long long> remain_;
    std::atomic<long long>* nodes_ = nullptr;
    long long node_limit_ = 0;
    std::chrono::steady_clock::time_point deadline_{};
    const Transcript* transcript_ = nullptr;
    int deepest_ = 0;
    const std::atomic<int>* cancel_below_ = nullptr;
    int shard_index_ = 0;
    const std::function<bool(const std::vector<std::int8_t>&)>* on_complete_ = nullptr;
};

FrequencySquare square_from_cells(const std::vector<std::int8_t>& cells, int n, int m) {
    Grid g(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g[r][c] = cells[static_cast<std::size_t>(r) * n + c];
    return FrequencySquare::from_grid(std::move(g), m);
}

}  // namespace

std::optional<long long> enumerate_squares(int n, int m, const std::function<bool(const FrequencySquare&)>& visit,
                                           const SearchBudget& budget) {
    if (n <= 0 || m <= 0 || n % m != 0) throw std::invalid_argument("enumerate_squares: bad type");
    Engine engine(n, m, {});
    std::atomic<long long> nodes{0};
    engine.set_budget(&nodes, budget.node_limit, budget.time_limit_ms);
    long long seen = 0;
    auto outcome = engine.run(
        [&](const std::vector<std::int8_t>& cells) {
            ++seen;
            return visit(square_from_cells(cells, n, m));
        },
        0);
    if (outcome == Engine::Outcome::Budget) return std::nullopt;
    return seen;
}

std::optional<long long> count_squares(int n, int m, const SearchBudget& budget) {
    return enumerate_squares(
        n, m, [](const FrequencySquare&) { return true; }, budget);
}

long long count_squares_profile_dp(int n, int m) {
    if (n <= 0 || m <= 0 || n % m != 0) throw std::invalid_argument("count_squares_profile_dp: bad type");
    const int lam = n / m;
    // state: multiset of per-column remaining-capacity vectors, encoded as
    // sorted (capacity vector, multiplicity) pairs
    using Profile = std::map<std::vector<int>, int>;
    std::map<std::pair<int, std::vector<int>>, long long> memo;
    auto encode = [](const Profile& p) {
        std::vector<int> flat;
        for (const auto& [vec, cnt] : p) {
            flat.insert(flat.end(), vec.begin(), vec.end());
            flat.push_back(-cnt);
        }
        return flat;
    };
    std::function<long long(int, const Profile&)> solve = [&](int rows_left, const Profile& prof) -> long long {
        if (rows_left == 0) return 1;
        auto key = std::make_pair(rows_left, encode(prof));
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<std::vector<int>> classes;
        std::vector<int> sizes;
        for (const auto& [vec, cnt] : prof) {
            classes.push_back(vec);
            sizes.push_back(cnt);
        }
        const int nc = static_cast<int>(classes.size());
        std::vector<std::vector<int>> assignment(nc, std::vector<int>(m, 0));
        std::vector<int> sym_left(m, lam);
        long long total = 0;
        // binomial table
        static std::vector<std::vector<long long>> binom;
        if (static_cast<int>(binom.size()) <= n) {
            binom.assign(n + 1, std::vector<long long>(n + 1, 0));
            for (int i = 0; i <= n; ++i) {
                binom[i][0] = 1;
                for (int j = 1; j <= i; ++j) binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0);
            }
        }
        std::function<void(int, int, int, long long)> rec = [&](int ci, int s, int left_in_class, long long ways) {
            if (ci == nc) {
                bool done = true;
                for (int v : sym_left)
                    if (v != 0) done = false;
                if (!done) return;
                Profile next;
                for (int i = 0; i < nc; ++i)
                    for (int s2 = 0; s2 < m; ++s2) {
                        int cols = assignment[i][s2];
                        if (!cols) continue;
                        std::vector<int> vec = classes[i];
                        --vec[s2];
                        bool dead = false;
                        for (int v : vec)
                            if (v < 0) dead = true;
                        if (dead) return;
                        next[vec] += cols;
                    }
                // columns must still be completable
                for (const auto& [vec, cnt] : next)
                    for (int v : vec)
                        if (v > rows_left - 1) return;
                total += ways * solve(rows_left - 1, next);
                return;
            }
            if (s == m) {
                if (left_in_class == 0) rec(ci + 1, 0, ci + 1 < nc ? sizes[ci + 1] : 0, ways);
                return;
            }
            int cap = classes[ci][s] > 0 ? left_in_class : 0;
            cap = std::min(cap, sym_left[s]);
            for (int take = 0; take <= cap; ++take) {
                if (s == m - 1 && take != left_in_class) continue;
                assignment[ci][s] = take;
                sym_left[s] -= take;
                rec(ci, s + 1, left_in_class - take, ways * binom[left_in_class][take]);
                sym_left[s] += take;
                assignment[ci][s] = 0;
            }
        };
        rec(0, 0, nc > 0 ? sizes[0] : 0, 1);
        memo[key] = total;
        return total;
    };
    Profile start;
    start[std::vector<int>(m, lam)] = n;
    return solve(n, start);
}

MateResult find_mate(const MofsSet& set, const SearchBudget& budget, const Transcript& transcript) {
    const int n = set.order(), m = set.symbol_count();
    std::vector<const FrequencySquare*> members;
    for (int t = 0; t < set.size(); ++t) members.push_back(&set[t]);

    std::atomic<long long> nodes{0};
    MateResult result;

    // a transcript serializes the search
    const int threads = transcript ? 1 : std::max(1, budget.threads);
    if (threads == 1) {
        Engine engine(n, m, members);
        engine.set_budget(&nodes, budget.node_limit, budget.time_limit_ms);
        engine.set_transcript(&transcript);
        std::optional<std::vector<std::int8_t>> found;
        auto outcome = engine.run(
            [&](const std::vector<std::int8_t>& cells) {
                found = cells;
                return false;
            },
            0);
        result.nodes = nodes.load();
        if (outcome == Engine::Outcome::Budget) {
            result.status = MateStatus::Indeterminate;
        } else if (found) {
            result.status = MateStatus::Found;
            result.witness = square_from_cells(*found, n, m);
        } else {
            result.status = MateStatus::NoneExists;
        }
        return result;
    }

    // Shard on first-row completions. Shards are merged in index order so
    // the verdict and the (lexicographically least) witness match the
    // single-threaded run.
    auto rows = Engine::row0_completions(n, m);
    const int shard_count = static_cast<int>(rows.size());
    std::vector<int> shard_outcome(shard_count, -1);  // Engine::Outcome
    std::vector<std::optional<std::vector<std::int8_t>>> shard_found(shard_count);
    std::atomic<int> next{0};
    std::atomic<int> first_found{shard_count};

    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= shard_count) return;
            if (first_found.load() < i) {
                shard_outcome[i] = static_cast<int>(Engine::Outcome::Cancelled);
                continue;
            }
            Engine engine(n, m, members);
            engine.set_budget(&nodes, budget.node_limit, budget.time_limit_ms);
            engine.set_cancel(&first_found, i);
            engine.preset_row0(rows[i]);
            auto outcome = engine.run(
                [&](const std::vector<std::int8_t>& cells) {
                    shard_found[i] = cells;
                    return false;
                },
                n);
            if (shard_found[i]) {
                int expect = first_found.load();
                while (i < expect && !first_found.compare_exchange_weak(expect, i)) {
                }
            }
            shard_outcome[i] = static_cast<int>(outcome);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    result.nodes = nodes.load();
    for (int i = 0; i < shard_count; ++i) {
        if (shard_found[i]) {
            result.status = MateStatus::Found;
            result.witness = square_from_cells(*shard_found[i], n, m);
            return result;
        }
        auto oc = static_cast<Engine::Outcome>(shard_outcome[i]);
        if (oc == Engine::Outcome::Budget) {
            result.status = MateStatus::Indeterminate;
            return result;
        }
        if (oc == Engine::Outcome::Cancelled) {
            // only happens below a found shard, which would have returned
            result.status = MateStatus::Indeterminate;
            return result;
        }
    }
    result.status = MateStatus::NoneExists;
    return result;
}

MaximalityResult is_maximal(const MofsSet& set, const SearchBudget& budget, const Transcript& transcript) {
    MateResult mate = find_mate(set, budget, transcript);
    MaximalityResult out;
    out.nodes = mate.nodes;
    switch (mate.status) {
        case MateStatus::Found:
            out.verdict = Maximality::NotMaximal;
            out.extension = std::move(mate.witness);
            break;
        case MateStatus::NoneExists:
            out.verdict = Maximality::Maximal;
            break;
        case MateStatus::Indeterminate:
            out.verdict = Maximality::Indeterminate;
            break;
    }
    return out;
}

}  // namespace mofs::exact
