#include "mofs/balance.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mofs::balance {

namespace {

// column pattern index in the order (0,1), (1,0), (0,0), (1,1)
inline int pattern_index(int top, int bottom) {
    if (top == 0) return bottom == 1 ? 0 : 2;
    return bottom == 0 ? 1 : 3;
}

long long sum3(const Mat3& a) {
    long long s = 0;
    for (const auto& row : a)
        for (long long v : row) s += v;
    return s;
}

Mat3 swap_rows3(Mat3 a) {
    std::swap(a[0], a[1]);
    return a;
}

Mat3 swap_cols3(Mat3 a) {
    for (auto& row : a) std::swap(row[0], row[1]);
    return a;
}

Mat3 transpose3(const Mat3& a) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[j][i] = a[i][j];
    return t;
}

Mat4 permute4(const Mat4& a, const std::array<int, 4>& row_perm, const std::array<int, 4>& col_perm) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[row_perm[i]][col_perm[j]] = a[i][j];
    return out;
}

Mat4 transpose4(const Mat4& a) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[j][i] = a[i][j];
    return t;
}

}  // namespace

PairProfile pair_profile_rows(const std::vector<int>& f1r1, const std::vector<int>& f1r2,
                              const std::vector<int>& f2r1, const std::vector<int>& f2r2) {
    const int n = static_cast<int>(f1r1.size());
    if (static_cast<int>(f1r2.size()) != n || static_cast<int>(f2r1.size()) != n ||
        static_cast<int>(f2r2.size()) != n)
        throw std::invalid_argument("pair profile: row lengths differ");
    if (n % 2 != 0) throw std::invalid_argument("pair profile: order must be even");
    PairProfile prof;
    prof.n = n;
    prof.m = n / 2;
    for (int c = 0; c < n; ++c) {
        const int i = pattern_index(f1r1[c], f1r2[c]);
        const int j = pattern_index(f2r1[c], f2r2[c]);
        ++prof.aprime[i][j];
        ++prof.a[std::min(i, 2)][std::min(j, 2)];
        if (f1r1[c] == 0 && f2r1[c] == 0) ++prof.psi1;
        if (f1r2[c] == 0 && f2r2[c] == 0) ++prof.psi2;
    }

    const Mat4& ap = prof.aprime;
    auto row_sum = [&](int i) { return ap[i][0] + ap[i][1] + ap[i][2] + ap[i][3]; };
    auto col_sum = [&](int j) { return ap[0][j] + ap[1][j] + ap[2][j] + ap[3][j]; };
    bool ok = row_sum(0) + row_sum(1) + row_sum(2) + row_sum(3) == n && row_sum(0) == row_sum(1) &&
              row_sum(2) == row_sum(3) && col_sum(0) == col_sum(1) && col_sum(2) == col_sum(3) &&
              prof.psi1 == ap[0][0] + ap[0][2] + ap[2][0] + ap[2][2] &&
              prof.psi1 == ap[1][1] + ap[1][3] + ap[3][1] + ap[3][3] &&
              prof.psi2 == ap[1][1] + ap[1][2] + ap[2][1] + ap[2][2] &&
              prof.psi2 == ap[0][0] + ap[0][3] + ap[3][0] + ap[3][3] && admissible(prof.a, prof.m);
    if (!ok) throw std::logic_error("pair profile identities failed; rows are not from binary frequency squares");
    return prof;
}

PairProfile pair_profile(const FrequencySquare& f1, const FrequencySquare& f2, int r1, int r2) {
    if (f1.symbol_count() != 2 || f2.symbol_count() != 2)
        throw std::invalid_argument("pair profile needs binary squares");
    if (f1.order() != f2.order()) throw std::invalid_argument("pair profile: orders differ");
    if (r1 == r2 || r1 < 0 || r2 < 0 || r1 >= f1.order() || r2 >= f1.order())
        throw std::out_of_range("pair profile: bad row indices");
    PairProfile prof = pair_profile_rows(f1.row(r1), f1.row(r2), f2.row(r1), f2.row(r2));
    prof.r1 = r1;
    prof.r2 = r2;
    return prof;
}

PairProfile pair_profile(const Join& join, int r1, int r2) {
    if (join.count() != 2) throw std::invalid_argument("pair profile needs a join of exactly two squares");
    return pair_profile(join.square(0), join.square(1), r1, r2);
}

bool admissible(const Mat3& a, long long m) {
    for (const auto& row : a)
        for (long long v : row)
            if (v < 0) return false;
    if (sum3(a) != 2 * m) return false;
    const long long r3 = a[2][0] + a[2][1] + a[2][2];
    const long long c3 = a[0][2] + a[1][2] + a[2][2];
    if (r3 % 2 != 0 || c3 % 2 != 0) return false;
    const long long r1 = a[0][0] + a[0][1] + a[0][2];
    const long long r2 = a[1][0] + a[1][1] + a[1][2];
    const long long c1 = a[0][0] + a[1][0] + a[2][0];
    const long long c2 = a[0][1] + a[1][1] + a[2][1];
    return r1 == r2 && r1 == m - r3 / 2 && c1 == c2 && c1 == m - c3 / 2;
}

std::vector<Mat3> orbit3(const Mat3& a) {
    const long long total = sum3(a);
    if (total % 2 != 0 || !admissible(a, total / 2))
        throw std::invalid_argument("orbit of an inadmissible matrix");
    std::set<Mat3> seen{a};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Mat3> snapshot(seen.begin(), seen.end());
        for (const auto& x : snapshot)
            for (const Mat3& img : {swap_rows3(x), swap_cols3(x), transpose3(x)})
                if (seen.insert(img).second) grew = true;
    }
    return {seen.begin(), seen.end()};
}

Mat3 canonical3(const Mat3& a) {
    auto orbit = orbit3(a);
    return *std::min_element(orbit.begin(), orbit.end());
}

std::vector<Mat4> orbit4(const Mat4& a) {
    const std::array<int, 4> id{0, 1, 2, 3}, sym{1, 0, 3, 2}, rowswap{1, 0, 2, 3};
    std::set<Mat4> seen{a};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Mat4> snapshot(seen.begin(), seen.end());
        for (const auto& x : snapshot) {
            const Mat4 images[] = {
                permute4(x, sym, id),       // swap symbols in the first square
                permute4(x, id, sym),       // swap symbols in the second square
                permute4(x, rowswap, rowswap),  // swap the two rows
                transpose4(x),              // swap the squares
            };
            for (const auto& img : images)
                if (seen.insert(img).second) grew = true;
        }
    }
    return {seen.begin(), seen.end()};
}

std::string to_string(ExceptionLabel label) {
    switch (label) {
        case ExceptionLabel::None: return "none";
        case ExceptionLabel::E1: return "E1";
        case ExceptionLabel::E2: return "E2";
        case ExceptionLabel::E3: return "E3";
        case ExceptionLabel::E4: return "E4";
        case ExceptionLabel::E5: return "E5";
        case ExceptionLabel::E6: return "E6";
    }
    return "?";
}

Mat3 exception_template(ExceptionLabel label, int n) {
    const long long x = n / 6, y = n / 8;
    switch (label) {
        case ExceptionLabel::E1:
            if (n % 6 != 2) break;
            return Mat3{{{2 * x, 0, 1}, {0, 0, 2 * x + 1}, {0, 2 * x, 0}}};
        case ExceptionLabel::E2:
            if (n % 6 != 2) break;
            return Mat3{{{2 * x + 1, 0, 0}, {0, 1, 2 * x}, {0, 2 * x, 0}}};
        case ExceptionLabel::E3:
            if (n % 6 != 4) break;
            return Mat3{{{2 * x + 1, 0, 0}, {1, 0, 2 * x}, {0, 2 * x + 2, 0}}};
        case ExceptionLabel::E4:
            if (n % 6 != 4) break;
            return Mat3{{{2 * x + 1, 0, 0}, {0, 0, 2 * x + 1}, {0, 2 * x + 1, 1}}};
        case ExceptionLabel::E5:
            if (n % 8 != 4) break;
            return Mat3{{{2 * y + 1, 0, 0}, {2 * y + 1, 0, 0}, {0, 4 * y + 2, 0}}};
        case ExceptionLabel::E6:
            if (n % 8 != 4) break;
            return Mat3{{{2 * y + 1, 0, 0}, {2 * y, 0, 1}, {0, 4 * y + 1, 1}}};
        case ExceptionLabel::None: break;
    }
    throw std::invalid_argument("exception " + to_string(label) + " does not occur at order " + std::to_string(n));
}

ExceptionLabel classify_exception(const Mat3& a, int n) {
    if (n < 8 || n % 4 != 0) throw std::invalid_argument("exception classification needs n = 0 mod 4, n >= 8");
    const Mat3 canon = canonical3(a);
    const ExceptionLabel labels[] = {ExceptionLabel::E1, ExceptionLabel::E2, ExceptionLabel::E3,
                                     ExceptionLabel::E4, ExceptionLabel::E5, ExceptionLabel::E6};
    for (ExceptionLabel label : labels) {
        const int r6 = (label == ExceptionLabel::E1 || label == ExceptionLabel::E2) ? 2
                       : (label == ExceptionLabel::E3 || label == ExceptionLabel::E4) ? 4
                                                                                      : -1;
        if (r6 >= 0 && n % 6 != r6) continue;
        if (r6 < 0 && n % 8 != 4) continue;
        if (canon == canonical3(exception_template(label, n))) return label;
    }
    return ExceptionLabel::None;
}

namespace {

// max-flow on the fixed transportation network: 0 source, 1-3 rows,
// 4-6 columns, 7 sink
bool transport(const Mat3& caps, const std::array<long long, 3>& rows, const std::array<long long, 3>& cols,
               Mat3& result) {
    long long cap[8][8] = {};
    for (int i = 0; i < 3; ++i) cap[0][1 + i] = rows[i];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cap[1 + i][4 + j] = caps[i][j];
    for (int j = 0; j < 3; ++j) cap[4 + j][7] = cols[j];
    long long need = rows[0] + rows[1] + rows[2];
    long long flow = 0;
    while (flow < need) {
        int prev[8];
        std::fill(prev, prev + 8, -1);
        prev[0] = 0;
        int queue[8], qh = 0, qt = 0;
        queue[qt++] = 0;
        while (qh < qt && prev[7] == -1) {
            int u = queue[qh++];
            for (int v = 0; v < 8; ++v)
                if (prev[v] == -1 && cap[u][v] > 0) {
                    prev[v] = u;
                    queue[qt++] = v;
                }
        }
        if (prev[7] == -1) return false;
        long long push = need;
        for (int v = 7; v != 0; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
        for (int v = 7; v != 0; v = prev[v]) {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
        }
        flow += push;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) result[i][j] = cap[4 + j][1 + i];  // residual backwards edge = flow
    return true;
}

}  // namespace

std::optional<BalanceWitness> find_balancer(const Mat3& a, long long m, int p, int q) {
    if (m < 0) throw std::invalid_argument("find_balancer: negative m");
    const long long rc0 = a[0][0] + a[0][1] + a[0][2];
    const long long rc1 = a[1][0] + a[1][1] + a[1][2];
    const long long rc2 = a[2][0] + a[2][1] + a[2][2];
    const long long cc0 = a[0][0] + a[1][0] + a[2][0];
    const long long cc1 = a[0][1] + a[1][1] + a[2][1];
    const long long cc2 = a[0][2] + a[1][2] + a[2][2];
    for (long long r0 = std::max<long long>(0, p); r0 <= std::min<long long>(m, rc0); ++r0) {
        const long long r1 = r0 - p;
        if (r1 < 0 || r1 > rc1) continue;
        const long long r2 = m - r0 - r1;
        if (r2 < 0 || r2 > rc2) continue;
        for (long long c0 = std::max<long long>(0, q); c0 <= std::min<long long>(m, cc0); ++c0) {
            const long long c1 = c0 - q;
            if (c1 < 0 || c1 > cc1) continue;
            const long long c2 = m - c0 - c1;
            if (c2 < 0 || c2 > cc2) continue;
            Mat3 b{};
            if (transport(a, {r0, r1, r2}, {c0, c1, c2}, b)) {
                BalanceWitness w;
                w.b = b;
                w.p = p;
                w.q = q;
                return w;
            }
        }
    }
    return std::nullopt;
}

namespace {

void check_witness(const PairProfile& prof, const BalanceWitness& w) {
    long long total = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (w.b[i][j] < 0 || w.b[i][j] > prof.a[i][j])
                throw std::invalid_argument("witness entry out of range against the pair profile");
            total += w.b[i][j];
        }
    if (total != prof.m) throw std::invalid_argument("witness entries must sum to m");
    const long long dp = (w.b[0][0] + w.b[0][1] + w.b[0][2]) - (w.b[1][0] + w.b[1][1] + w.b[1][2]);
    const long long dq = (w.b[0][0] + w.b[1][0] + w.b[2][0]) - (w.b[0][1] + w.b[1][1] + w.b[2][1]);
    if (dp != w.p || dq != w.q) throw std::invalid_argument("witness sums do not realize the declared (p,q)");
}

}  // namespace

Rect build_rectangle(const FrequencySquare& f1, const FrequencySquare& f2, int r1, int r2,
                     const BalanceWitness& witness) {
    PairProfile prof = pair_profile(f1, f2, r1, r2);
    check_witness(prof, witness);
    const int n = prof.n;
    Rect rect(2, std::vector<int>(n));
    Mat3 chosen{};
    for (int c = 0; c < n; ++c) {
        const int i = std::min(pattern_index(f1.at(r1, c), f1.at(r2, c)), 2);
        const int j = std::min(pattern_index(f2.at(r1, c), f2.at(r2, c)), 2);
        const bool zero_top = chosen[i][j] < witness.b[i][j];
        if (zero_top) ++chosen[i][j];
        rect[0][c] = zero_top ? 0 : 1;
        rect[1][c] = zero_top ? 1 : 0;
    }
    return rect;
}

Rect flip_rectangle(const Rect& rect) {
    Rect out = rect;
    for (auto& row : out)
        for (int& v : row) v = 1 - v;
    return out;
}

std::array<long long, 4> rect_pair_counts(const Rect& rect, const FrequencySquare& f, const std::vector<int>& rows) {
    if (rect.size() != rows.size()) throw std::invalid_argument("rect_pair_counts: row count mismatch");
    std::array<long long, 4> counts{};
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < f.order(); ++c) ++counts[2 * f.at(rows[i], c) + rect[i][c]];
    return counts;
}

bool rect_orthogonal(const Rect& rect, const FrequencySquare& f, const std::vector<int>& rows) {
    auto counts = rect_pair_counts(rect, f, rows);
    const long long want = static_cast<long long>(rows.size()) * f.order() / 4;
    return counts[0] == want && counts[1] == want && counts[2] == want && counts[3] == want;
}

bool is_frequency_rectangle(const Rect& rect) {
    if (rect.empty()) return false;
    const std::size_t n = rect[0].size();
    if (rect.size() % 2 != 0 || n % 2 != 0) return false;
    for (const auto& row : rect) {
        if (row.size() != n) return false;
        std::size_t ones = 0;
        for (int v : row) ones += v;
        if (2 * ones != n) return false;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t ones = 0;
        for (const auto& row : rect) ones += row[c];
        if (2 * ones != rect.size()) return false;
    }
    return true;
}

std::string to_string(TLabel label) {
    switch (label) {
        case TLabel::None: return "none";
        case TLabel::T1: return "T1";
        case TLabel::T2: return "T2";
        case TLabel::T3: return "T3";
        case TLabel::T4: return "T4";
        case TLabel::T1star: return "T1*";
        case TLabel::T2star: return "T2*";
        case TLabel::T3star: return "T3*";
        case TLabel::T4star: return "T4*";
    }
    return "?";
}

namespace {

// the four layouts of the all-constant-blocks exception and, for the
// near-miss exception, the two matrices a single legitimate swap can leave
std::vector<std::pair<TLabel, std::vector<Mat3>>> t_patterns(int n) {
    const long long y = n / 8;
    const Mat3 t1{{{2 * y + 1, 0, 0}, {2 * y + 1, 0, 0}, {0, 4 * y + 2, 0}}};
    const Mat3 s1a{{{2 * y + 1, 0, 0}, {2 * y, 0, 1}, {0, 4 * y + 1, 1}}};
    const Mat3 s1b = swap_rows3(s1a);
    return {
        {TLabel::T1, {t1}},
        {TLabel::T2, {swap_cols3(t1)}},
        {TLabel::T3, {transpose3(t1)}},
        {TLabel::T4, {transpose3(swap_cols3(t1))}},
        {TLabel::T1star, {s1a, s1b}},
        {TLabel::T2star, {swap_cols3(s1a), swap_cols3(s1b)}},
        {TLabel::T3star, {transpose3(s1a), transpose3(s1b)}},
        {TLabel::T4star, {transpose3(swap_cols3(s1a)), transpose3(swap_cols3(s1b))}},
    };
}

TLabel t_label_of(const Mat3& a, int n) {
    if (n % 8 != 4) return TLabel::None;
    for (const auto& [label, mats] : t_patterns(n))
        for (const auto& mat : mats)
            if (a == mat) return label;
    return TLabel::None;
}

}  // namespace

const PairTag& RowTypeTable::pair(int r1, int r2) const {
    if (r1 > r2) std::swap(r1, r2);
    for (const auto& tag : pairs)
        if (tag.r1 == r1 && tag.r2 == r2) return tag;
    throw std::out_of_range("no such pair");
}

RowTypeTable classify_row_types(const FrequencySquare& f1, const FrequencySquare& f2) {
    const int n = f1.order();
    if (f1.symbol_count() != 2 || f2.symbol_count() != 2 || f2.order() != n)
        throw std::invalid_argument("row typing needs two binary squares of one order");
    if (n % 4 != 0 || n < 8) throw std::invalid_argument("row typing needs n = 0 mod 4, n >= 8");
    RowTypeTable table;
    table.n = n;
    table.x = n / 6;
    table.y = n / 8;
    table.row_tags.assign(n, 0);
    const long long x = table.x, y = table.y;

    std::vector<int> psis(n);
    Join join(f1, f2);
    for (int r = 0; r < n; ++r) psis[r] = psi(join, r);

    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = r1 + 1; r2 < n; ++r2) {
            PairProfile prof = pair_profile(f1, f2, r1, r2);
            PairTag tag;
            tag.r1 = r1;
            tag.r2 = r2;
            tag.exception = classify_exception(prof.a, n);
            const long long lo = std::min(psis[r1], psis[r2]);
            const long long hi = std::max(psis[r1], psis[r2]);
            switch (tag.exception) {
                case ExceptionLabel::E1:
                case ExceptionLabel::E2: {
                    unsigned bit;
                    if ((lo == 2 * x && hi == 2 * x + 1) || (lo == 2 * x + 1 && hi == 2 * x + 1))
                        bit = kAlpha1;
                    else if ((lo == x && hi == x + 1) || (lo == x && hi == x))
                        bit = kAlpha2;
                    else
                        throw std::logic_error("alpha pair with an impossible psi multiset");
                    table.row_tags[r1] |= bit;
                    table.row_tags[r2] |= bit;
                    break;
                }
                case ExceptionLabel::E3:
                case ExceptionLabel::E4: {
                    unsigned bit;
                    if ((lo == 2 * x + 1 && hi == 2 * x + 1) || (lo == 2 * x + 1 && hi == 2 * x + 2))
                        bit = kBeta1;
                    else if ((lo == x + 1 && hi == x + 1) || (lo == x && hi == x + 1))
                        bit = kBeta2;
                    else
                        throw std::logic_error("beta pair with an impossible psi multiset");
                    table.row_tags[r1] |= bit;
                    table.row_tags[r2] |= bit;
                    break;
                }
                case ExceptionLabel::E5:
                case ExceptionLabel::E6: {
                    for (int r : {r1, r2})
                        table.row_tags[r] |= psis[r] == 2 * y + 1 ? kGamma1 : kGamma2;
                    // read the layout from the gamma_1 row
                    int ref = psis[r1] == 2 * y + 1 ? r1 : r2;
                    PairProfile oriented =
                        ref == r1 ? prof : pair_profile(f1, f2, r2, r1);
                    tag.t = t_label_of(oriented.a, n);
                    tag.t_reference = ref;
                    if (tag.t == TLabel::None && psis[r1] == 2 * y + 1 && psis[r2] == 2 * y + 1) {
                        PairProfile other = pair_profile(f1, f2, r2, r1);
                        tag.t = t_label_of(other.a, n);
                        tag.t_reference = r2;
                    }
                    break;
                }
                case ExceptionLabel::None: break;
            }
            table.pairs.push_back(tag);
        }
    return table;
}

// ---------------------------------------------------------------------------
// row partitioning

namespace {

struct PairKey {
    int a, b;  // a < b
    bool operator<(const PairKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

struct Ctx {
    const FrequencySquare* f1;
    const FrequencySquare* f2;
    int n, m;
    std::map<PairKey, std::optional<BalanceWitness>> bal00;
    std::map<PairKey, std::vector<BalanceWitness>> window;

    PairKey key(int a, int b) const { return a < b ? PairKey{a, b} : PairKey{b, a}; }

    const std::optional<BalanceWitness>& balanced(int a, int b) {
        PairKey k = key(a, b);
        auto it = bal00.find(k);
        if (it == bal00.end()) {
            PairProfile prof = pair_profile(*f1, *f2, k.a, k.b);
            it = bal00.emplace(k, find_balancer(prof.a, m, 0, 0)).first;
        }
        return it->second;
    }

    // all witnesses with 0 <= p <= 2, |q| <= 2 up to sign (the flipped
    // rectangle realizes the negated pair)
    const std::vector<BalanceWitness>& options(int a, int b) {
        PairKey k = key(a, b);
        auto it = window.find(k);
        if (it == window.end()) {
            PairProfile prof = pair_profile(*f1, *f2, k.a, k.b);
            std::vector<BalanceWitness> opts;
            for (int p = 0; p <= 2; ++p)
                for (int q = -2; q <= 2; ++q) {
                    if (p == 0 && q < 0) continue;
                    if (auto w = find_balancer(prof.a, m, p, q)) opts.push_back(*w);
                }
            it = window.emplace(k, std::move(opts)).first;
        }
        return it->second;
    }
};

// signed zero-sum selection across the given pairs; (0,0) assignments are
// emitted as their own singleton groups by the caller
std::optional<std::vector<PairAssignment>> zero_sum_selection(Ctx& ctx, const std::vector<PairKey>& pairs) {
    std::vector<PairAssignment> chosen(pairs.size());
    std::function<bool(std::size_t, int, int)> dfs = [&](std::size_t idx, int sp, int sq) -> bool {
        if (idx == pairs.size()) return sp == 0 && sq == 0;
        const int left = static_cast<int>(pairs.size() - idx);
        if (std::abs(sp) > 2 * left || std::abs(sq) > 2 * left) return false;
        // witnesses are oriented for the normalized (low, high) row order
        const PairKey k = ctx.key(pairs[idx].a, pairs[idx].b);
        for (const auto& w : ctx.options(k.a, k.b)) {
            for (int sign : {+1, -1}) {
                if (sign < 0 && w.p == 0 && w.q == 0) continue;
                chosen[idx] = {k.a, k.b, w, sign < 0};
                if (dfs(idx + 1, sp + sign * w.p, sq + sign * w.q)) return true;
            }
        }
        return false;
    };
    if (!dfs(0, 0, 0)) return std::nullopt;
    return chosen;
}

// all partitions of rows into unordered pairs, visited until the callback
// accepts one
bool for_each_pairing(std::vector<int> rows, std::vector<PairKey>& current,
                      const std::function<bool(const std::vector<PairKey>&)>& accept) {
    if (rows.empty()) return accept(current);
    const int first = rows[0];
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<int> rest;
        for (std::size_t j = 1; j < rows.size(); ++j)
            if (j != i) rest.push_back(rows[j]);
        current.push_back({std::min(first, rows[i]), std::max(first, rows[i])});
        if (for_each_pairing(std::move(rest), current, accept)) return true;
        current.pop_back();
    }
    return false;
}

void emit_groups(std::vector<BalancedGroup>& groups, const std::vector<PairAssignment>& assignments) {
    BalancedGroup mixed;
    for (const auto& pa : assignments) {
        if (pa.witness.p == 0 && pa.witness.q == 0) {
            groups.push_back(BalancedGroup{{pa}});
        } else {
            mixed.pairs.push_back(pa);
        }
    }
    if (!mixed.pairs.empty()) groups.push_back(std::move(mixed));
}

}  // namespace

PartitionOutcome partition_rows(const FrequencySquare& f1, const FrequencySquare& f2) {
    PartitionOutcome out;
    const int n = f1.order();
    if (f1.symbol_count() != 2 || f2.symbol_count() != 2 || f2.order() != n)
        throw std::invalid_argument("partition_rows needs two binary squares of one order");

    Ctx ctx{&f1, &f2, n, n / 2, {}, {}};

    // greedy matching on the balanceable-pair graph
    std::vector<int> partner(n, -1);
    for (int r = 0; r < n; ++r) {
        if (partner[r] != -1) continue;
        for (int s = 0; s < n; ++s) {
            if (s == r || partner[s] != -1) continue;
            if (ctx.balanced(r, s)) {
                partner[r] = s;
                partner[s] = r;
                break;
            }
        }
    }
    std::vector<int> leftover;
    for (int r = 0; r < n; ++r)
        if (partner[r] == -1) leftover.push_back(r);

    // alternating-path repairs: try to absorb two leftover rows by
    // re-pairing one or two matched pairs
    auto matched_pairs = [&]() {
        std::vector<PairKey> list;
        for (int r = 0; r < n; ++r)
            if (partner[r] > r) list.push_back({r, partner[r]});
        return list;
    };
    bool progress = true;
    while (progress && leftover.size() >= 2) {
        progress = false;
        for (std::size_t i = 0; i < leftover.size() && !progress; ++i)
            for (std::size_t j = i + 1; j < leftover.size() && !progress; ++j) {
                const int u = leftover[i], v = leftover[j];
                if (ctx.balanced(u, v)) {
                    partner[u] = v;
                    partner[v] = u;
                    progress = true;
                    break;
                }
                for (const auto& g : matched_pairs()) {
                    const auto try_repair = [&](int x, int y) {
                        if (ctx.balanced(u, x) && ctx.balanced(v, y)) {
                            partner[u] = x;
                            partner[x] = u;
                            partner[v] = y;
                            partner[y] = v;
                            return true;
                        }
                        return false;
                    };
                    if (try_repair(g.a, g.b) || try_repair(g.b, g.a)) {
                        progress = true;
                        break;
                    }
                }
            }
        if (progress) {
            leftover.clear();
            for (int r = 0; r < n; ++r)
                if (partner[r] == -1) leftover.push_back(r);
        }
    }

    // remaining leftovers become explicitly unbalanced pairs
    std::vector<PairKey> bads;
    for (std::size_t i = 0; i + 1 < leftover.size(); i += 2) bads.push_back({leftover[i], leftover[i + 1]});
    if (leftover.size() % 2 != 0) {
        out.message = "odd number of rows";
        return out;
    }

    std::vector<PairKey> goods = matched_pairs();
    out.unbalanced_pairs = static_cast<int>(bads.size());

    // resolve unbalanced pairs by signed cancellation
    std::vector<BalancedGroup> groups;
    std::vector<char> bad_done(bads.size(), 0), good_done(goods.size(), 0);

    // within the unbalanced pairs themselves: pairs, then triples
    for (std::size_t i = 0; i < bads.size(); ++i)
        for (std::size_t j = i + 1; j < bads.size() && !bad_done[i]; ++j) {
            if (bad_done[j]) continue;
            if (auto sel = zero_sum_selection(ctx, {bads[i], bads[j]})) {
                emit_groups(groups, *sel);
                bad_done[i] = bad_done[j] = 1;
            }
        }
    for (std::size_t i = 0; i < bads.size(); ++i)
        for (std::size_t j = i + 1; j < bads.size() && !bad_done[i]; ++j)
            for (std::size_t l = j + 1; l < bads.size() && !bad_done[i]; ++l) {
                if (bad_done[j] || bad_done[l]) continue;
                if (auto sel = zero_sum_selection(ctx, {bads[i], bads[j], bads[l]})) {
                    emit_groups(groups, *sel);
                    bad_done[i] = bad_done[j] = bad_done[l] = 1;
                }
            }

    // borrow one to three matched pairs: re-split the joint row set over
    // every pairing and look for a signed cancellation
    for (std::size_t i = 0; i < bads.size(); ++i) {
        if (bad_done[i]) continue;
        std::vector<std::size_t> picked;
        std::function<bool(std::size_t, int)> attempt = [&](std::size_t from, int want) -> bool {
            if (want == 0) {
                std::vector<int> rows{bads[i].a, bads[i].b};
                for (std::size_t g : picked) {
                    rows.push_back(goods[g].a);
                    rows.push_back(goods[g].b);
                }
                std::vector<PairKey> current;
                return for_each_pairing(rows, current, [&](const std::vector<PairKey>& pairing) {
                    if (auto sel = zero_sum_selection(ctx, pairing)) {
                        emit_groups(groups, *sel);
                        return true;
                    }
                    return false;
                });
            }
            for (std::size_t g = from; g < goods.size(); ++g) {
                if (good_done[g]) continue;
                picked.push_back(g);
                if (attempt(g + 1, want - 1)) return true;
                picked.pop_back();
            }
            return false;
        };
        bool solved = false;
        for (int helpers = 1; helpers <= 3 && !solved; ++helpers) {
            picked.clear();
            if (attempt(0, helpers)) {
                solved = true;
                bad_done[i] = 1;
                for (std::size_t g : picked) good_done[g] = 1;
            }
        }
        if (!solved) {
            out.message = "rows " + std::to_string(bads[i].a) + "," + std::to_string(bads[i].b) +
                          " admit no balanced grouping within the search window";
            return out;
        }
    }

    for (std::size_t g = 0; g < goods.size(); ++g)
        if (!good_done[g])
            groups.push_back(BalancedGroup{{{goods[g].a, goods[g].b, *ctx.balanced(goods[g].a, goods[g].b), false}}});

    // verify every group before returning it
    for (const auto& group : groups) {
        Rect stacked;
        std::vector<int> rows;
        for (const auto& pa : group.pairs) {
            Rect rect = build_rectangle(f1, f2, pa.r1, pa.r2, pa.witness);
            if (pa.flipped) rect = flip_rectangle(rect);
            stacked.push_back(rect[0]);
            stacked.push_back(rect[1]);
            rows.push_back(pa.r1);
            rows.push_back(pa.r2);
        }
        if (!is_frequency_rectangle(stacked) || !rect_orthogonal(stacked, f1, rows) ||
            !rect_orthogonal(stacked, f2, rows))
            throw std::logic_error("partition produced a group that fails verification");
    }

    out.ok = true;
    out.groups = std::move(groups);
    return out;
}

BinaryMateResult find_binary_mate(const FrequencySquare& f1, const FrequencySquare& f2,
                                  const exact::SearchBudget& fallback_budget) {
    const int n = f1.order();
    if (f1.symbol_count() != 2 || f2.symbol_count() != 2 || f2.order() != n)
        throw std::invalid_argument("find_binary_mate needs two binary squares of one order");
    BinaryMateResult result;
    result.guaranteed = n % 4 == 0 && n >= 8;

    PartitionOutcome partition = partition_rows(f1, f2);
    if (partition.ok) {
        Grid grid(n, std::vector<int>(n, -1));
        for (const auto& group : partition.groups)
            for (const auto& pa : group.pairs) {
                Rect rect = build_rectangle(f1, f2, pa.r1, pa.r2, pa.witness);
                if (pa.flipped) rect = flip_rectangle(rect);
                grid[pa.r1] = rect[0];
                grid[pa.r2] = rect[1];
            }
        FrequencySquare mate = FrequencySquare::from_grid(std::move(grid), 2);
        if (!are_orthogonal(mate, f1) || !are_orthogonal(mate, f2))
            throw std::logic_error("assembled mate failed orthogonality");
        result.status = BinaryMateResult::Status::Found;
        result.square = std::move(mate);
        return result;
    }

    result.partition_failed = true;
    if (fallback_budget.node_limit <= 0) {
        result.status = BinaryMateResult::Status::PartitionNotFound;
        return result;
    }
    auto mate = exact::find_mate(MofsSet(std::vector<FrequencySquare>{f1, f2}), fallback_budget);
    switch (mate.status) {
        case exact::MateStatus::Found:
            result.status = BinaryMateResult::Status::Found;
            result.square = std::move(mate.witness);
            break;
        case exact::MateStatus::NoneExists:
            result.status = BinaryMateResult::Status::NoneExists;
            break;
        case exact::MateStatus::Indeterminate:
            result.status = BinaryMateResult::Status::Indeterminate;
            break;
    }
    return result;
}

void enumerate_admissible(long long m, const std::function<void(const Mat3&)>& visit) {
    const long long total = 2 * m;
    for (long long a33 = 0; a33 <= total; ++a33)
        for (long long a31 = 0; a31 + a33 <= total; ++a31)
            for (long long a32 = 0; a31 + a32 + a33 <= total; ++a32) {
                const long long r3 = a31 + a32 + a33;
                if (r3 % 2 != 0) continue;
                const long long r1 = m - r3 / 2;
                if (r1 < 0) continue;
                for (long long a13 = 0; a13 + a33 <= total && a13 <= r1; ++a13)
                    for (long long a23 = 0; a13 + a23 + a33 <= total && a23 <= r1; ++a23) {
                        const long long c3 = a13 + a23 + a33;
                        if (c3 % 2 != 0) continue;
                        const long long c1 = m - c3 / 2;
                        if (c1 < 0) continue;
                        const long long s1 = r1 - a13, s2 = r1 - a23;
                        const long long t1 = c1 - a31, t2 = c1 - a32;
                        if (s1 < 0 || s2 < 0 || t1 < 0 || t2 < 0) continue;
                        if (s1 + s2 != t1 + t2) continue;
                        for (long long a11 = std::max<long long>(0, s1 - t2); a11 <= std::min(s1, t1); ++a11) {
                            Mat3 a{{{a11, s1 - a11, a13}, {t1 - a11, s2 - (t1 - a11), a23}, {a31, a32, a33}}};
                            if (a[1][1] < 0) continue;
                            visit(a);
                        }
                    }
            }
}

Mat3 random_admissible(long long m, std::mt19937_64& rng) {
    auto uniform = [&](long long lo, long long hi) {
        return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
    };
    const long long total = 2 * m;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const long long a33 = uniform(0, total);
        const long long a31 = uniform(0, total - a33);
        const long long a32 = uniform(0, total - a33 - a31);
        const long long r3 = a31 + a32 + a33;
        if (r3 % 2 != 0) continue;
        const long long r1 = m - r3 / 2;
        if (r1 < 0) continue;
        const long long a13 = uniform(0, std::min(total - a33, r1));
        const long long a23 = uniform(0, std::min(total - a33 - a13, r1));
        const long long c3 = a13 + a23 + a33;
        if (c3 % 2 != 0) continue;
        const long long c1 = m - c3 / 2;
        if (c1 < 0) continue;
        const long long s1 = r1 - a13, s2 = r1 - a23;
        const long long t1 = c1 - a31, t2 = c1 - a32;
        if (s1 < 0 || s2 < 0 || t1 < 0 || t2 < 0 || s1 + s2 != t1 + t2) continue;
        const long long lo = std::max<long long>(0, s1 - t2), hi = std::min(s1, t1);
        if (lo > hi) continue;
        const long long a11 = uniform(lo, hi);
        Mat3 a{{{a11, s1 - a11, a13}, {t1 - a11, s2 - (t1 - a11), a23}, {a31, a32, a33}}};
        if (a[1][1] < 0) continue;
        if (!admissible(a, m)) continue;
        return a;
    }
    throw std::runtime_error("random_admissible: sampling failed");
}

}  // namespace mofs::balance
