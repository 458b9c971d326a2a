// Acceptance suite: runs every exit criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mofs/algebra_rank.hpp"
#include "mofs/balance.hpp"
#include "mofs/constructions.hpp"
#include "mofs/core.hpp"
#include "mofs/exact_search.hpp"
#include "mofs/polytope.hpp"
#include "mofs/relations.hpp"
#include "mofs/tower.hpp"
#include "support.hpp"

using namespace mofs;

namespace {

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;
    std::function<bool(std::string&)> run;
};

bool expect(bool cond, std::string& note, const std::string& what) {
    if (!cond && note.empty()) note = what;
    return cond;
}

// --- generators -------------------------------------------------------------

const MofsSet& complete_set(int q, int h) {
    static std::map<std::pair<int, int>, MofsSet> cache;
    auto key = std::make_pair(q, h);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, construct::complete_mofs_prime_power(q, h)).first;
    return it->second;
}

std::pair<FrequencySquare, FrequencySquare> orthogonal_pair(int n, std::mt19937_64& rng) {
    struct Source {
        int q, h;  // complete set to draw from
        int d;     // dilation factor
    };
    std::vector<Source> sources;
    if (n % 4 == 0) sources.push_back({2, 2, n / 4});
    if (n % 8 == 0) sources.push_back({2, 3, n / 8});
    if (n % 16 == 0) sources.push_back({2, 4, n / 16});
    const Source src = sources[rng() % sources.size()];
    const MofsSet& base = complete_set(src.q, src.h);
    const int a = static_cast<int>(rng() % base.size());
    int b = a;
    while (b == a) b = static_cast<int>(rng() % base.size());
    MofsSet pair(std::vector<FrequencySquare>{base[a], base[b]});
    MofsSet big = src.d == 1 ? pair : construct::dilate(pair, src.d);
    MofsSet shuffled = random_isomorphic_copy(big, rng);
    return {shuffled[0], shuffled[1]};
}

// --- criteria ---------------------------------------------------------------

bool criterion_construction_bound(std::string& note) {
    struct Case {
        int q, h;
    };
    for (auto [q, h] : {Case{2, 2}, Case{3, 1}, Case{4, 1}, Case{5, 1}, Case{2, 3}}) {
        const MofsSet& set = complete_set(q, h);
        auto bound = rank::hrs_bound(set.order(), set.symbol_count());
        if (!expect(bound.exact && set.size() == bound.value, note,
                    "size mismatch at q=" + std::to_string(q) + " h=" + std::to_string(h)))
            return false;
        if (!expect(validate_mofs(set).ok(), note, "validation failed")) return false;
        auto fam = rank::indicator_family(set);
        auto res = rank::verify_independence(fam);
        const long long want = 1 + 2 * (set.order() - 1) + (set.symbol_count() - 1) * set.size();
        if (!expect(res.independent && res.rank == want, note,
                    "rank " + std::to_string(res.rank) + " != " + std::to_string(want)))
            return false;
    }
    return true;
}

bool criterion_nonextendable(std::string& note) {
    auto t4 = testdata::parse_superimposed(testdata::kTriple4, 3);
    auto r4 = exact::find_mate(MofsSet(t4));
    if (!expect(r4.status == exact::MateStatus::NoneExists, note, "order-4 triple verdict")) return false;
    auto t6 = testdata::parse_superimposed(testdata::kTriple6, 3);
    auto r6 = exact::find_mate(MofsSet(t6));
    return expect(r6.status == exact::MateStatus::NoneExists, note, "order-6 triple verdict");
}

bool criterion_no_bachelor_order4(std::string& note) {
    long long count = 0;
    bool all_mated = true;
    exact::enumerate_squares(4, 2, [&](const FrequencySquare& sq) {
        ++count;
        auto res = exact::find_mate(MofsSet(std::vector<FrequencySquare>{sq}));
        if (res.status != exact::MateStatus::Found || !are_orthogonal(*res.witness, sq)) {
            all_mated = false;
            return false;
        }
        return true;
    });
    if (!expect(count == 90, note, "square count " + std::to_string(count) + " != 90")) return false;
    return expect(all_mated, note, "a square had no mate");
}

bool criterion_bachelor_order6(std::string& note) {
    bool found = false;
    long long scanned = 0;
    exact::enumerate_squares(6, 2, [&](const FrequencySquare& sq) {
        ++scanned;
        auto res = exact::find_mate(MofsSet(std::vector<FrequencySquare>{sq}));
        if (res.status == exact::MateStatus::NoneExists) {
            found = true;
            return false;  // early exit on the first bachelor
        }
        return scanned < 100000;
    });
    return expect(found, note, "no bachelor found in the scan prefix");
}

bool criterion_exception_oracle(std::string& note) {
    long long mismatch = 0, seen = 0, exceptional = 0;
    balance::enumerate_admissible(4, [&](const balance::Mat3& a) {
        ++seen;
        const bool balances = balance::find_balancer(a, 4, 0, 0).has_value();
        const bool labeled = balance::classify_exception(a, 8) != balance::ExceptionLabel::None;
        if (balances == labeled) ++mismatch;
        if (labeled) ++exceptional;
    });
    if (!expect(mismatch == 0, note,
                std::to_string(mismatch) + " disagreements among " + std::to_string(seen) + " at order 8"))
        return false;
    if (!expect(exceptional > 0, note, "no exceptional matrix at order 8")) return false;

    std::mt19937_64 rng(20260811);
    for (int n : {12, 16, 20}) {
        const long long m = n / 2;
        std::vector<balance::Mat3> specials;
        for (auto label : {balance::ExceptionLabel::E1, balance::ExceptionLabel::E2, balance::ExceptionLabel::E3,
                           balance::ExceptionLabel::E4, balance::ExceptionLabel::E5,
                           balance::ExceptionLabel::E6}) {
            try {
                for (const auto& mem : balance::orbit3(balance::exception_template(label, n)))
                    specials.push_back(mem);
            } catch (const std::invalid_argument&) {
            }
        }
        for (long long rep = 0; rep < 100000; ++rep) {
            balance::Mat3 a = (rep % 500 == 0 && !specials.empty()) ? specials[rng() % specials.size()]
                                                                    : balance::random_admissible(m, rng);
            const bool balances = balance::find_balancer(a, m, 0, 0).has_value();
            const bool labeled = balance::classify_exception(a, n) != balance::ExceptionLabel::None;
            if (balances == labeled)
                return expect(false, note, "disagreement at order " + std::to_string(n));
        }
    }
    return true;
}

bool criterion_balance_tables(std::string& note) {
    using balance::ExceptionLabel;
    for (long long x : {1, 2, 3}) {
        const int n = static_cast<int>(6 * x + 2);
        const long long m = n / 2;
        for (auto label : {ExceptionLabel::E1, ExceptionLabel::E2}) {
            auto t = balance::exception_template(label, n);
            if (!expect(!balance::find_balancer(t, m, 0, 0).has_value(), note, "alpha template balanced"))
                return false;
            if (!expect(balance::find_balancer(t, m, 0, 1).has_value(), note, "alpha (0,1) missing"))
                return false;
            if (!expect(balance::find_balancer(t, m, 1, 0).has_value(), note, "alpha (1,0) missing"))
                return false;
            const bool diag = balance::find_balancer(t, m, 1, 1).has_value() ||
                              balance::find_balancer(t, m, 1, -1).has_value();
            if (!expect(diag, note, "alpha (1,+-1) missing")) return false;
        }
    }
    for (long long x : {1, 2, 3}) {
        const int n = static_cast<int>(6 * x + 4);
        for (auto label : {ExceptionLabel::E3, ExceptionLabel::E4})
            if (!expect(!balance::find_balancer(balance::exception_template(label, n), n / 2, 0, 0).has_value(),
                        note, "beta template balanced"))
                return false;
    }
    for (long long y : {1, 2, 3}) {
        const int n = static_cast<int>(8 * y + 4);
        const long long m = n / 2;
        for (auto label : {ExceptionLabel::E5, ExceptionLabel::E6})
            if (!expect(!balance::find_balancer(balance::exception_template(label, n), m, 0, 0).has_value(),
                        note, "gamma template balanced"))
                return false;
        auto tstar = balance::exception_template(ExceptionLabel::E6, n);
        for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {1, 1}, {1, -1}})
            if (!expect(balance::find_balancer(tstar, m, p, q).has_value(), note, "T* shift missing"))
                return false;
        auto t1 = balance::exception_template(ExceptionLabel::E5, n);
        auto t2 = t1;
        for (auto& row : t2) std::swap(row[0], row[1]);
        balance::Mat3 t3{}, t4{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                t3[j][i] = t1[i][j];
                t4[j][i] = t2[i][j];
            }
        if (!expect(balance::find_balancer(t1, m, 1, 0).has_value() &&
                        balance::find_balancer(t2, m, 1, 0).has_value(),
                    note, "T1/T2 (1,0) missing"))
            return false;
        if (!expect(balance::find_balancer(t3, m, 0, 1).has_value() &&
                        balance::find_balancer(t4, m, 0, 1).has_value(),
                    note, "T3/T4 (0,1) missing"))
            return false;
    }
    return true;
}

bool criterion_constructive_mate(std::string& note) {
    std::mt19937_64 rng(424242);
    for (int n : {8, 12, 16, 20}) {
        for (int rep = 0; rep < 100; ++rep) {
            auto [f1, f2] = orthogonal_pair(n, rng);
            if (!expect(are_orthogonal(f1, f2), note, "generator produced a non-orthogonal pair")) return false;
            auto res = balance::find_binary_mate(f1, f2);
            if (!expect(res.status == balance::BinaryMateResult::Status::Found && !res.partition_failed, note,
                        "partition failed at n=" + std::to_string(n) + " rep " + std::to_string(rep)))
                return false;
            if (!expect(are_orthogonal(*res.square, f1) && are_orthogonal(*res.square, f2), note,
                        "witness failed verification"))
                return false;
        }
    }
    return true;
}

bool criterion_order24_any_pair(std::string& note) {
    std::mt19937_64 rng(515151);
    for (int rep = 0; rep < 25; ++rep) {
        auto f1 = random_square(24, 2, rng);
        auto f2 = random_square(24, 2, rng);
        auto res = balance::find_binary_mate(f1, f2);
        if (!expect(res.status == balance::BinaryMateResult::Status::Found && !res.partition_failed, note,
                    "mate missing at rep " + std::to_string(rep)))
            return false;
        if (!expect(are_orthogonal(*res.square, f1) && are_orthogonal(*res.square, f2), note,
                    "witness failed verification"))
            return false;
    }
    return true;
}

bool criterion_worked_example(std::string& note) {
    auto f1 = testdata::complete_binary_square(testdata::kExampleF1Rows, 8);
    auto f2 = testdata::complete_binary_square(testdata::kExampleF2Rows, 8);
    auto p12 = balance::pair_profile(f1, f2, 0, 1);
    auto p34 = balance::pair_profile(f1, f2, 2, 3);
    using balance::Mat3;
    using balance::Mat4;
    if (!expect(p12.a == Mat3{{{2, 0, 1}, {0, 0, 3}, {0, 2, 0}}}, note, "A(r1,r2)")) return false;
    if (!expect(p12.aprime == Mat4{{{2, 0, 1, 0}, {0, 0, 1, 2}, {0, 1, 0, 0}, {0, 1, 0, 0}}}, note, "A'(r1,r2)"))
        return false;
    if (!expect(p34.a == Mat3{{{1, 1, 1}, {1, 1, 1}, {1, 1, 0}}}, note, "A(r3,r4)")) return false;
    if (!expect(p34.aprime == Mat4{{{1, 1, 1, 0}, {1, 1, 0, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}}}, note, "A'(r3,r4)"))
        return false;
    if (!expect(balance::classify_exception(p12.a, 8) == balance::ExceptionLabel::E1, note, "E1 label"))
        return false;
    balance::BalanceWitness printed;
    printed.b = Mat3{{{1, 0, 1}, {0, 0, 1}, {0, 1, 0}}};
    printed.p = 1;
    printed.q = 0;
    try {
        auto top = balance::build_rectangle(f1, f2, 0, 1, printed);
        auto bottom = balance::build_rectangle(f1, f2, 2, 3, printed);
        if (!expect(balance::rect_pair_counts(top, f1, {0, 1})[0] == 5, note, "(1,0) shift on rows 1,2"))
            return false;
        if (!expect(balance::rect_pair_counts(bottom, f1, {2, 3})[0] == 5, note, "(1,0) shift on rows 3,4"))
            return false;
    } catch (const std::exception& e) {
        return expect(false, note, std::string("printed witness rejected: ") + e.what());
    }
    if (!expect(balance::is_frequency_rectangle(testdata::kExampleRectangle) &&
                    balance::rect_orthogonal(testdata::kExampleRectangle, f1, {0, 1, 2, 3}) &&
                    balance::rect_orthogonal(testdata::kExampleRectangle, f2, {0, 1, 2, 3}),
                note, "printed 4x8 rectangle failed verification"))
        return false;
    return true;
}

bool criterion_polytope(std::string& note) {
    using namespace mofs::polytope;
    for (int m : {1, 2, 3}) {
        mpz_class gamma = gamma_lcm(2 * m - 1);
        for (int scale : {1, 2}) {
            PolytopeSpec spec{m, mpq_class(gamma) * scale};
            auto vs = vertices(spec);
            // oracle: nonnegative solutions of the 2x2 support systems
            std::set<std::vector<mpq_class>> oracle;
            const int dim = 2 * m + 1;
            {
                std::vector<mpq_class> v(dim, 0);
                v[m] = spec.b;
                oracle.insert(v);
            }
            for (int i = 0; i < dim; ++i)
                for (int j = i + 1; j < dim; ++j) {
                    mpq_class xj = spec.b * mpq_class(m - i, j - i);
                    mpq_class xi = spec.b - xj;
                    xi.canonicalize();
                    xj.canonicalize();
                    if (xi < 0 || xj < 0) continue;
                    std::vector<mpq_class> v(dim, 0);
                    v[i] = xi;
                    v[j] = xj;
                    oracle.insert(v);
                }
            std::set<std::vector<mpq_class>> got(vs.begin(), vs.end());
            if (!expect(got == oracle, note, "vertex sets differ at m=" + std::to_string(m))) return false;
        }
    }
    for (int k : {2, 3}) {
        for (long long a = 0; a <= k; ++a) {
            std::vector<long long> x{a, 2 * (k - a), a};
            auto pieces = polytope::decompose(x, 1, k);
            if (!expect(static_cast<int>(pieces.size()) == k, note, "piece count m=1")) return false;
        }
        const long long sum = 12 * k, weight = 24 * k;
        for (long long x0 = 0; x0 <= sum; ++x0)
            for (long long x1 = 0; x0 + x1 <= sum; ++x1)
                for (long long x2 = 0; x0 + x1 + x2 <= sum; ++x2)
                    for (long long x3 = 0; x0 + x1 + x2 + x3 <= sum; ++x3) {
                        const long long x4 = sum - x0 - x1 - x2 - x3;
                        if (x1 + 2 * x2 + 3 * x3 + 4 * x4 != weight) continue;
                        std::vector<long long> x{x0, x1, x2, x3, x4};
                        auto pieces = polytope::decompose(x, 2, 6 * k);
                        if (static_cast<int>(pieces.size()) != k)
                            return expect(false, note, "piece count m=2");
                        std::vector<long long> total(5, 0);
                        for (const auto& piece : pieces) {
                            long long s = 0, w = 0;
                            for (int i = 0; i < 5; ++i) {
                                s += piece[i];
                                w += i * piece[i];
                                total[i] += piece[i];
                            }
                            if (s != 12 || w != 24) return expect(false, note, "piece sums m=2");
                        }
                        if (total != x) return expect(false, note, "pieces do not sum to x");
                    }
    }
    return true;
}

bool criterion_tower(std::string& note) {
    std::mt19937_64 rng(616161);
    for (int rep = 0; rep < 5; ++rep) {
        auto f1 = random_square(96, 2, rng);
        auto f2 = random_square(96, 2, rng);
        try {
            auto mate = tower::tower_mate({f1, f2});
            if (!expect(are_orthogonal(mate, f1) && are_orthogonal(mate, f2), note, "tower mate not orthogonal"))
                return false;
        } catch (const std::exception& e) {
            return expect(false, note, std::string("tower mate failed: ") + e.what());
        }
    }
    return true;
}

bool criterion_dilation_pipeline(std::string& note) {
    const MofsSet& nine = complete_set(2, 2);
    auto tripled = construct::dilate(nine, 3);
    if (!expect(tripled.size() == 9 && tripled.order() == 12 && tripled.lambda() == 6 &&
                    validate_mofs(tripled).ok(),
                note, "3-dilation invalid"))
        return false;
    auto cert = construct::dilation_certificate(nine, 3, false);
    if (!expect(cert.verdict == construct::DilationVerdict::MaximalByCompleteness, note,
                "3-dilation certificate"))
        return false;

    auto cert2 = construct::dilation_certificate(nine, 2, false);
    if (!expect(cert2.verdict == construct::DilationVerdict::NotMaximalDivisible && cert2.witness.has_value(),
                note, "2-dilation certificate"))
        return false;
    auto doubled = construct::dilate(nine, 2);
    for (int t = 0; t < doubled.size(); ++t)
        if (!expect(are_orthogonal(*cert2.witness, doubled[t]), note, "extension not orthogonal")) return false;
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "complete-set construction, validation and exact rank", 10, criterion_construction_bound},
        {2, "non-extendable triples at orders 4 and 6", 600, criterion_nonextendable},
        {3, "all 90 order-4 binary squares have a mate", 60, criterion_no_bachelor_order4},
        {4, "an order-6 binary bachelor square exists", 3600, criterion_bachelor_order6},
        {5, "exception classifier agrees with the balance solver", 300, criterion_exception_oracle},
        {6, "(p,q)-balance tables of the exceptional templates", 1, criterion_balance_tables},
        {7, "constructive mate for orthogonal pairs at n = 8,12,16,20", 300, criterion_constructive_mate},
        {8, "mate for arbitrary binary pairs at n = 24", 60, criterion_order24_any_pair},
        {9, "worked order-8 example reproduced exactly", 1, criterion_worked_example},
        {10, "polytope vertices and integer decomposition", 120, criterion_polytope},
        {11, "tower mate for five random order-96 pairs", 600, criterion_tower},
        {12, "dilation certificates and circulant extension", 10, criterion_dilation_pipeline},
    };

    int failures = 0;
    for (auto& criterion : criteria) {
        std::string note;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = criterion.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && secs > criterion.time_limit_s) {
            ok = false;
            note = "time limit exceeded";
        }
        std::printf("[%2d] %s  (%.2fs)  %s%s%s\n", criterion.id, ok ? "PASS" : "FAIL", secs,
                    criterion.name.c_str(), note.empty() ? "" : " -- ", note.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
