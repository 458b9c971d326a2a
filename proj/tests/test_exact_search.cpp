#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mofs/constructions.hpp"
#include "mofs/core.hpp"
#include "mofs/exact_search.hpp"
#include "support.hpp"

using namespace mofs;

TEST_CASE("enumeration counts match the profile-DP oracle") {
    CHECK(exact::count_squares(2, 2) == 2);
    CHECK(exact::count_squares_profile_dp(2, 2) == 2);

    CHECK(exact::count_squares(4, 2) == 90);
    CHECK(exact::count_squares_profile_dp(4, 2) == 90);

    CHECK(exact::count_squares(3, 3) == 12);  // Latin squares of order 3
    CHECK(exact::count_squares_profile_dp(3, 3) == 12);

    CHECK(exact::count_squares_profile_dp(4, 4) == 576);
}

TEST_CASE("order-6 binary square count regression") {
    // frozen after first derivation; the DP oracle agrees
    const long long expected = 297200;
    CHECK(exact::count_squares_profile_dp(6, 2) == expected);
    CHECK(exact::count_squares(6, 2) == expected);
}

TEST_CASE("enumeration is lexicographic and the budget is honored") {
    std::vector<FrequencySquare> first;
    exact::enumerate_squares(4, 2, [&](const FrequencySquare& sq) {
        first.push_back(sq);
        return first.size() < 2;
    });
    REQUIRE(first.size() == 2);
    CHECK(first[0].grid() == Grid{{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
    CHECK(first[0].grid() < first[1].grid());

    exact::SearchBudget tiny;
    tiny.node_limit = 10;
    CHECK_FALSE(exact::count_squares(6, 2, tiny).has_value());
}

TEST_CASE("find_mate on an empty set returns the least square") {
    auto res = exact::find_mate(MofsSet(4, 2));
    REQUIRE(res.status == exact::MateStatus::Found);
    CHECK(res.witness->grid() == Grid{{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
}

TEST_CASE("every order-4 binary square has a mate") {
    long long checked = 0;
    exact::enumerate_squares(4, 2, [&](const FrequencySquare& sq) {
        MofsSet one(std::vector<FrequencySquare>{sq});
        auto res = exact::find_mate(one);
        REQUIRE(res.status == exact::MateStatus::Found);
        CHECK(validate_mofs(one.with_appended(*res.witness)).ok());
        ++checked;
        return true;
    });
    CHECK(checked == 90);
}

TEST_CASE("a transcript reports strictly increasing depths") {
    auto block = parse_square("4 2\n0011\n0011\n1100\n1100\n");
    int last = -1;
    exact::Transcript log = [&](int depth, int row, int col, int symbol) {
        CHECK(depth == last + 1);
        CHECK(row == depth / 4);
        CHECK(col == depth % 4);
        CHECK(symbol >= 0);
        last = depth;
    };
    auto res = exact::find_mate(MofsSet(std::vector<FrequencySquare>{block}), {}, log);
    CHECK(res.status == exact::MateStatus::Found);
    CHECK(last == 15);
}

TEST_CASE("the wall-clock budget produces Indeterminate") {
    auto squares = testdata::parse_superimposed(testdata::kTriple6, 3);
    exact::SearchBudget tiny;
    tiny.time_limit_ms = 1;
    // burn more than a millisecond: order-6 exhaustion takes longer
    auto res = exact::find_mate(MofsSet(squares), tiny);
    // either the clock fired (Indeterminate) or the machine is absurdly
    // fast; accept NoneExists too but never Found
    CHECK(res.status != exact::MateStatus::Found);
}

TEST_CASE("found witnesses are identical across thread counts") {
    auto squares = testdata::parse_superimposed(testdata::kTriple4, 3);
    MofsSet one(std::vector<FrequencySquare>{squares[0]});
    auto single = exact::find_mate(one);
    exact::SearchBudget par;
    par.threads = 4;
    auto multi = exact::find_mate(one, par);
    REQUIRE(single.status == exact::MateStatus::Found);
    REQUIRE(multi.status == exact::MateStatus::Found);
    CHECK(single.witness->grid() == multi.witness->grid());
}

TEST_CASE("the order-4 triple admits no common mate") {
    auto squares = testdata::parse_superimposed(testdata::kTriple4, 3);
    auto res = exact::find_mate(MofsSet(squares));
    CHECK(res.status == exact::MateStatus::NoneExists);

    exact::SearchBudget par;
    par.threads = 4;
    CHECK(exact::find_mate(MofsSet(squares), par).status == exact::MateStatus::NoneExists);
}

TEST_CASE("the dilated block square of order 6 is a bachelor") {
    auto block = parse_square("6 2\n000111\n000111\n000111\n111000\n111000\n111000\n");
    auto res = exact::is_maximal(MofsSet(std::vector<FrequencySquare>{block}));
    CHECK(res.verdict == exact::Maximality::Maximal);
}

TEST_CASE("complete sets are maximal; single order-4 squares are not") {
    auto nine = construct::complete_mofs_prime_power(2, 2);
    auto res = exact::is_maximal(nine);
    CHECK(res.verdict == exact::Maximality::Maximal);

    auto one = exact::is_maximal(MofsSet(std::vector<FrequencySquare>{nine[0]}));
    CHECK(one.verdict == exact::Maximality::NotMaximal);
    REQUIRE(one.extension.has_value());
    CHECK(are_orthogonal(*one.extension, nine[0]));
}

TEST_CASE("budget exhaustion reports Indeterminate") {
    auto squares = testdata::parse_superimposed(testdata::kTriple6, 3);
    exact::SearchBudget tiny;
    tiny.node_limit = 50;
    auto res = exact::find_mate(MofsSet(squares), tiny);
    CHECK(res.status == exact::MateStatus::Indeterminate);
}
