#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mofs/algebra_rank.hpp"
#include "mofs/constructions.hpp"
#include "mofs/core.hpp"
#include "mofs/exact_search.hpp"

using namespace mofs;
using namespace mofs::construct;

TEST_CASE("prime power decomposition") {
    CHECK(prime_power(2) == std::make_pair(2, 1));
    CHECK(prime_power(8) == std::make_pair(2, 3));
    CHECK(prime_power(9) == std::make_pair(3, 2));
    CHECK_FALSE(prime_power(6).has_value());
    CHECK_FALSE(prime_power(1).has_value());
}

TEST_CASE("small fields satisfy the axioms exhaustively") {
    for (auto [p, u] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {2, 3}, {3, 2}, {5, 1}}) {
        GaloisField f(p, u);
        const int q = f.size();
        for (int a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.mul(a, 0) == 0);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
        }
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                for (int c = 0; c < q; ++c) {
                    CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
    }
}

TEST_CASE("GF(4) uses the smallest irreducible modulus") {
    GaloisField f(2, 2);
    // x^2 + x + 1 encoded little-endian
    CHECK(f.modulus() == std::vector<int>{1, 1, 1});
}

TEST_CASE("complete sets attain the size bound and verify") {
    struct Case {
        int q, h;
        long long size;
    };
    for (auto [q, h, size] : {Case{2, 2, 9}, Case{3, 1, 2}, Case{4, 1, 3}, Case{5, 1, 4}, Case{2, 3, 49}}) {
        auto set = complete_mofs_prime_power(q, h);
        CHECK(set.size() == size);
        CHECK(set.size() == rank::hrs_bound(set.order(), set.symbol_count()).value);
        CHECK(validate_mofs(set).ok());
    }
    CHECK_THROWS_AS(complete_mofs_prime_power(6, 1), std::invalid_argument);
    CHECK_THROWS_AS(complete_mofs_prime_power(2, 7), std::invalid_argument);
}

TEST_CASE("(3,1) yields the two order-3 Latin squares") {
    auto set = complete_mofs_prime_power(3, 1);
    REQUIRE(set.size() == 2);
    CHECK(set.order() == 3);
    CHECK(set.lambda() == 1);
    CHECK(set.all_orthogonal());
}

TEST_CASE("dilation blows up entries and preserves orthogonality") {
    MofsSet pair(std::vector<FrequencySquare>{FrequencySquare::from_grid({{0, 1}, {1, 0}}, 2)});
    auto doubled = dilate(pair, 2);
    CHECK(doubled[0].grid() == Grid{{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
    auto same = dilate(pair, 1);
    CHECK(same[0] == pair[0]);

    auto nine = complete_mofs_prime_power(2, 2);
    auto tripled = dilate(nine, 3);
    CHECK(tripled.size() == 9);
    CHECK(tripled.order() == 12);
    CHECK(tripled.lambda() == 6);
    CHECK(validate_mofs(tripled).ok());
}

TEST_CASE("dilation certificates follow the divisibility rules") {
    auto nine = complete_mofs_prime_power(2, 2);

    auto by_completeness = dilation_certificate(nine, 3, false);
    CHECK(by_completeness.verdict == DilationVerdict::MaximalByCompleteness);

    auto divisible = dilation_certificate(nine, 2, false);
    CHECK(divisible.verdict == DilationVerdict::NotMaximalDivisible);
    REQUIRE(divisible.witness.has_value());
    auto doubled = dilate(nine, 2);
    for (int t = 0; t < doubled.size(); ++t) CHECK(are_orthogonal(*divisible.witness, doubled[t]));

    // no rule fires: not complete, even lambda after checks, no relation
    MofsSet partial(std::vector<FrequencySquare>{nine[0], nine[1]});
    CHECK(dilation_certificate(partial, 3, false).verdict == DilationVerdict::Unknown);

    auto latin3 = complete_mofs_prime_power(3, 1);
    MofsSet one3(std::vector<FrequencySquare>{latin3[0]});
    CHECK(dilation_certificate(one3, 5, true).verdict == DilationVerdict::MaximalByRelation);
}

TEST_CASE("circulant extension needs block structure and m | d") {
    auto nine = complete_mofs_prime_power(2, 2);
    auto doubled = dilate(nine, 2);
    auto ext = circulant_extension(doubled, 2);
    CHECK(ext.order() == 8);
    for (int t = 0; t < doubled.size(); ++t) CHECK(are_orthogonal(ext, doubled[t]));

    CHECK_THROWS_AS(circulant_extension(dilate(nine, 3), 3), std::invalid_argument);  // 2 does not divide 3
    CHECK_THROWS_AS(circulant_extension(nine, 2), std::invalid_argument);             // not block-constant

    // d equal to the symbol count on a non-binary base
    auto latin3 = complete_mofs_prime_power(3, 1);
    auto tripled = dilate(latin3, 3);
    auto ext3 = circulant_extension(tripled, 3);
    for (int t = 0; t < tripled.size(); ++t) CHECK(are_orthogonal(ext3, tripled[t]));
}

TEST_CASE("lift_blocks realizes the displayed order-6 matrix") {
    Grid x = {{0, 3, 2, 1, 3, 0}, {1, 0, 2, 2, 3, 1}, {3, 1, 0, 2, 1, 2},
              {1, 2, 2, 1, 0, 3}, {1, 1, 2, 2, 0, 3}, {3, 2, 1, 1, 2, 0}};
    auto lifted = lift_blocks(x, 3);
    CHECK(lifted.order() == 18);
    CHECK(lifted.lambda() == 9);
    CHECK_FALSE(lifted.check().has_value());

    // the block counts recover the matrix
    auto ones = rank::block_count_matrix(lifted, 3, 1);
    auto zeros = rank::block_count_matrix(lifted, 3, 0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            CHECK(ones[i][j] == 3 * x[i][j]);
            CHECK(zeros[i][j] == 9 - 3 * x[i][j]);
        }
}

TEST_CASE("lift_blocks accepts uniform matrices and rejects bad sums") {
    Grid ones4(4, std::vector<int>(4, 1));
    auto lifted = lift_blocks(ones4, 2);
    CHECK(lifted.order() == 8);
    CHECK_FALSE(lifted.check().has_value());

    // swapping two entries inside a row keeps row sums but breaks columns
    Grid bad = {{0, 3, 2, 1, 3, 0}, {1, 0, 2, 2, 3, 1}, {3, 1, 0, 2, 1, 2},
                {1, 2, 2, 1, 0, 3}, {1, 1, 2, 2, 0, 3}, {2, 3, 1, 1, 2, 0}};
    CHECK_THROWS_WITH_AS(lift_blocks(bad, 3), doctest::Contains("column"), std::invalid_argument);

    Grid bad_row = {{0, 3, 2, 1, 3, 0}, {1, 0, 2, 2, 3, 1}, {3, 1, 0, 2, 1, 2},
                    {1, 2, 2, 1, 0, 3}, {1, 1, 2, 2, 0, 3}, {3, 2, 1, 1, 2, 1}};
    CHECK_THROWS_WITH_AS(lift_blocks(bad_row, 3), doctest::Contains("row 5"), std::invalid_argument);
}

TEST_CASE("high power applicability window") {
    // q = 2: accepts exactly when the 2-part of n is 2^h
    CHECK(high_power_applicable(2, 2, 4));
    CHECK(high_power_applicable(2, 2, 12));
    CHECK_FALSE(high_power_applicable(2, 2, 8));
    CHECK_FALSE(high_power_applicable(2, 2, 6));
    // q = 4 = 2^2: v must equal 2h exactly
    CHECK(high_power_applicable(4, 1, 4));
    CHECK(high_power_applicable(4, 1, 12));
    CHECK_FALSE(high_power_applicable(4, 1, 8));
    // q = 8 = 2^3: v in {3h, 3h+1}
    CHECK(high_power_applicable(8, 1, 8));
    CHECK(high_power_applicable(8, 1, 16));
    CHECK_FALSE(high_power_applicable(8, 1, 32));
    CHECK_FALSE(high_power_applicable(6, 1, 6));
}

TEST_CASE("dilating a random MOFS pair keeps orthogonality") {
    std::mt19937_64 rng(5);
    auto nine = complete_mofs_prime_power(2, 2);
    for (int rep = 0; rep < 10; ++rep) {
        int a = static_cast<int>(rng() % 9), b = static_cast<int>(rng() % 9);
        if (a == b) continue;
        MofsSet pair(std::vector<FrequencySquare>{nine[a], nine[b]});
        auto big = dilate(random_isomorphic_copy(pair, rng), 2 + static_cast<int>(rng() % 3));
        CHECK(validate_mofs(big).ok());
    }
}
