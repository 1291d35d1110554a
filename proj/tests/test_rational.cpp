#include <doctest.h>

#include "dioman/errors.hpp"
#include "dioman/rational.hpp"

using namespace dioman;

TEST_CASE("parse_rational accepts fractions, decimals and scientific notation") {
    CHECK(*parse_rational("3/5") == Rat(3, 5));
    CHECK(*parse_rational("0.6") == Rat(3, 5));
    CHECK(*parse_rational("-2") == Rat(-2));
    CHECK(*parse_rational("1e-3") == Rat(1, 1000));
    CHECK(*parse_rational("2.5e2") == Rat(250));
    CHECK(*parse_rational("-0.25") == Rat(-1, 4));
    CHECK(*parse_rational("7") == Rat(7));
    CHECK(*parse_rational(".5") == Rat(1, 2));
}

TEST_CASE("parse_rational rejects junk") {
    CHECK(!parse_rational(""));
    CHECK(!parse_rational("abc"));
    CHECK(!parse_rational("1/"));
    CHECK(!parse_rational("/2"));
    CHECK(!parse_rational("1.2.3"));
    CHECK(!parse_rational("1e"));
    CHECK(!parse_rational("0x10"));
}

TEST_CASE("format_rat always prints num/den") {
    CHECK(format_rat(Rat(0)) == "0/1");
    CHECK(format_rat(Rat(7, 8)) == "7/8");
    CHECK(format_rat(Rat(-3, 5)) == "-3/5");
}

TEST_CASE("format_double is the shortest round-trip decimal") {
    CHECK(format_double(0.875) == "0.875");
    CHECK(format_double(0.1) == "0.1");
    double v = 2.371373705661655e-03;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("floor, ceil, round-half-even") {
    CHECK(rat_floor(Rat(7, 2)) == 3);
    CHECK(rat_floor(Rat(-7, 2)) == -4);
    CHECK(rat_ceil(Rat(7, 2)) == 4);
    CHECK(rat_round_half_even(Rat(7, 2)) == 4);    // 3.5 -> 4
    CHECK(rat_round_half_even(Rat(5, 2)) == 2);    // 2.5 -> 2
    CHECK(rat_round_half_even(Rat(-5, 2)) == -2);  // -2.5 -> -2
    CHECK(rat_round_half_even(Rat(1, 3)) == 0);
}

TEST_CASE("distance to nearest integer") {
    CHECK(rat_dist_to_nearest(Rat(1, 3)) == Rat(1, 3));
    CHECK(rat_dist_to_nearest(Rat(2, 3)) == Rat(1, 3));
    CHECK(rat_dist_to_nearest(Rat(5)) == Rat(0));
    CHECK(rat_dist_to_nearest(Rat(-7, 2)) == Rat(1, 2));
}

TEST_CASE("rat_pow handles negative exponents") {
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    CHECK(rat_pow(Rat(5), 0) == Rat(1));
    CHECK_THROWS_AS(rat_pow(Rat(0), -1), DomainError);
}

TEST_CASE("rat_from_double is exact") {
    CHECK(rat_from_double(0.5) == Rat(1, 2));
    CHECK(rat_from_double(0.1) != Rat(1, 10));  // 0.1 is not a dyadic rational
    CHECK(to_double(rat_from_double(0.1)) == 0.1);
}

TEST_CASE("RationalPoint requires q >= 1") {
    CHECK_THROWS_AS(RationalPoint({1, 2}, 0), DomainError);
    RationalPoint p({1, 2}, 3);
    CHECK(p.q == 3);
}
