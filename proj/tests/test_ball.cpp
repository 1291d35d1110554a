#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "dioman/ball.hpp"
#include "dioman/errors.hpp"

using namespace dioman;

TEST_CASE("ball construction and strict containment") {
    Ball b({0.5}, 0.25);
    CHECK(b.k == 1);
    CHECK(b.contains({0.6}));
    CHECK(!b.contains({0.75}));  // boundary excluded: open ball
    CHECK(!b.contains({0.8}));
    CHECK_THROWS_AS(Ball({0.5}, 0.0), DomainError);
    CHECK_THROWS_AS(Ball({}, 1.0), DomainError);
}

TEST_CASE("sup-norm balls in the plane") {
    Ball b({0.0, 0.0}, 1.0);
    CHECK(b.contains({0.9, 0.9}));  // corners belong to sup-norm balls
    CHECK(!b.contains({1.0, 0.0}));
}

TEST_CASE("scale_ball at s = k is the identity, exactly") {
    Ball b({0.3}, 0.123456789);
    Ball r = scale_ball(b, 1.0, 1);
    CHECK(r.radius == b.radius);
    Ball b2({0.3, 0.4}, 1e-7);
    CHECK(scale_ball(b2, 2.0, 2).radius == 1e-7);
}

TEST_CASE("scale_ball examples") {
    // square root in the plane
    Ball b({0.5, 0.5}, 1e-4);
    CHECK(scale_ball(b, 1.0, 2).radius == doctest::Approx(1e-2).epsilon(1e-14));
    // r = 1e-3, s = 0.875, k = 1: 10^(-2.625)
    Ball c({0.0}, 1e-3);
    CHECK(scale_ball(c, 0.875, 1).radius ==
          doctest::Approx(2.3713737056616554e-3).epsilon(1e-12));
}

TEST_CASE("scale_ball validates arguments") {
    Ball b({0.5}, 0.1);
    CHECK_THROWS_AS(scale_ball(b, 1.0, 2), DomainError);   // dimension mismatch
    CHECK_THROWS_AS(scale_ball(b, 0.0, 1), DomainError);
    CHECK_THROWS_AS(scale_ball(b, -1.0, 1), DomainError);
}

TEST_CASE("scaling round-trips within ulp-scale tolerance") {
    uint64_t s = 0x12345ULL;
    auto next = [&] {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    for (int k : {1, 2, 3}) {
        for (int it = 0; it < 200; ++it) {
            double r = std::pow(10.0, -9.0 * next());  // radii in [1e-9, 1]
            double sv = 0.1 + next() * (k - 0.1);      // s in (0, k]
            Ball b(std::vector<double>(k, 0.5), r);
            Ball fwd = scale_ball(b, sv, k);
            Ball back = scale_ball(fwd, static_cast<double>(k) * k / sv, k);
            CHECK(back.radius == doctest::Approx(r).epsilon(1e-12));
        }
    }
}
