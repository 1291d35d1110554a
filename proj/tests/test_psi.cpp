#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dioman/errors.hpp"
#include "dioman/psi.hpp"

using namespace dioman;

TEST_CASE("power law construction and evaluation") {
    auto psi = ApproxFunction::power_law(Rat(1), Rat(1, 2));
    CHECK(psi.kind() == PsiKind::PowerLaw);
    CHECK(psi.monotone());
    CHECK(psi.normalized());
    CHECK(psi.eval(4) == doctest::Approx(0.5));
    CHECK(psi.eval(100) == doctest::Approx(0.1));
    CHECK_THROWS_AS(ApproxFunction::power_law(Rat(0), Rat(1)), DomainError);
    CHECK_THROWS_AS(ApproxFunction::power_law(Rat(1), Rat(-1)), DomainError);
}

TEST_CASE("power law exact values at perfect powers") {
    auto psi = ApproxFunction::power_law(Rat(1), Rat(1, 2));
    CHECK(psi.has_exact_value(4));
    CHECK(psi.exact_value(4) == Rat(1, 2));
    CHECK(psi.has_exact_value(9));
    CHECK(!psi.has_exact_value(5));
    auto integer_tau = ApproxFunction::power_law(Rat(3, 4), Rat(2));
    CHECK(integer_tau.exact_value(5) == Rat(3, 100));
}

TEST_CASE("psi spec parsing") {
    auto psi = ApproxFunction::parse("pow:1:0.5");
    CHECK(psi.tau() == Rat(1, 2));
    CHECK(psi.coeff() == Rat(1));
    CHECK_THROWS_AS(ApproxFunction::parse("pow:1"), DomainError);
    CHECK_THROWS_AS(ApproxFunction::parse("nope:1:2"), DomainError);
}

TEST_CASE("table parsing from CSV") {
    const char* path = "psi_table_test.csv";
    {
        std::ofstream out(path);
        out << "q,psi\n1,1\n2,0.5\n4,0.25\n";
    }
    auto psi = ApproxFunction::parse(std::string("table:") + path);
    CHECK(psi.kind() == PsiKind::Tabulated);
    CHECK(psi.monotone());
    CHECK(psi.eval(2) == doctest::Approx(0.5));
    CHECK(psi.eval(3) == doctest::Approx(0.5));  // step extension
    CHECK(psi.exact_value(3) == Rat(1, 2));
    CHECK(psi.domain_max() == 4);
    CHECK_THROWS_AS(psi.eval(5), DomainError);
    std::remove(path);
}

TEST_CASE("monotonicity validation rejects any table with an ascent") {
    auto bad = ApproxFunction::tabulated({{1, Rat(1)}, {2, Rat(1, 4)}, {3, Rat(1, 2)}});
    CHECK(!bad.monotone());
    CHECK_THROWS_AS(bad.require_monotone(), MonotonicityError);
    auto good = ApproxFunction::tabulated({{1, Rat(1)}, {2, Rat(1, 2)}, {3, Rat(1, 2)}});
    CHECK(good.monotone());
    CHECK_NOTHROW(good.require_monotone());
}

TEST_CASE("table construction rejects bad rows") {
    CHECK_THROWS_AS(ApproxFunction::tabulated({}), DomainError);
    CHECK_THROWS_AS(ApproxFunction::tabulated({{0, Rat(1)}}), DomainError);
    CHECK_THROWS_AS(ApproxFunction::tabulated({{2, Rat(1)}, {2, Rat(1)}}), DomainError);
    CHECK_THROWS_AS(ApproxFunction::tabulated({{1, Rat(0)}}), DomainError);
}

TEST_CASE("normalization clamps to <= 1") {
    auto big = ApproxFunction::power_law(Rat(3), Rat(1));
    CHECK(!big.normalized());
    auto norm = big.normalized_copy();
    CHECK(norm.normalized());
    CHECK(norm.eval(1) == doctest::Approx(1.0));   // clamped
    CHECK(norm.eval(2) == doctest::Approx(1.0));   // 3/2 clamped
    CHECK(norm.eval(6) == doctest::Approx(0.5));   // past the clamp
    auto [c1, t1] = norm.power_at(2);
    CHECK(c1 == Rat(1));
    CHECK(t1 == Rat(0));
    auto [c2, t2] = norm.power_at(6);
    CHECK(c2 == Rat(3));
    CHECK(t2 == Rat(1));

    auto table = ApproxFunction::tabulated({{1, Rat(2)}, {2, Rat(1, 2)}});
    CHECK(!table.normalized());
    CHECK(table.normalized_copy().exact_value(1) == Rat(1));
}

TEST_CASE("exact comparison against scaled psi") {
    auto psi = ApproxFunction::power_law(Rat(1), Rat(1, 2));
    // |1/2| vs psi(4) = 1/2: equal
    CHECK(psi.cmp_abs_vs_scaled(QuadExt(Rat(1, 2)), Rat(1), 4) == 0);
    CHECK(psi.cmp_abs_vs_scaled(QuadExt(Rat(1, 4)), Rat(1), 4) == -1);
    // scale 1/2: |1/4| vs psi(4)/2 = 1/4: equal
    CHECK(psi.cmp_abs_vs_scaled(QuadExt(Rat(1, 4)), Rat(1, 2), 4) == 0);
    auto table = ApproxFunction::tabulated({{1, Rat(1)}, {3, Rat(1, 3)}});
    CHECK(table.cmp_abs_vs_scaled(QuadExt(Rat(1, 3)), Rat(1), 3) == 0);
    CHECK(table.cmp_abs_vs_scaled(QuadExt(Rat(32, 100)), Rat(1), 3) == -1);
}
