#pragma once

// Exact rational scalars on top of GMP, plus the parsing/formatting helpers
// shared across the toolkit. All strict inequalities in this library are
// decided exactly whenever the operands are rational (or quadratic, see
// quadratic.hpp); doubles only appear as filters and in reports.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dioman {

using Int = long long;
using BigInt = mpz_class;
using Rat = mpq_class;

// A rational point p/q: integer numerator vector with positive denominator.
// Deliberately NOT reduced to lowest terms: the enumeration counts pairs
// (p, q), not reduced fractions.
struct RationalPoint {
    std::vector<Int> p;
    Int q = 1;

    RationalPoint() = default;
    RationalPoint(std::vector<Int> p_, Int q_);
};

Rat rat_of(Int n, Int d = 1);

// x^e for integer e (negative allowed; requires x != 0 for e < 0).
Rat rat_pow(const Rat& x, long e);

BigInt rat_floor(const Rat& x);
BigInt rat_ceil(const Rat& x);

// Round to nearest integer, ties to even (reporting convention; scans that
// care about ties enumerate both neighbours instead).
BigInt rat_round_half_even(const Rat& x);

// Distance to the nearest integer, in [0, 1/2].
Rat rat_dist_to_nearest(const Rat& x);

double to_double(const Rat& x);

// Exact dyadic value of a finite double.
Rat rat_from_double(double x);

// Accepts "a/b", integers, plain decimals and scientific notation
// ("3/5", "-2", "0.6", "1e-3"). Decimal strings parse to their exact value.
std::optional<Rat> parse_rational(const std::string& s);

// Always "num/den", e.g. "0/1", "-3/5". The CSV convention for exact values.
std::string format_rat(const Rat& x);

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

Int to_int_checked(const BigInt& x);  // throws DomainError on overflow

}  // namespace dioman
