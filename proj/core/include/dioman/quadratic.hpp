#pragma once

// Exact arithmetic in a real quadratic extension Q(sqrt(D)).
//
// A value is a + b*sqrt(D) with rational a, b and integer D >= 0. D == 0
// marks a plain rational; a perfect-square D is folded away on construction,
// so b != 0 implies sqrt(D) is irrational and the representation is unique.
// Binary operations require compatible extensions: equal D, or one operand
// rational. Q(sqrt(D)) is a field, so sums and products stay representable.
//
// This is what makes the golden-ratio and sqrt(2) scans exact: distances to
// the nearest integer, residuals q*beta - p, and their integer powers all
// live in one Q(sqrt(D)).

#include <string>
#include <vector>

#include "dioman/rational.hpp"

namespace dioman {

class QuadExt {
  public:
    QuadExt() : a_(0), b_(0), D_(0) {}
    QuadExt(Rat a) : a_(std::move(a)), b_(0), D_(0) {}  // NOLINT: implicit by design
    QuadExt(Rat a, Rat b, long D);

    static QuadExt golden();         // (sqrt(5) - 1) / 2
    static QuadExt sqrt2_minus_1();  // sqrt(2) - 1
    static QuadExt sqrt_of(long N);  // N >= 0

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    long D() const { return D_; }

    bool is_rational() const { return D_ == 0; }
    const Rat& rational_value() const;  // requires is_rational()

    int sign() const;
    bool is_zero() const { return D_ == 0 && a_ == 0; }
    QuadExt abs() const { return sign() < 0 ? -*this : *this; }

    QuadExt operator-() const;
    QuadExt operator+(const QuadExt& o) const;
    QuadExt operator-(const QuadExt& o) const;
    QuadExt operator*(const QuadExt& o) const;
    QuadExt pow_ui(unsigned long e) const;

    int cmp(const QuadExt& o) const { return (*this - o).sign(); }
    int cmp(const Rat& r) const { return (*this - QuadExt(r)).sign(); }

    BigInt floor() const;
    BigInt nearest_int() const;      // ties (rational half-integers) to even
    QuadExt dist_to_nearest() const; // ||x||, in [0, 1/2]

    double to_double() const;
    Rat approx(unsigned bits) const;  // |approx - x| <= 2^-bits

    std::string str() const;  // "a/b" or "a/b+c/d*sqrt(D)"

  private:
    Rat a_, b_;
    long D_;
};

// Exact three-way comparison |x| vs c * q^(-tau) with rational c > 0,
// q >= 1, rational tau. Raises both sides to the tau-denominator power, so
// the decision is exact; a double prefilter keeps the common case cheap.
int cmp_abs_vs_rat_power(const QuadExt& x, const Rat& c, Int q, const Rat& tau);

// Comparison across extensions (e.g. Q(sqrt 5) vs Q(sqrt 2)): exact when
// compatible, otherwise certified intervals with escalating precision up to
// max_precision_bits(). Returns 0 only for ties that survive the ladder.
int cmp_cross(const QuadExt& x, const QuadExt& y);

// Precision ceiling for the certified-interval ladder (default 256 bits,
// the point past which a straddling comparison is reported as a tie).
void set_max_precision_bits(unsigned bits);
unsigned max_precision_bits();

// "golden" | "sqrt2" | anything parse_rational accepts.
QuadExt parse_exact_scalar(const std::string& spec);

// Comma-separated list of the above.
std::vector<QuadExt> parse_exact_vector(const std::string& spec);

}  // namespace dioman
