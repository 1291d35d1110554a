#pragma once

// C^2 submanifolds of R^n in Monge form: a graph (alpha, f(alpha)) over an
// open axis-aligned box U in R^d, with sup bounds D (first derivatives) and
// C (second derivatives). Built-in charts (coordinate planes, the parabola,
// Veronese curves, a sphere patch) carry analytic bounds and exact
// evaluation where the arithmetic permits:
//
//   - plane / parabola / veronese evaluate exactly at any QuadExt point;
//   - the sphere patch evaluates exactly at rational points p/q, where
//     f(p/q) = sqrt(q^2 - p1^2 - p2^2) / q lives in a quadratic extension.
//
// Only the bound C is ever consumed at runtime (through the Taylor remainder
// bound), so charts do not expose second derivatives.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dioman/quadratic.hpp"
#include "dioman/rational.hpp"

namespace dioman {

struct BoxDomain {
    std::vector<Rat> lower, upper;  // open box, lower_i < upper_i

    BoxDomain(std::vector<Rat> lo, std::vector<Rat> hi);
    static BoxDomain unit(int d);                      // (0,1)^d
    static BoxDomain symmetric(const Rat& half, int d);  // (-half, half)^d

    int dim() const { return static_cast<int>(lower.size()); }

    // all membership tests are strict (the box is open)
    bool contains(std::span<const double> x) const;
    bool contains(const std::vector<QuadExt>& x) const;
    bool contains_rational(std::span<const Int> p, Int q) const;  // (p_i/q) in box

    // sup-norm distance from x to the boundary: the largest r with
    // B(x, r) inside the box
    double inradius(std::span<const double> x) const;
    QuadExt inradius(const std::vector<QuadExt>& x) const;
};

struct ManifoldChart {
    int d = 0, m = 0;  // n = d + m
    BoxDomain domain{{}, {}};

    std::function<std::vector<double>(std::span<const double>)> f;
    std::function<std::vector<std::vector<double>>(std::span<const double>)> grad;  // m x d

    // exact paths; null when unavailable
    std::function<std::vector<QuadExt>(const std::vector<QuadExt>&)> f_exact;
    std::function<std::vector<std::vector<QuadExt>>(const std::vector<QuadExt>&)> grad_exact;
    std::function<std::vector<QuadExt>(std::span<const Int>, Int)> f_rational;  // f(p/q)

    // rational upper bounds for the derivative sups; tight for exact charts,
    // conservative (slightly inflated) for the sphere patch
    Rat D_bound, C_bound;
    bool exact = false;     // f_exact/grad_exact available
    bool verified = true;   // bounds analytic; false when grid-estimated
    std::string spec;

    int n() const { return d + m; }
    double D() const { return D_bound.get_d(); }
    double C() const { return C_bound.get_d(); }
    bool has_rational_eval() const { return static_cast<bool>(f_rational); }
};

ManifoldChart make_plane(std::vector<QuadExt> beta, int d, BoxDomain domain);
ManifoldChart make_parabola(BoxDomain domain);           // d=1, f = a^2
ManifoldChart make_veronese(int n, BoxDomain domain);    // d=1, f_j = a^(j+1)
ManifoldChart make_sphere(BoxDomain domain);             // d=2, upper hemisphere patch
ManifoldChart make_sphere();                             // default box (-1/2, 1/2)^2

// User-supplied chart. If D/C are negative they are estimated by dense grid
// sampling (finite differences for C) with a 10% safety inflation, and the
// chart is marked unverified.
ManifoldChart make_custom(int d, int m, BoxDomain domain,
                          std::function<std::vector<double>(std::span<const double>)> f,
                          std::function<std::vector<std::vector<double>>(std::span<const double>)> grad,
                          double D = -1, double C = -1);

// Mini-grammar: "plane:<b1,...,bm>" (components "golden", "sqrt2" or
// rationals), "parabola", "veronese:<n>", "sphere". The optional domain
// overrides the chart's default box (and fixes d for plane charts).
ManifoldChart parse_chart(const std::string& spec);
ManifoldChart parse_chart(const std::string& spec, const BoxDomain& domain);

// g_j(alpha) = f_j(alpha) - sum_i alpha_i * df_j/dalpha_i(alpha).
// DomainError when alpha is outside U.
std::vector<double> eval_g(const ManifoldChart& chart, std::span<const double> alpha);
std::vector<QuadExt> eval_g_exact(const ManifoldChart& chart, const std::vector<QuadExt>& alpha);

// Certified upper bound (C d^2 / 2) * (max_i |alpha_i - p_i/q|)^2 on every
// |R_j| of the order-one Taylor expansion between alpha and p/q. Both
// endpoints must lie in U (the box is convex, so the segment does too).
double taylor_remainder_bound(const ManifoldChart& chart, std::span<const double> alpha,
                              const RationalPoint& pq);
QuadExt taylor_remainder_bound_exact(const ManifoldChart& chart,
                                     const std::vector<QuadExt>& alpha, const RationalPoint& pq);

}  // namespace dioman
