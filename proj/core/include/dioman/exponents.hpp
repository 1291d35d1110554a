#pragma once

// Exponent arithmetic: the critical exponent s = (n+1)/(tau+1) - m, the
// auxiliary eta with d*eta + m*tau = 1, the series classifier for the
// s-dimensional Hausdorff measure of S_n(psi), the orders at infinity of
// 1/psi, and the finite-Q approximability scan.

#include <vector>

#include "dioman/psi.hpp"
#include "dioman/quadratic.hpp"
#include "dioman/rational.hpp"

namespace dioman {

struct ExponentBundle {
    int n = 0, m = 0, d = 0;
    Rat tau;
    Rat s;    // (n+1)/(tau+1) - m
    Rat eta;  // (1 - m*tau)/d
    bool eta_valid = false;
};

// s = (n+1)/(tau+1) - m, exact. Rejects m >= n, m < 0, n < 1, tau <= 0.
Rat critical_exponent(int n, int m, const Rat& tau);

struct EtaResult {
    Rat eta;
    bool valid;          // eta > 0, i.e. m*tau < 1
    bool boundary_warn;  // eta >= tau, i.e. tau <= 1/n
};

// eta with d*eta + m*tau = 1; never throws, flags instead.
EtaResult eta_exponent(int d, int m, const Rat& tau);

ExponentBundle make_bundle(int n, int m, const Rat& tau);

enum class SeriesClass { MeasureZero, MeasureInfinity };

// Classifies sum_q q^(n-s) psi(q)^s for a power law psi = c q^-tau.
// The term is c^s q^(n-s-s*tau); the series converges iff the exponent is
// < -1 (exponent exactly -1 diverges: harmonic series). Tabulated psi has
// no asymptotics and raises Unclassifiable.
SeriesClass jarnik_classify(const ApproxFunction& psi, int n, const Rat& s);

struct OrderEstimate {
    double tau_star;  // lower order at infinity of 1/psi
    double tau_hat;   // upper order at infinity of 1/psi
    bool exact;       // power laws: both equal tau exactly
};

// Power law: (tau, tau) exactly. Tabulated: empirical min/max of
// -log psi(q) / log q over the last half of the table (entries with q >= 2),
// flagged as estimates. A finite table cannot determine the true orders.
OrderEstimate upper_lower_orders(const ApproxFunction& psi);

// All witnesses (p, q) with q <= qmax and max_i |q y_i - p_i| < psi(q),
// p_i the nearest integer to q y_i (the only candidate that can win).
// Sorted by q. Exact for exact coordinates.
std::vector<RationalPoint> psi_witnesses_upto(const std::vector<QuadExt>& y,
                                              const ApproxFunction& psi, Int qmax);

}  // namespace dioman
