#pragma once

// Enumeration of rational points near a manifold and of the fibred
// denominator sets B(beta; tau) = { q : max_i ||q beta_i|| < q^-tau }, plus
// the badly-approximable counterexample construction: with
// c0 = min_{q <= qmax} q^(1/m) max_j ||q beta_j|| and psi = c0 q^(-1/m),
// the set B(beta; psi) is empty below qmax because the defining inequality
// is strict. All membership decisions are exact for rational and quadratic
// irrational data; doubles only prefilter.

#include <optional>
#include <vector>

#include "dioman/manifold.hpp"
#include "dioman/psi.hpp"
#include "dioman/quadratic.hpp"
#include "dioman/rational.hpp"

namespace dioman {

struct NearPointRecord {
    RationalPoint point;    // length n, denominator q
    double residual;        // max_j |q f_j(p/q) - p_{d+j}|
    QuadExt residual_exact; // meaningful when exact
    bool exact = false;
};

struct NearEnumeration {
    std::vector<NearPointRecord> records;              // sorted by (q, p lex)
    std::vector<std::pair<Int, long long>> counting;   // (q, N(q)) cumulative
};

// All pairs (p, q), q <= qmax, with (p_1/q, ..., p_d/q) strictly inside U and
// |q f_j(p/q) - p_{d+j}| < psi(q) for every j; the p_{d+j} candidates are the
// (at most two) integers in the open residual interval. With `reduced` only
// primitive pairs (gcd(p, q) = 1) are kept.
NearEnumeration enumerate_near(const ManifoldChart& chart, const ApproxFunction& psi, Int qmax,
                               bool reduced = false, int threads = 1);

struct DenominatorSet {
    std::vector<QuadExt> beta;
    std::string bound_spec;      // "tau=a/b" or the psi spec
    std::vector<Int> members;    // sorted
    std::vector<Int> undecided;  // boundary-ambiguous q (empty for exact data)
    Int qmax = 0;
};

// B(beta; tau) up to qmax, exact scan.
DenominatorSet bset(const std::vector<QuadExt>& beta, const Rat& tau, Int qmax,
                    int threads = 1);
// Same with a general psi bound: max_i ||q beta_i|| < psi(q).
DenominatorSet bset_psi(const std::vector<QuadExt>& beta, const ApproxFunction& psi, Int qmax,
                        int threads = 1);

struct BadApproxResult {
    // liminf-style estimate: the minimum of q^(1/m) max_j ||q beta_j|| over
    // the tail q in (qmax/2, qmax]. For the golden ratio this approaches the
    // Hurwitz constant 1/sqrt(5) along Fibonacci denominators.
    double c0 = 0;
    Int argmin_q = 0;
    // global minimum over all q <= qmax: the certified upper bound for the
    // true infimum and the constant the counterexample construction uses
    // (small q usually win: the golden ratio attains 0.3819... at q = 1)
    double scan_min = 0;
    Int scan_argmin_q = 0;
    QuadExt scan_min_dist;  // max_j ||q beta_j|| at the global argmin
    std::optional<Int> rationality_witness;  // q with max_j ||q beta_j|| = 0
};

// Finite-scan constants for badly-approximable behaviour. A rationality
// witness (an exact zero) means beta is not badly approximable; both
// constants come back 0 rather than raising an error.
BadApproxResult badly_approx_constant(const std::vector<QuadExt>& beta, Int qmax);

struct CounterexampleReport {
    BadApproxResult constant;
    bool empty = false;  // B(beta; scan_min q^(-1/m)) empty below qmax
    Int qmax = 0;
    std::string caveat;  // the guarantee is finite-range
};

// Verifies that psi(q) = c q^(-1/m) with c the global scan minimum admits no
// denominators below qmax: the defining inequality is strict, so minimality
// forces emptiness. Throws HypothesisViolated on a rationality witness;
// a nonempty set would contradict minimality and raises CertificationFailed.
CounterexampleReport counterexample_check(const std::vector<QuadExt>& beta, Int qmax);

}  // namespace dioman
