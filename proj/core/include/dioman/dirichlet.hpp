#pragma once

// The Dirichlet-type solver for manifolds in Monge form.
//
// For a point alpha in U, a normalized monotone psi and a budget Q, the
// linear-forms system is
//
//   | q g_j(alpha) + sum_i p_i df_j/dalpha_i(alpha) - p_{d+j} | < psi(Q)/2
//   | q alpha_i - p_i |                 < (2^-m Q psi(Q)^m)^(-1/d)
//   | q |                               <= Q
//
// with g_j = f_j - sum_i alpha_i df_j/dalpha_i. The (n+1) x (n+1) matrix of
// the forms is unimodular by shape and the bound product is identically 1,
// so Minkowski's linear forms theorem guarantees a nonzero integer solution.
// For Q in the admissible set, the solution projects to a rational point
// p/q in U with
//
//   | alpha_i - p_i/q |        < 2^(m/d) / (q (Q psi(Q)^m)^(1/d))      (i <= d)
//   | f_j(p/q) - p_{d+j}/q |   < psi(q)/q                              (j <= m)
//
// and dirichlet_search re-verifies both directly (exactly, whenever the
// chart evaluates exactly at rational points) rather than inheriting them.

#include <vector>

#include "dioman/manifold.hpp"
#include "dioman/psi.hpp"
#include "dioman/quadratic.hpp"
#include "dioman/rational.hpp"

namespace dioman {

struct LinearFormsSystem {
    const ManifoldChart* chart = nullptr;  // not owned
    std::vector<QuadExt> alpha;            // expansion point
    std::vector<double> alpha_d;
    ApproxFunction psi;                    // normalized, monotone
    Int Q = 1;

    // cached evaluations at alpha
    std::vector<double> g_d;                    // g_j(alpha)
    std::vector<std::vector<double>> jac_d;     // m x d
    bool exact = false;                         // exact rows available
    std::vector<QuadExt> g;
    std::vector<std::vector<QuadExt>> jac;

    int d() const { return chart->d; }
    int m() const { return chart->m; }
    int n() const { return chart->n(); }

    // (psi(Q)/2 repeated m times, mink2 bound repeated d times, Q)
    std::vector<double> bound_vector() const;
    double mink1_bound() const;  // psi(Q)/2
    double mink2_bound() const;  // (2^-m Q psi(Q)^m)^(-1/d)

    // the bound product is 1 by construction; this returns the numeric
    // product for reports
    double bounds_product() const;

    // checks the permutation-and-shear shape that forces det = +-1
    bool structure_unimodular() const;
    std::vector<std::vector<double>> matrix() const;  // G, for reports/tests
};

struct DirichletSolution {
    RationalPoint point;  // p_1..p_n with denominator q
    Int Q = 1;
    double res_v44_max = 0;  // max_i |alpha_i - p_i/q|
    double res_v45_max = 0;  // max_j |f_j(p/q) - p_{d+j}/q|
    bool certified = false;
    bool exact_certificate = false;  // re-verification ran in exact arithmetic
};

// Validates alpha in U (exactly), psi normalized and monotone, Q >= 1, and
// caches the rows.
LinearFormsSystem build_system(const ManifoldChart& chart, std::vector<QuadExt> alpha,
                               const ApproxFunction& psi, Int Q);

// Smallest positive q, then lexicographically smallest p, among integer
// solutions of the Minkowski system; falls back to q = 0 solutions only when no
// positive-q solution exists. Returns (p_1, ..., p_n, q). Minkowski
// guarantees existence, so SearchExhausted signals a bug or precondition
// breach. threads > 1 partitions the q-scan with a deterministic join.
std::vector<Int> solve_system(const LinearFormsSystem& sys, int threads = 1);

// Exact membership test for the admissible set:
//   (2^-m Q psi(Q)^m)^(-1/d) < min{ 1, r, sqrt(B / (C d^2)) },
// r the inradius of U at alpha and B = inf_Q Q psi(Q). Charts with C = 0
// drop the third term. Throws HypothesisViolated when B = 0.
bool admissible_Q(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                  const ApproxFunction& psi, Int Q);

// The first `count` admissible Q below search_cap, ascending. Throws
// Exhausted when fewer exist below the cap (which happens when the growth
// hypothesis fails for this psi).
std::vector<Int> admissible_Q_set(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                                  const ApproxFunction& psi, int count, Int search_cap);

// Solves at budget Q (which should come from admissible_Q_set) and
// re-verifies the two conclusion inequalities directly.
DirichletSolution dirichlet_search(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                                   const ApproxFunction& psi, Int Q, int threads = 1);

// Streams k solutions with strictly increasing distinct q along a doubling
// Q-ladder, each additionally satisfying
//   | alpha_i - p_i/q | < (2/kappa)^(m/d) q^(-1 - (1 - tau m)/d).
// Requires kappa <= Q^tau psi(Q) along the ladder. Throws Exhausted (with
// the ladder height) when the ladder passes qcap first.
std::vector<DirichletSolution> cor2_stream(const ManifoldChart& chart,
                                           const std::vector<QuadExt>& alpha,
                                           const ApproxFunction& psi, const Rat& tau,
                                           const Rat& kappa, int k, Int qcap, int threads = 1);

// The certification inequality 2^(2m/d) C d^2 < q psi(q) (Q psi(Q)^m)^(2/d),
// checked numerically (used by property tests).
bool certification_inequality_holds(const ManifoldChart& chart, const ApproxFunction& psi, Int q, Int Q);

}  // namespace dioman
