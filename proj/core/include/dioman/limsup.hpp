#pragma once

// Limsup-set machinery: dyadic band covers of near-point balls, the
// full-measure hypothesis check for the mass transference step, grid box
// counting, and the box-counting dimension estimator with its least-squares
// slope fit against the predicted critical exponent.
//
// Box counting is a computable proxy: Hausdorff dimension never exceeds box
// dimension, and at a fixed band resolution the two coincide heuristically
// for these covers. The estimator reports an empirical slope with a standard
// error; it proves nothing.

#include <vector>

#include "dioman/ball.hpp"
#include "dioman/dirichlet.hpp"
#include "dioman/exponents.hpp"
#include "dioman/manifold.hpp"
#include "dioman/psi.hpp"
#include "dioman/rational_points.hpp"

namespace dioman {

struct BandCover {
    int band = 0;
    Int Q_lo = 0, Q_hi = 0;  // records with q in (Q_lo, Q_hi]
    std::vector<Ball> balls;  // centers (p_1/q, ..., p_d/q), radius delta^(d/s) q^(-tau-1)
    double delta = 1.0;
};

// One ball per record; radius delta^(d/s) * q^(-tau-1) with s, d from the
// bundle. delta in (0, 1]; records outside the band are rejected. Covers can
// also be built from a stream of certified solutions.
BandCover build_band_cover(const std::vector<NearPointRecord>& records,
                           const ExponentBundle& bundle, double delta, Int Q_lo, Int Q_hi);
BandCover build_band_cover(const std::vector<DirichletSolution>& solutions,
                           const ExponentBundle& bundle, double delta, Int Q_lo, Int Q_hi);

// Largest delta with delta^(d/s) <= min(1, kappa/(d D), c) where c is the
// power-law coefficient (the containment constant inf q^tau psi(q)). Charts
// with D = 0 drop the middle term. Throws HypothesisViolated when kappa <= 0.
double delta_threshold(const ManifoldChart& chart, const ApproxFunction& psi, const Rat& kappa);
double delta_threshold(const ManifoldChart& chart, const Rat& containment, const Rat& kappa,
                       const ExponentBundle& bundle);

// Number of half-open grid cells of side `cell` (anchored at the box corner)
// that meet the union of the open sup-norm balls, restricted to the box.
long long box_count(const std::vector<Ball>& balls, double cell,
                    const std::vector<double>& box_lo, const std::vector<double>& box_hi);

// Exact-rational variant for rational centers/radii/cells.
struct RationalBall {
    std::vector<Rat> center;
    Rat radius;
};
long long box_count_exact(const std::vector<RationalBall>& balls, const Rat& cell,
                          const std::vector<Rat>& box_lo, const std::vector<Rat>& box_hi);

struct MtpBandResult {
    int band = 0;
    Int Q = 0;
    double fraction = 0;    // covered fraction for this band alone
    double cumulative = 0;  // covered fraction for the union of bands so far
};

// Scales every band-cover ball by B -> B^s in R^d and reports the fraction
// of grid_n^d cell-center test points of U covered, per band and cumulative.
// The full-measure hypothesis predicts cumulative -> 1.
std::vector<MtpBandResult> mtp_hypothesis_check(const ManifoldChart& chart, const Rat& tau,
                                                const Rat& s, int grid_n, int nbands,
                                                int threads = 1);

struct BandPoint {
    int band = 0;
    Int Q = 0;
    double delta = 0;
    long long N = 0;
    bool used = false;  // participates in the slope fit
};

struct FitResult {
    double slope = 0;
    double stderr_ = 0;
};

// Least squares of y against x; stderr of the slope (0 when the fit is
// exact or has no residual degrees of freedom).
FitResult fit_loglog(const std::vector<std::pair<double, double>>& points);

struct DimensionEstimate {
    std::vector<BandPoint> ladder;
    double slope = 0;
    double stderr_ = 0;
    double target_s = 0;
};

// Dyadic-band pipeline: for k = 1..bands, enumerate near points with
// q in (2^(k-1), 2^k], cover them with balls of radius q^(-tau-1), box-count
// at cell delta_k = 2^(-k(tau+1)) over U, and fit log N against log(1/delta)
// over the usable bands (nonempty, k >= 3: the first two bands are warm-up).
// Requires 1/n <= tau < 1/m. Throws InsufficientData below 3 usable bands.
DimensionEstimate estimate_dimension(const ManifoldChart& chart, const Rat& tau, int bands,
                                     int threads = 1);

}  // namespace dioman
