#pragma once

// Seeded low-discrepancy point draws: a Kronecker sequence on the d-harmonic
// constants with a splitmix64 offset per axis. Samples land in the central
// 3/4 of each box side, so the inscribed radius at every sample is at least
// an eighth of the shortest side and the admissible-Q thresholds stay at
// desk scale.

#include <span>
#include <vector>

#include "dioman/manifold.hpp"
#include "dioman/quadratic.hpp"

namespace dioman {

std::vector<std::vector<double>> sample_points(const BoxDomain& box, int count,
                                               unsigned long long seed);

// exact (dyadic rational) view of a sampled point
std::vector<QuadExt> exact_point(std::span<const double> x);

}  // namespace dioman
