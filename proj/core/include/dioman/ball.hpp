#pragma once

// Open balls in the supremum norm and the dimension-s rescaling
// B(x, r) -> B(x, r^(s/k)). All inclusion tests across the toolkit are
// strict, matching the strict inequalities in the underlying statements.

#include <vector>

namespace dioman {

struct Ball {
    std::vector<double> center;
    double radius = 0;
    int k = 0;  // ambient dimension

    Ball() = default;
    Ball(std::vector<double> center_, double radius_);
    bool contains(const std::vector<double>& x) const;  // strict, sup norm
};

// Same center, radius r^(s/k). Requires b.k == k. Note radii < 1 grow when
// s < k, and the scaling is the identity at s = k.
Ball scale_ball(const Ball& b, double s, int k);

}  // namespace dioman
