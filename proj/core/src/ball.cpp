#include "dioman/ball.hpp"

#include <cmath>

#include "dioman/errors.hpp"

namespace dioman {

Ball::Ball(std::vector<double> center_, double radius_)
    : center(std::move(center_)), radius(radius_), k(static_cast<int>(center.size())) {
    if (center.empty()) throw DomainError("Ball: empty center");
    if (!(radius > 0)) throw DomainError("Ball: radius must be positive");
}

bool Ball::contains(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != k) throw DomainError("Ball: dimension mismatch");
    for (int i = 0; i < k; ++i)
        if (!(std::fabs(x[i] - center[i]) < radius)) return false;
    return true;
}

Ball scale_ball(const Ball& b, double s, int k) {
    if (k < 1) throw DomainError("scale_ball: k must be >= 1");
    if (b.k != k) throw DomainError("scale_ball: ambient dimension mismatch");
    if (!(s > 0)) throw DomainError("scale_ball: s must be positive");
    Ball r = b;
    r.radius = (s == static_cast<double>(k)) ? b.radius  // B^k = B exactly
                                             : std::pow(b.radius, s / static_cast<double>(k));
    return r;
}

}  // namespace dioman
