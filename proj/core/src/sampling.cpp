#include "dioman/sampling.hpp"

#include <cmath>

namespace dioman {

namespace {

double splitmix64_unit(unsigned long long& state) {
    state += 0x9e3779b97f4a7c15ULL;
    unsigned long long z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// positive root of x^(d+1) = x + 1, the base of the d-dimensional sequence
double harmonic_root(int d) {
    double x = 1.5;
    for (int it = 0; it < 64; ++it) {
        double f = std::pow(x, d + 1) - x - 1;
        double fp = (d + 1) * std::pow(x, d) - 1;
        x -= f / fp;
    }
    return x;
}

}  // namespace

std::vector<std::vector<double>> sample_points(const BoxDomain& box, int count,
                                               unsigned long long seed) {
    const int d = box.dim();
    const double phi = harmonic_root(d);
    std::vector<double> gamma(d), offset(d);
    unsigned long long state = seed;
    double g = 1.0;
    for (int i = 0; i < d; ++i) {
        g /= phi;
        gamma[i] = g;
        offset[i] = splitmix64_unit(state);
    }
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i) {
            double u = offset[i] + (t + 1) * gamma[i];
            u -= std::floor(u);
            double lo = box.lower[i].get_d(), hi = box.upper[i].get_d();
            x[i] = lo + (0.125 + 0.75 * u) * (hi - lo);
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<QuadExt> exact_point(std::span<const double> x) {
    std::vector<QuadExt> out;
    out.reserve(x.size());
    for (double v : x) out.emplace_back(rat_from_double(v));
    return out;
}

}  // namespace dioman
