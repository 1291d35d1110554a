#include "dioman/exponents.hpp"

#include <algorithm>
#include <cmath>

#include "dioman/errors.hpp"

namespace dioman {

Rat critical_exponent(int n, int m, const Rat& tau) {
    if (n < 1) throw DomainError("critical_exponent: n must be >= 1");
    if (m < 0 || m >= n) throw DomainError("critical_exponent: need 0 <= m < n");
    if (sgn(tau) <= 0) throw DomainError("critical_exponent: tau must be positive");
    return Rat(n + 1) / (tau + 1) - m;
}

EtaResult eta_exponent(int d, int m, const Rat& tau) {
    if (d < 1) throw DomainError("eta_exponent: d must be >= 1");
    if (m < 1) throw DomainError("eta_exponent: m must be >= 1");
    if (sgn(tau) <= 0) throw DomainError("eta_exponent: tau must be positive");
    EtaResult r;
    r.eta = (1 - m * tau) / d;
    r.valid = sgn(r.eta) > 0;
    r.boundary_warn = r.eta >= tau;  // equivalent to tau <= 1/n
    return r;
}

ExponentBundle make_bundle(int n, int m, const Rat& tau) {
    ExponentBundle b;
    b.n = n;
    b.m = m;
    b.d = n - m;
    b.tau = tau;
    b.s = critical_exponent(n, m, tau);
    if (m >= 1) {
        auto e = eta_exponent(b.d, m, tau);
        b.eta = e.eta;
        b.eta_valid = e.valid;
    } else {
        // m = 0: d*eta = 1 - 0 so eta = 1/d (full-space case)
        b.eta = Rat(1) / b.d;
        b.eta_valid = true;
    }
    return b;
}

SeriesClass jarnik_classify(const ApproxFunction& psi, int n, const Rat& s) {
    if (psi.kind() != PsiKind::PowerLaw)
        throw Unclassifiable("jarnik_classify: tabulated psi has no asymptotics");
    if (n < 1) throw DomainError("jarnik_classify: n must be >= 1");
    if (sgn(s) <= 0 || s >= n) throw DomainError("jarnik_classify: need s in (0, n)");
    Rat exponent = n - s - s * psi.tau();
    // exponent -1 is the harmonic boundary: divergent
    return exponent < -1 ? SeriesClass::MeasureZero : SeriesClass::MeasureInfinity;
}

OrderEstimate upper_lower_orders(const ApproxFunction& psi) {
    if (psi.kind() == PsiKind::PowerLaw) {
        double t = psi.tau().get_d();
        return {t, t, true};
    }
    const auto& table = psi.table();
    // tail = last half, and only entries with q >= 2 (log 1 = 0)
    size_t start = table.size() / 2;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (size_t i = start; i < table.size(); ++i) {
        auto [q, v] = table[i];
        if (q < 2) continue;
        double r = -std::log(v.get_d()) / std::log(static_cast<double>(q));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (!std::isfinite(lo))
        throw DomainError("upper_lower_orders: table tail has no entries with q >= 2");
    return {lo, hi, false};
}

std::vector<RationalPoint> psi_witnesses_upto(const std::vector<QuadExt>& y,
                                              const ApproxFunction& psi, Int qmax) {
    if (qmax < 1) throw DomainError("psi_witnesses_upto: qmax must be >= 1");
    if (y.empty()) throw DomainError("psi_witnesses_upto: empty point");
    std::vector<RationalPoint> out;
    for (Int q = 1; q <= qmax; ++q) {
        bool ok = true;
        std::vector<Int> p(y.size());
        for (size_t i = 0; i < y.size() && ok; ++i) {
            QuadExt qy = QuadExt(Rat(static_cast<long>(q))) * y[i];
            BigInt pi = qy.nearest_int();
            QuadExt err = qy - QuadExt(Rat(pi));
            // nearest integer minimizes |q y_i - p|, so it is the only
            // candidate; ties give the same distance either way
            if (psi.cmp_abs_vs_scaled(err, Rat(1), q) >= 0) {
                ok = false;
            } else {
                p[i] = to_int_checked(pi);
            }
        }
        if (ok) out.emplace_back(std::move(p), q);
    }
    return out;
}

}  // namespace dioman
