#include "dioman/limsup.hpp"

#include <algorithm>
#include <cmath>

#include "dioman/errors.hpp"
#include "dioman/parallel.hpp"

namespace dioman {

namespace {

constexpr long long kCellCap = 1LL << 27;  // desk-scale grid limit

// smallest index i >= 0 whose cell right edge lo + (i+1) cell exceeds a
long long first_cell(double a, double lo, double cell) {
    double t = (a - lo) / cell;
    long long i = static_cast<long long>(std::floor(t));
    while (!(lo + static_cast<double>(i + 1) * cell > a)) ++i;
    while (i > 0 && lo + static_cast<double>(i) * cell > a) --i;
    return std::max(0LL, i);
}

// largest index whose cell left edge lo + i cell is below b
long long last_cell(double b, double lo, double cell, long long ncells) {
    double t = (b - lo) / cell;
    long long i = static_cast<long long>(std::ceil(t)) - 1;
    while (!(lo + static_cast<double>(i) * cell < b)) --i;
    while (lo + static_cast<double>(i + 1) * cell < b) ++i;
    return std::min(ncells - 1, i);
}

long long cells_along(double lo, double hi, double cell) {
    return static_cast<long long>(std::ceil((hi - lo) / cell));
}

}  // namespace

namespace {

BandCover cover_from_points(const std::vector<const RationalPoint*>& points,
                            const ExponentBundle& bundle, double delta, Int Q_lo, Int Q_hi) {
    if (!(delta > 0 && delta <= 1)) throw DomainError("build_band_cover: delta must be in (0,1]");
    if (!(Q_lo < Q_hi)) throw DomainError("build_band_cover: empty band");
    BandCover cover;
    cover.Q_lo = Q_lo;
    cover.Q_hi = Q_hi;
    cover.delta = delta;
    const double tau_d = bundle.tau.get_d();
    const double shrink =
        std::pow(delta, static_cast<double>(bundle.d) / bundle.s.get_d());
    for (const auto* pt : points) {
        Int q = pt->q;
        if (q <= Q_lo || q > Q_hi)
            throw DomainError("build_band_cover: record outside the band");
        std::vector<double> center(static_cast<size_t>(bundle.d));
        for (int i = 0; i < bundle.d; ++i)
            center[i] = static_cast<double>(pt->p[i]) / static_cast<double>(q);
        double radius = shrink * std::pow(static_cast<double>(q), -tau_d - 1.0);
        cover.balls.emplace_back(std::move(center), radius);
    }
    return cover;
}

}  // namespace

BandCover build_band_cover(const std::vector<NearPointRecord>& records,
                           const ExponentBundle& bundle, double delta, Int Q_lo, Int Q_hi) {
    std::vector<const RationalPoint*> pts;
    pts.reserve(records.size());
    for (const auto& rec : records) pts.push_back(&rec.point);
    return cover_from_points(pts, bundle, delta, Q_lo, Q_hi);
}

BandCover build_band_cover(const std::vector<DirichletSolution>& solutions,
                           const ExponentBundle& bundle, double delta, Int Q_lo, Int Q_hi) {
    std::vector<const RationalPoint*> pts;
    pts.reserve(solutions.size());
    for (const auto& sol : solutions) pts.push_back(&sol.point);
    return cover_from_points(pts, bundle, delta, Q_lo, Q_hi);
}

double delta_threshold(const ManifoldChart& chart, const ApproxFunction& psi, const Rat& kappa) {
    if (psi.kind() != PsiKind::PowerLaw)
        throw DomainError("delta_threshold: supply the containment constant for tabulated psi");
    auto bundle = make_bundle(chart.n(), chart.m, psi.tau());
    return delta_threshold(chart, psi.coeff(), kappa, bundle);
}

double delta_threshold(const ManifoldChart& chart, const Rat& containment, const Rat& kappa,
                       const ExponentBundle& bundle) {
    if (sgn(kappa) <= 0)
        throw HypothesisViolated("delta_threshold: kappa = inf Q^tau psi(Q) must be positive");
    if (sgn(containment) <= 0)
        throw HypothesisViolated("delta_threshold: containment constant must be positive");
    Rat base = std::min(Rat(1), containment);
    if (sgn(chart.D_bound) > 0)
        base = std::min(base, Rat(kappa / (Rat(chart.d) * chart.D_bound)));
    double exponent = bundle.s.get_d() / static_cast<double>(bundle.d);
    return std::pow(base.get_d(), exponent);
}

long long box_count(const std::vector<Ball>& balls, double cell,
                    const std::vector<double>& box_lo, const std::vector<double>& box_hi) {
    if (!(cell > 0)) throw DomainError("box_count: cell must be positive");
    const int d = static_cast<int>(box_lo.size());
    if (box_hi.size() != box_lo.size()) throw DomainError("box_count: box dimension mismatch");

    std::vector<long long> ncells(d), stride(d);
    long long total = 1;
    for (int i = 0; i < d; ++i) {
        ncells[i] = cells_along(box_lo[i], box_hi[i], cell);
        if (ncells[i] < 1) throw DomainError("box_count: degenerate box");
        if (total > kCellCap / ncells[i])
            throw DomainError("box_count: grid too fine for this box (cell cap)");
        total *= ncells[i];
    }
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ncells[i + 1];

    std::vector<bool> mark(static_cast<size_t>(total), false);
    std::vector<std::pair<long long, long long>> range(d);
    for (const auto& ball : balls) {
        if (ball.k != d) throw DomainError("box_count: ball dimension mismatch");
        bool empty = false;
        for (int i = 0; i < d && !empty; ++i) {
            double a = ball.center[i] - ball.radius;
            double b = ball.center[i] + ball.radius;
            long long flo = first_cell(a, box_lo[i], cell);
            long long fhi = last_cell(b, box_lo[i], cell, ncells[i]);
            if (flo > fhi) empty = true;
            range[i] = {flo, fhi};
        }
        if (empty) continue;
        // odometer over the index ranges
        std::vector<long long> idx(d);
        for (int i = 0; i < d; ++i) idx[i] = range[i].first;
        while (true) {
            long long flat = 0;
            for (int i = 0; i < d; ++i) flat += idx[i] * stride[i];
            mark[static_cast<size_t>(flat)] = true;
            int axis = d - 1;
            while (axis >= 0 && ++idx[axis] > range[axis].second) {
                idx[axis] = range[axis].first;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    return std::count(mark.begin(), mark.end(), true);
}

long long box_count_exact(const std::vector<RationalBall>& balls, const Rat& cell,
                          const std::vector<Rat>& box_lo, const std::vector<Rat>& box_hi) {
    if (sgn(cell) <= 0) throw DomainError("box_count: cell must be positive");
    const int d = static_cast<int>(box_lo.size());
    if (box_hi.size() != box_lo.size()) throw DomainError("box_count: box dimension mismatch");

    std::vector<long long> ncells(d), stride(d);
    long long total = 1;
    for (int i = 0; i < d; ++i) {
        ncells[i] = to_int_checked(rat_ceil((box_hi[i] - box_lo[i]) / cell));
        if (ncells[i] < 1) throw DomainError("box_count: degenerate box");
        if (total > kCellCap / ncells[i])
            throw DomainError("box_count: grid too fine for this box (cell cap)");
        total *= ncells[i];
    }
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ncells[i + 1];

    std::vector<bool> mark(static_cast<size_t>(total), false);
    std::vector<std::pair<long long, long long>> range(d);
    for (const auto& ball : balls) {
        if (static_cast<int>(ball.center.size()) != d)
            throw DomainError("box_count: ball dimension mismatch");
        if (sgn(ball.radius) <= 0) throw DomainError("box_count: radius must be positive");
        bool empty = false;
        for (int i = 0; i < d && !empty; ++i) {
            Rat a = ball.center[i] - ball.radius;
            Rat b = ball.center[i] + ball.radius;
            // smallest index with right edge strictly past a is floor((a-lo)/cell)
            // (an integral ratio means the previous cell's right edge equals a,
            // which strictness excludes); largest index with left edge strictly
            // before b is ceil((b-lo)/cell) - 1
            long long flo = std::max(0LL, to_int_checked(rat_floor((a - box_lo[i]) / cell)));
            long long fhi =
                std::min(ncells[i] - 1, to_int_checked(rat_ceil((b - box_lo[i]) / cell) - 1));
            if (flo > fhi) empty = true;
            range[i] = {flo, fhi};
        }
        if (empty) continue;
        std::vector<long long> idx(d);
        for (int i = 0; i < d; ++i) idx[i] = range[i].first;
        while (true) {
            long long flat = 0;
            for (int i = 0; i < d; ++i) flat += idx[i] * stride[i];
            mark[static_cast<size_t>(flat)] = true;
            int axis = d - 1;
            while (axis >= 0 && ++idx[axis] > range[axis].second) {
                idx[axis] = range[axis].first;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    return std::count(mark.begin(), mark.end(), true);
}

std::vector<MtpBandResult> mtp_hypothesis_check(const ManifoldChart& chart, const Rat& tau,
                                                const Rat& s, int grid_n, int nbands,
                                                int threads) {
    if (grid_n < 1) throw DomainError("mtp_hypothesis_check: grid_n must be >= 1");
    if (nbands < 1) throw DomainError("mtp_hypothesis_check: bands must be >= 1");
    const int d = chart.d;
    if (sgn(s) <= 0 || s > d) throw DomainError("mtp_hypothesis_check: need s in (0, d]");

    long long total = 1;
    for (int i = 0; i < d; ++i) {
        if (total > kCellCap / grid_n) throw DomainError("mtp_hypothesis_check: grid too fine");
        total *= grid_n;
    }

    auto psi = ApproxFunction::power_law(Rat(1), tau);
    Int qmax = Int(1) << nbands;
    auto enumeration = enumerate_near(chart, psi, qmax, false, threads);

    std::vector<double> lo(d), step(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = chart.domain.lower[i].get_d();
        step[i] = (chart.domain.upper[i].get_d() - lo[i]) / grid_n;
    }
    std::vector<long long> stride(d);
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * grid_n;

    const double tau_d = tau.get_d();
    const double s_d = s.get_d();

    std::vector<bool> cum(static_cast<size_t>(total), false);
    long long cum_count = 0;
    std::vector<MtpBandResult> out;
    size_t rec_idx = 0;
    for (int band = 1; band <= nbands; ++band) {
        Int Qlo = Int(1) << (band - 1), Qhi = Int(1) << band;
        if (band == 1) Qlo = 0;  // first band includes q = 1
        std::vector<bool> own(static_cast<size_t>(total), false);
        long long own_count = 0;
        while (rec_idx < enumeration.records.size() &&
               enumeration.records[rec_idx].point.q <= Qhi) {
            const auto& rec = enumeration.records[rec_idx++];
            Int q = rec.point.q;
            if (q <= Qlo) continue;
            Ball raw(std::vector<double>(d), 1.0);
            for (int i = 0; i < d; ++i)
                raw.center[i] = static_cast<double>(rec.point.p[i]) / static_cast<double>(q);
            raw.radius = std::pow(static_cast<double>(q), -tau_d - 1.0);
            Ball scaled = scale_ball(raw, s_d, d);
            // grid points x_i = lo + (idx + 1/2) step strictly inside the ball
            std::vector<std::pair<long long, long long>> range(d);
            bool empty = false;
            for (int i = 0; i < d && !empty; ++i) {
                double a = scaled.center[i] - scaled.radius;
                double b = scaled.center[i] + scaled.radius;
                // idx > (a - lo)/step - 1/2 and idx < (b - lo)/step - 1/2
                long long ilo = static_cast<long long>(
                    std::floor((a - lo[i]) / step[i] - 0.5)) + 1;
                while (!(lo[i] + (static_cast<double>(ilo) + 0.5) * step[i] > a)) ++ilo;
                long long ihi = static_cast<long long>(
                    std::ceil((b - lo[i]) / step[i] - 0.5)) - 1;
                while (!(lo[i] + (static_cast<double>(ihi) + 0.5) * step[i] < b)) --ihi;
                ilo = std::max(0LL, ilo);
                ihi = std::min<long long>(grid_n - 1, ihi);
                if (ilo > ihi) empty = true;
                range[i] = {ilo, ihi};
            }
            if (empty) continue;
            std::vector<long long> idx(d);
            for (int i = 0; i < d; ++i) idx[i] = range[i].first;
            while (true) {
                long long flat = 0;
                for (int i = 0; i < d; ++i) flat += idx[i] * stride[i];
                auto u = static_cast<size_t>(flat);
                if (!own[u]) {
                    own[u] = true;
                    ++own_count;
                }
                if (!cum[u]) {
                    cum[u] = true;
                    ++cum_count;
                }
                int axis = d - 1;
                while (axis >= 0 && ++idx[axis] > range[axis].second) {
                    idx[axis] = range[axis].first;
                    --axis;
                }
                if (axis < 0) break;
            }
        }
        MtpBandResult r;
        r.band = band;
        r.Q = Qhi;
        r.fraction = static_cast<double>(own_count) / static_cast<double>(total);
        r.cumulative = static_cast<double>(cum_count) / static_cast<double>(total);
        out.push_back(r);
    }
    return out;
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
    const size_t n = points.size();
    if (n < 2) throw InsufficientData("fit_loglog: need at least 2 points");
    double xbar = 0, ybar = 0;
    for (auto [x, y] : points) {
        xbar += x;
        ybar += y;
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    if (sxx == 0) throw InsufficientData("fit_loglog: degenerate abscissae");
    FitResult fit;
    fit.slope = sxy / sxx;
    double intercept = ybar - fit.slope * xbar;
    double sse = 0;
    for (auto [x, y] : points) {
        double r = y - (intercept + fit.slope * x);
        sse += r * r;
    }
    fit.stderr_ = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

DimensionEstimate estimate_dimension(const ManifoldChart& chart, const Rat& tau, int bands,
                                     int threads) {
    if (bands < 1 || bands > 24) throw DomainError("estimate_dimension: bands must be in 1..24");
    const int n = chart.n(), m = chart.m;
    if (tau < Rat(1, n) || (m >= 1 && tau >= Rat(1, m)))
        throw DomainError("estimate_dimension: tau outside [1/n, 1/m) — the (tau) range");

    auto psi = ApproxFunction::power_law(Rat(1), tau);
    Int qmax = Int(1) << bands;
    auto enumeration = enumerate_near(chart, psi, qmax, false, threads);

    std::vector<double> lo(chart.d), hi(chart.d);
    for (int i = 0; i < chart.d; ++i) {
        lo[i] = chart.domain.lower[i].get_d();
        hi[i] = chart.domain.upper[i].get_d();
    }
    const double tau_d = tau.get_d();

    DimensionEstimate est;
    est.target_s = critical_exponent(n, m, tau).get_d();
    size_t rec_idx = 0;
    std::vector<std::pair<double, double>> fit_points;
    for (int band = 1; band <= bands; ++band) {
        Int Qlo = band == 1 ? 0 : Int(1) << (band - 1);
        Int Qhi = Int(1) << band;
        std::vector<Ball> balls;
        while (rec_idx < enumeration.records.size() &&
               enumeration.records[rec_idx].point.q <= Qhi) {
            const auto& rec = enumeration.records[rec_idx++];
            Int q = rec.point.q;
            if (q <= Qlo) continue;
            std::vector<double> center(static_cast<size_t>(chart.d));
            for (int i = 0; i < chart.d; ++i)
                center[i] = static_cast<double>(rec.point.p[i]) / static_cast<double>(q);
            balls.emplace_back(std::move(center),
                               std::pow(static_cast<double>(q), -tau_d - 1.0));
        }
        BandPoint pt;
        pt.band = band;
        pt.Q = Qhi;
        pt.delta = std::pow(static_cast<double>(Qhi), -tau_d - 1.0);
        pt.N = balls.empty() ? 0 : box_count(balls, pt.delta, lo, hi);
        pt.used = band > 2 && pt.N >= 1;
        if (pt.used)
            fit_points.emplace_back(std::log(1.0 / pt.delta),
                                    std::log(static_cast<double>(pt.N)));
        est.ladder.push_back(pt);
    }
    if (fit_points.size() < 3)
        throw InsufficientData("estimate_dimension: fewer than 3 usable bands");
    auto fit = fit_loglog(fit_points);
    est.slope = fit.slope;
    est.stderr_ = fit.stderr_;
    return est;
}

}  // namespace dioman
