#include "dioman/rational_points.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dioman/errors.hpp"
#include "dioman/parallel.hpp"

namespace dioman {

namespace {

constexpr double kFilterMargin = 1e-9;

Rat qrat(Int v) { return rat_of(v); }

// ||q * beta|| as a double, plus the absolute error bound of the estimate
struct DistFilter {
    double dist;
    double err;
};

DistFilter dist_filter(double beta_d, Int q) {
    double x = static_cast<double>(q) * beta_d;
    double frac = x - std::floor(x);
    double dist = std::min(frac, 1.0 - frac);
    // |q*beta - x| <= q * ulp(beta) + ulp(x); generous envelope
    double err = static_cast<double>(q) * 1e-15 + 1e-12;
    return {dist, err};
}

// integers strictly inside the open interval (q*lo, q*hi), exact
std::pair<Int, Int> strict_range(const Rat& lo, const Rat& hi, Int q) {
    BigInt pmin = rat_floor(qrat(q) * lo) + 1;
    BigInt pmax = rat_ceil(qrat(q) * hi) - 1;
    return {to_int_checked(pmin), to_int_checked(pmax)};
}

bool reduced_pair(const std::vector<Int>& p, Int q) {
    long long g = q;
    for (Int v : p) g = std::gcd(g, std::llabs(v));
    return g == 1;
}

// the at-most-two integers p with |t - p| < bound(q), ascending; t given as
// a double plus an exact evaluator used near boundaries
template <class ExactCmp>
std::vector<Int> residual_candidates(double t_d, double bound_d, double t_err,
                                     const ExactCmp& cmp_exact) {
    std::vector<Int> out;
    Int fl = static_cast<Int>(std::floor(t_d));
    for (Int p = fl - 1; p <= fl + 2; ++p) {
        double err = std::fabs(t_d - static_cast<double>(p));
        double margin = kFilterMargin * std::max(1.0, std::max(err, bound_d)) + t_err;
        int c;
        if (std::fabs(err - bound_d) > margin)
            c = err < bound_d ? -1 : 1;
        else
            c = cmp_exact(p);
        if (c < 0) out.push_back(p);
    }
    return out;
}

}  // namespace

NearEnumeration enumerate_near(const ManifoldChart& chart, const ApproxFunction& psi, Int qmax,
                               bool reduced, int threads) {
    if (qmax < 1) throw DomainError("enumerate_near: qmax must be >= 1");
    psi.require_monotone();
    if (psi.kind() == PsiKind::Tabulated && qmax > psi.domain_max())
        throw DomainError("enumerate_near: qmax beyond the psi table");

    const int d = chart.d, m = chart.m;
    const bool constant_f = sgn(chart.D_bound) == 0;  // plane charts
    const bool have_exact = chart.has_rational_eval();

    auto scan_q = [&](Int q) {
        std::vector<NearPointRecord> recs;
        const double bound_d = psi.eval(q);

        // residual candidates for the trailing coordinates
        auto trailing = [&](std::span<const Int> pd) -> std::vector<std::vector<Int>> {
            std::vector<std::vector<Int>> cand(m);
            std::vector<double> x(d);
            for (int i = 0; i < d; ++i) x[i] = static_cast<double>(pd[i]) / q;
            auto fv = chart.f(x);
            std::vector<QuadExt> fx;
            bool fx_ready = false;
            for (int j = 0; j < m; ++j) {
                double t_d = static_cast<double>(q) * fv[j];
                double t_err = std::fabs(t_d) * 1e-14 + 1e-13;
                auto exact_cmp = [&](Int p) -> int {
                    if (!have_exact) return std::fabs(t_d - p) < bound_d ? -1 : 1;
                    if (!fx_ready) {
                        fx = chart.f_rational(pd, q);
                        fx_ready = true;
                    }
                    QuadExt err = QuadExt(qrat(q)) * fx[j] - QuadExt(qrat(p));
                    return psi.cmp_abs_vs_scaled(err, Rat(1), q);
                };
                cand[j] = residual_candidates(t_d, bound_d, t_err, exact_cmp);
                if (cand[j].empty()) return {};
            }
            return cand;
        };

        auto emit = [&](std::span<const Int> pd, const std::vector<std::vector<Int>>& cand) {
            std::vector<size_t> idx(m, 0);
            while (true) {
                std::vector<Int> full(chart.n());
                std::copy(pd.begin(), pd.end(), full.begin());
                for (int j = 0; j < m; ++j) full[d + j] = cand[j][idx[j]];
                if (!reduced || reduced_pair(full, q)) {
                    NearPointRecord rec;
                    rec.point = RationalPoint(full, q);
                    if (have_exact) {
                        auto fx = chart.f_rational(pd, q);
                        QuadExt worst;
                        for (int j = 0; j < m; ++j) {
                            QuadExt err =
                                (QuadExt(qrat(q)) * fx[j] - QuadExt(qrat(full[d + j]))).abs();
                            if (cmp_cross(err, worst) > 0) worst = err;
                        }
                        rec.residual_exact = worst;
                        rec.residual = worst.to_double();
                        rec.exact = true;
                    } else {
                        std::vector<double> x(d);
                        for (int i = 0; i < d; ++i) x[i] = static_cast<double>(pd[i]) / q;
                        auto fv = chart.f(x);
                        double worst = 0;
                        for (int j = 0; j < m; ++j)
                            worst = std::max(worst,
                                             std::fabs(q * fv[j] - static_cast<double>(full[d + j])));
                        rec.residual = worst;
                        rec.exact = false;
                    }
                    recs.push_back(std::move(rec));
                }
                int j = m - 1;
                while (j >= 0 && ++idx[j] == cand[j].size()) idx[j--] = 0;
                if (j < 0) break;
            }
        };

        // axis ranges for the leading coordinates
        std::vector<std::pair<Int, Int>> ranges(d);
        bool empty = false;
        for (int i = 0; i < d; ++i) {
            ranges[i] = strict_range(chart.domain.lower[i], chart.domain.upper[i], q);
            if (ranges[i].first > ranges[i].second) empty = true;
        }
        if (empty) return recs;

        if (constant_f) {
            // residuals do not depend on p_1..p_d: one test per q
            std::vector<Int> probe(d);
            for (int i = 0; i < d; ++i) probe[i] = ranges[i].first;
            auto cand = trailing(probe);
            if (cand.empty()) return recs;
            std::vector<Int> pd(d);
            for (int i = 0; i < d; ++i) pd[i] = ranges[i].first;
            while (true) {
                emit(pd, cand);
                int axis = d - 1;
                while (axis >= 0 && ++pd[axis] > ranges[axis].second) {
                    pd[axis] = ranges[axis].first;
                    --axis;
                }
                if (axis < 0) break;
            }
            return recs;
        }

        std::vector<Int> pd(d);
        for (int i = 0; i < d; ++i) pd[i] = ranges[i].first;
        while (true) {
            auto cand = trailing(pd);
            if (!cand.empty()) emit(pd, cand);
            int axis = d - 1;
            while (axis >= 0 && ++pd[axis] > ranges[axis].second) {
                pd[axis] = ranges[axis].first;
                --axis;
            }
            if (axis < 0) break;
        }
        return recs;
    };

    auto chunks = parallel_collect<std::vector<NearPointRecord>>(
        1, qmax + 1, threads, [&](Int lo, Int hi) {
            std::vector<NearPointRecord> part;
            for (Int q = lo; q < hi; ++q) {
                auto r = scan_q(q);
                part.insert(part.end(), std::make_move_iterator(r.begin()),
                            std::make_move_iterator(r.end()));
            }
            return part;
        });

    NearEnumeration out;
    for (auto& part : chunks)
        out.records.insert(out.records.end(), std::make_move_iterator(part.begin()),
                           std::make_move_iterator(part.end()));
    out.counting.reserve(qmax);
    long long n = 0;
    size_t idx = 0;
    for (Int q = 1; q <= qmax; ++q) {
        while (idx < out.records.size() && out.records[idx].point.q == q) {
            ++n;
            ++idx;
        }
        out.counting.emplace_back(q, n);
    }
    return out;
}

namespace {

DenominatorSet bset_impl(const std::vector<QuadExt>& beta, const ApproxFunction* psi,
                         const Rat* tau, Int qmax, int threads, std::string spec) {
    if (qmax < 1) throw DomainError("bset: qmax must be >= 1");
    if (beta.empty()) throw DomainError("bset: empty beta");

    std::vector<double> beta_d;
    for (const auto& b : beta) beta_d.push_back(b.to_double());

    auto member = [&](Int q) -> int {  // -1 out, 0 undecided, +1 in
        for (size_t j = 0; j < beta.size(); ++j) {
            double bound_d = psi ? psi->eval(q)
                                 : std::pow(static_cast<double>(q), -tau->get_d());
            auto [dist, err] = dist_filter(beta_d[j], q);
            double margin = kFilterMargin * std::max(dist, bound_d) + err;
            int c;
            if (std::fabs(dist - bound_d) > margin) {
                c = dist < bound_d ? -1 : 1;
            } else {
                QuadExt dq = (QuadExt(qrat(q)) * beta[j]).dist_to_nearest();
                c = psi ? psi->cmp_abs_vs_scaled(dq, Rat(1), q)
                        : cmp_abs_vs_rat_power(dq, Rat(1), q, *tau);
            }
            if (c >= 0) return -1;  // strict inequality fails for this j
        }
        return 1;
    };

    struct Part {
        std::vector<Int> members, undecided;
    };
    auto parts = parallel_collect<Part>(1, qmax + 1, threads, [&](Int lo, Int hi) {
        Part p;
        for (Int q = lo; q < hi; ++q) {
            int c = member(q);
            if (c > 0) p.members.push_back(q);
            if (c == 0) p.undecided.push_back(q);
        }
        return p;
    });

    DenominatorSet out;
    out.beta = beta;
    out.bound_spec = std::move(spec);
    out.qmax = qmax;
    for (auto& p : parts) {
        out.members.insert(out.members.end(), p.members.begin(), p.members.end());
        out.undecided.insert(out.undecided.end(), p.undecided.begin(), p.undecided.end());
    }
    return out;
}

}  // namespace

DenominatorSet bset(const std::vector<QuadExt>& beta, const Rat& tau, Int qmax, int threads) {
    return bset_impl(beta, nullptr, &tau, qmax, threads, "tau=" + format_rat(tau));
}

DenominatorSet bset_psi(const std::vector<QuadExt>& beta, const ApproxFunction& psi, Int qmax,
                        int threads) {
    if (psi.kind() == PsiKind::Tabulated && qmax > psi.domain_max())
        throw DomainError("bset: qmax beyond the psi table");
    return bset_impl(beta, &psi, nullptr, qmax, threads, psi.spec_string());
}

BadApproxResult badly_approx_constant(const std::vector<QuadExt>& beta, Int qmax) {
    if (qmax < 1) throw DomainError("badly_approx_constant: qmax must be >= 1");
    if (beta.empty()) throw DomainError("badly_approx_constant: empty beta");
    const int m = static_cast<int>(beta.size());

    std::vector<double> beta_d;
    for (const auto& b : beta) beta_d.push_back(b.to_double());

    // two minima of q * maxdist^m in one pass: global over [1, qmax] and the
    // tail (qmax/2, qmax] that estimates the liminf
    struct Min {
        bool have = false;
        QuadExt val;  // q * dist^m, exact
        double val_d = 0;
        Int q = 0;
        QuadExt dist;
    };
    Min global, tail;
    const Int tail_lo = qmax / 2;  // tail is q > tail_lo

    BadApproxResult out;
    for (Int q = 1; q <= qmax; ++q) {
        double maxdist_d = 0, err_d = 0;
        for (int j = 0; j < m; ++j) {
            auto [dist, err] = dist_filter(beta_d[j], q);
            maxdist_d = std::max(maxdist_d, dist);
            err_d = std::max(err_d, err);
        }
        double val_d = static_cast<double>(q) * std::pow(maxdist_d, m);
        double slack = static_cast<double>(q) *
                           (std::pow(maxdist_d + err_d, m) -
                            std::pow(std::max(0.0, maxdist_d - err_d), m)) +
                       1e-12;
        bool near_zero = maxdist_d <= err_d;
        bool beats_global = !global.have ||
                            val_d <= global.val_d + slack + kFilterMargin * global.val_d;
        bool beats_tail = q > tail_lo &&
                          (!tail.have || val_d <= tail.val_d + slack + kFilterMargin * tail.val_d);
        if (!near_zero && !beats_global && !beats_tail) continue;

        // exact evaluation
        QuadExt maxdist;
        for (int j = 0; j < m; ++j) {
            QuadExt dj = (QuadExt(qrat(q)) * beta[j]).dist_to_nearest();
            if (cmp_cross(dj, maxdist) > 0) maxdist = dj;
        }
        if (maxdist.is_zero()) {
            out.rationality_witness = q;
            out.c0 = 0;
            out.argmin_q = q;
            out.scan_min = 0;
            out.scan_argmin_q = q;
            out.scan_min_dist = QuadExt(Rat(0));
            return out;
        }
        QuadExt val = QuadExt(qrat(q)) * maxdist.pow_ui(static_cast<unsigned long>(m));
        double vd = val.to_double();
        if (!global.have || cmp_cross(val, global.val) < 0)
            global = {true, val, vd, q, maxdist};
        if (q > tail_lo && (!tail.have || cmp_cross(val, tail.val) < 0))
            tail = {true, val, vd, q, maxdist};
    }
    auto c_of = [&](const Min& mn) {
        return std::pow(static_cast<double>(mn.q), 1.0 / m) * mn.dist.to_double();
    };
    out.c0 = c_of(tail);
    out.argmin_q = tail.q;
    out.scan_min = c_of(global);
    out.scan_argmin_q = global.q;
    out.scan_min_dist = global.dist;
    return out;
}

CounterexampleReport counterexample_check(const std::vector<QuadExt>& beta, Int qmax) {
    CounterexampleReport rep;
    rep.qmax = qmax;
    rep.constant = badly_approx_constant(beta, qmax);
    if (rep.constant.rationality_witness)
        throw HypothesisViolated(
            "counterexample_check: beta is rational at q = " +
            std::to_string(*rep.constant.rationality_witness) + ", not badly approximable");

    const int m = static_cast<int>(beta.size());
    const QuadExt min_val = QuadExt(qrat(rep.constant.scan_argmin_q)) *
                            rep.constant.scan_min_dist.pow_ui(static_cast<unsigned long>(m));
    const double min_val_d = min_val.to_double();

    std::vector<double> beta_d;
    for (const auto& b : beta) beta_d.push_back(b.to_double());

    // membership in B(beta; c0 q^(-1/m)) is q * maxdist^m < argmin's value,
    // which the strict minimality of c0 rules out below qmax
    for (Int q = 1; q <= qmax; ++q) {
        double maxdist_d = 0, err_d = 0;
        for (int j = 0; j < m; ++j) {
            auto [dist, err] = dist_filter(beta_d[j], q);
            maxdist_d = std::max(maxdist_d, dist);
            err_d = std::max(err_d, err);
        }
        double val_d = static_cast<double>(q) *
                       std::pow(std::max(0.0, maxdist_d - err_d), m);
        if (val_d > min_val_d * (1 + kFilterMargin) + 1e-12) continue;
        QuadExt maxdist;
        for (int j = 0; j < m; ++j) {
            QuadExt dj = (QuadExt(qrat(q)) * beta[j]).dist_to_nearest();
            if (cmp_cross(dj, maxdist) > 0) maxdist = dj;
        }
        QuadExt val = QuadExt(qrat(q)) * maxdist.pow_ui(static_cast<unsigned long>(m));
        if (cmp_cross(val, min_val) < 0)
            throw CertificationFailed(
                "counterexample_check: B-set member at q = " + std::to_string(q) +
                " contradicts the minimality of c0 (bug)");
    }
    rep.empty = true;
    std::ostringstream os;
    os << "emptiness certified for q <= " << qmax
       << " only; the construction minimizes over the scanned range";
    rep.caveat = os.str();
    return rep;
}

}  // namespace dioman
