#include "dioman/dirichlet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include "dioman/errors.hpp"

namespace dioman {

namespace {

constexpr double kFilterMargin = 1e-9;
constexpr Int kAxisCandidateCap = 1 << 21;

Rat qrat(Int v) { return rat_of(v); }

void check_tau_size(const Rat& tau) {
    if (!tau.get_den().fits_ulong_p() || tau.get_den().get_ui() > 4096 ||
        !tau.get_num().fits_slong_p())
        throw DomainError("exponent too large for exact boundary decisions");
}

// |x| vs (2^-m Q psi(Q)^m)^(-1/d): inside iff |x|^d 2^-m Q psi(Q)^m < 1.
// Exact via psi(Q) = c Q^(-a/b):  |x|^(d b) (2^-m Q c^m)^b Q^(-m a)  vs  1.
int cmp_abs_vs_mink2(const QuadExt& x, int d, int m, const ApproxFunction& psi, Int Q,
                     double b2_d, double x_d) {
    double ax = std::fabs(x_d);
    double scale = std::max(ax, b2_d);
    if (scale > 0 && std::fabs(ax - b2_d) > kFilterMargin * scale) return ax < b2_d ? -1 : 1;
    if (x.is_zero()) return -1;
    auto [c, tau] = psi.power_at(Q);
    check_tau_size(tau);
    unsigned long b = tau.get_den().get_ui();
    long a = tau.get_num().get_si();
    Rat K = rat_pow(rat_pow(Rat(2), -m) * qrat(Q) * rat_pow(c, m), static_cast<long>(b)) *
            rat_pow(qrat(Q), -static_cast<long>(m) * a);
    QuadExt lhs = x.abs().pow_ui(static_cast<unsigned long>(d) * b) * QuadExt(K);
    return lhs.cmp(Rat(1));
}

// 2^-m Q psi(Q)^m vs t^d for a positive QuadExt t: b2 < t iff LHS * t^d > 1.
bool b2_less_than(const QuadExt& t, int d, int m, const ApproxFunction& psi, Int Q,
                  double b2_d) {
    double td = t.to_double();
    double scale = std::max(td, b2_d);
    if (scale > 0 && std::fabs(b2_d - td) > kFilterMargin * scale) return b2_d < td;
    auto [c, tau] = psi.power_at(Q);
    check_tau_size(tau);
    unsigned long b = tau.get_den().get_ui();
    long a = tau.get_num().get_si();
    Rat K = rat_pow(rat_pow(Rat(2), -m) * qrat(Q) * rat_pow(c, m), static_cast<long>(b)) *
            rat_pow(qrat(Q), -static_cast<long>(m) * a);
    QuadExt lhs = t.pow_ui(static_cast<unsigned long>(d) * b) * QuadExt(K);
    return lhs.cmp(Rat(1)) > 0;
}

// b2^2 < X for rational X > 0: (2^-m Q psi(Q)^m)^2 > X^-d, exact.
bool b2_squared_less_than(const Rat& X, int d, int m, const ApproxFunction& psi, Int Q,
                          double b2_d) {
    double xd = X.get_d();
    double lhs_d = b2_d * b2_d;
    double scale = std::max(lhs_d, xd);
    if (scale > 0 && std::fabs(lhs_d - xd) > kFilterMargin * scale) return lhs_d < xd;
    auto [c, tau] = psi.power_at(Q);
    check_tau_size(tau);
    unsigned long b = tau.get_den().get_ui();
    long a = tau.get_num().get_si();
    Rat core = rat_pow(rat_pow(Rat(2), -m) * qrat(Q) * rat_pow(c, m), static_cast<long>(b)) *
               rat_pow(qrat(Q), -static_cast<long>(m) * a);
    // core = (2^-m Q psi^m)^b; want core^2 > (X^-d)^b = X^(-d b)
    return rat_pow(core, 2) > rat_pow(X, -static_cast<long>(d) * static_cast<long>(b));
}

struct ScanContext {
    const LinearFormsSystem* sys;
    double b1_d;  // psi(Q)/2
    double b2_d;
};

// Ascending integers p with |q alpha_i - p| < b2 (exact decisions).
std::vector<Int> mink2_candidates(const ScanContext& ctx, Int q, int axis) {
    const auto& sys = *ctx.sys;
    double center = static_cast<double>(q) * sys.alpha_d[axis];
    QuadExt qa = QuadExt(qrat(q)) * sys.alpha[axis];
    auto inside = [&](Int p) {
        QuadExt err = qa - QuadExt(qrat(p));
        return cmp_abs_vs_mink2(err, sys.d(), sys.m(), sys.psi, sys.Q, ctx.b2_d,
                                center - static_cast<double>(p)) < 0;
    };
    Int base = static_cast<Int>(std::llround(center));
    std::vector<Int> down, up;
    for (Int p = base; inside(p); --p) {
        down.push_back(p);
        if (static_cast<Int>(down.size()) > kAxisCandidateCap)
            throw SearchExhausted("mink2 box too wide (axis candidate cap hit)");
    }
    for (Int p = base + 1; inside(p); ++p) {
        up.push_back(p);
        if (static_cast<Int>(up.size()) > kAxisCandidateCap)
            throw SearchExhausted("mink2 box too wide (axis candidate cap hit)");
    }
    std::reverse(down.begin(), down.end());
    down.insert(down.end(), up.begin(), up.end());
    return down;
}

// Forced p_{d+j} for the Mink1 row, if any: the open interval has length
// psi(Q) <= 1, so at most one integer fits. Tests floor and ceil of the
// double target and decides near-boundary cases exactly.
std::optional<Int> mink1_forced(const ScanContext& ctx, Int q, const std::vector<Int>& pd,
                                int j) {
    const auto& sys = *ctx.sys;
    double t_d = static_cast<double>(q) * sys.g_d[j];
    for (int i = 0; i < sys.d(); ++i) t_d += static_cast<double>(pd[i]) * sys.jac_d[j][i];

    bool have_exact = sys.exact;
    QuadExt t;
    if (have_exact) {
        t = QuadExt(qrat(q)) * sys.g[j];
        for (int i = 0; i < sys.d(); ++i) t = t + QuadExt(qrat(pd[i])) * sys.jac[j][i];
    }
    auto inside = [&](Int p) {
        double err_d = t_d - static_cast<double>(p);
        double scale = std::max(std::fabs(err_d), ctx.b1_d);
        if (!have_exact || (scale > 0 && std::fabs(std::fabs(err_d) - ctx.b1_d) >
                                             kFilterMargin * scale))
            return std::fabs(err_d) < ctx.b1_d;
        QuadExt err = t - QuadExt(qrat(p));
        return sys.psi.cmp_abs_vs_scaled(err, Rat(1, 2), sys.Q) < 0;
    };
    Int fl = static_cast<Int>(std::floor(t_d));
    if (inside(fl)) return fl;
    if (inside(fl + 1)) return fl + 1;
    return std::nullopt;
}

struct Candidate {
    std::vector<Int> p;  // length n
    Int q = 0;
};

// First solution in (q ascending, p lexicographic) order within [qlo, qhi).
std::optional<Candidate> scan_q_range(const ScanContext& ctx, Int qlo, Int qhi) {
    const auto& sys = *ctx.sys;
    const int d = sys.d(), m = sys.m();
    for (Int q = qlo; q < qhi; ++q) {
        std::vector<std::vector<Int>> axes(d);
        bool empty = false;
        for (int i = 0; i < d && !empty; ++i) {
            axes[i] = mink2_candidates(ctx, q, i);
            empty = axes[i].empty();
        }
        if (empty) continue;
        std::vector<size_t> idx(d, 0);
        std::vector<Int> pd(d);
        while (true) {
            for (int i = 0; i < d; ++i) pd[i] = axes[i][idx[i]];
            std::vector<Int> full(sys.n());
            std::copy(pd.begin(), pd.end(), full.begin());
            bool ok = true;
            for (int j = 0; j < m && ok; ++j) {
                auto p = mink1_forced(ctx, q, pd, j);
                if (!p)
                    ok = false;
                else
                    full[d + j] = *p;
            }
            if (ok) {
                Candidate c;
                c.p = std::move(full);
                c.q = q;
                return c;
            }
            int axis = d - 1;
            while (axis >= 0 && ++idx[axis] == axes[axis].size()) idx[axis--] = 0;
            if (axis < 0) break;
        }
    }
    return std::nullopt;
}

// q = 0 fallback: the nonzero lattice points of the Mink boxes themselves.
std::optional<Candidate> scan_q_zero(const ScanContext& ctx) {
    auto c = scan_q_range(ctx, 0, 1);
    if (c && std::all_of(c->p.begin(), c->p.end(), [](Int v) { return v == 0; })) {
        // the all-zero vector is not a solution; look for the next one
        // lexicographically by re-scanning and skipping it
        const auto& sys = *ctx.sys;
        const int d = sys.d(), m = sys.m();
        std::vector<std::vector<Int>> axes(d);
        for (int i = 0; i < d; ++i) axes[i] = mink2_candidates(ctx, 0, i);
        std::vector<size_t> idx(d, 0);
        std::vector<Int> pd(d);
        while (true) {
            for (int i = 0; i < d; ++i) pd[i] = axes[i][idx[i]];
            std::vector<Int> full(sys.n());
            std::copy(pd.begin(), pd.end(), full.begin());
            bool ok = true;
            for (int j = 0; j < m && ok; ++j) {
                auto p = mink1_forced(ctx, 0, pd, j);
                if (!p)
                    ok = false;
                else
                    full[d + j] = *p;
            }
            if (ok && std::any_of(full.begin(), full.end(), [](Int v) { return v != 0; })) {
                Candidate cand;
                cand.p = std::move(full);
                cand.q = 0;
                return cand;
            }
            int axis = d - 1;
            while (axis >= 0 && ++idx[axis] == axes[axis].size()) idx[axis--] = 0;
            if (axis < 0) break;
        }
        return std::nullopt;
    }
    return c;
}

}  // namespace

std::vector<double> LinearFormsSystem::bound_vector() const {
    std::vector<double> b(static_cast<size_t>(n()) + 1);
    std::fill(b.begin(), b.begin() + m(), mink1_bound());
    std::fill(b.begin() + m(), b.begin() + n(), mink2_bound());
    b[n()] = static_cast<double>(Q);
    return b;
}

double LinearFormsSystem::mink1_bound() const { return psi.eval(Q) / 2.0; }

double LinearFormsSystem::mink2_bound() const {
    double v = std::pow(2.0, -m()) * static_cast<double>(Q) * std::pow(psi.eval(Q), m());
    return std::pow(v, -1.0 / d());
}

double LinearFormsSystem::bounds_product() const {
    return std::pow(mink1_bound(), m()) * std::pow(mink2_bound(), d()) *
           static_cast<double>(Q);
}

bool LinearFormsSystem::structure_unimodular() const {
    // rows m..m+d-1 are (alpha_i, -e_i, 0) and the last row is e_0; expanding
    // the determinant along them leaves the -1 block of the first m rows, so
    // |det| = 1 whenever the pattern holds
    auto G = matrix();
    const int N = n() + 1;
    for (int i = 0; i < d(); ++i)
        for (int c = 1; c < N; ++c) {
            double expect = (c == i + 1) ? -1.0 : 0.0;
            if (G[m() + i][c] != expect) return false;
        }
    for (int j = 0; j < m(); ++j)
        for (int c = d() + 1; c < N; ++c) {
            double expect = (c == d() + 1 + j) ? -1.0 : 0.0;
            if (G[j][c] != expect) return false;
        }
    if (G[n()][0] != 1.0) return false;
    for (int c = 1; c < N; ++c)
        if (G[n()][c] != 0.0) return false;
    return true;
}

std::vector<std::vector<double>> LinearFormsSystem::matrix() const {
    const int N = n() + 1;
    std::vector<std::vector<double>> G(N, std::vector<double>(N, 0.0));
    for (int j = 0; j < m(); ++j) {
        G[j][0] = g_d[j];
        for (int i = 0; i < d(); ++i) G[j][1 + i] = jac_d[j][i];
        G[j][1 + d() + j] = -1.0;
    }
    for (int i = 0; i < d(); ++i) {
        G[m() + i][0] = alpha_d[i];
        G[m() + i][1 + i] = -1.0;
    }
    G[n()][0] = 1.0;
    return G;
}

LinearFormsSystem build_system(const ManifoldChart& chart, std::vector<QuadExt> alpha,
                               const ApproxFunction& psi, Int Q) {
    if (Q < 1) throw DomainError("build_system: Q must be >= 1");
    if (!psi.normalized()) throw DomainError("build_system: psi must be normalized to (0,1]");
    psi.require_monotone();
    if (static_cast<int>(alpha.size()) != chart.d)
        throw DomainError("build_system: alpha dimension mismatch");
    if (!chart.domain.contains(alpha)) throw DomainError("build_system: alpha outside U");

    LinearFormsSystem sys;
    sys.chart = &chart;
    sys.alpha = std::move(alpha);
    sys.psi = psi;
    sys.Q = Q;
    sys.alpha_d.reserve(sys.alpha.size());
    for (const auto& a : sys.alpha) sys.alpha_d.push_back(a.to_double());
    sys.g_d = eval_g(chart, sys.alpha_d);
    sys.jac_d = chart.grad(sys.alpha_d);
    sys.exact = chart.exact;
    if (sys.exact) {
        sys.g = eval_g_exact(chart, sys.alpha);
        sys.jac = chart.grad_exact(sys.alpha);
    }
    return sys;
}

std::vector<Int> solve_system(const LinearFormsSystem& sys, int threads) {
    ScanContext ctx{&sys, sys.mink1_bound(), sys.mink2_bound()};

    constexpr Int kChunk = 4096;
    const Int chunks = (sys.Q + kChunk - 1) / kChunk;
    std::optional<Candidate> best;

    if (threads <= 1 || chunks == 1) {
        for (Int c = 0; c < chunks && !best; ++c)
            best = scan_q_range(ctx, 1 + c * kChunk, std::min<Int>(sys.Q + 1, 1 + (c + 1) * kChunk));
    } else {
        // fixed chunk boundaries: the winning chunk (and hence the answer)
        // does not depend on the number of workers
        std::vector<std::optional<Candidate>> results(static_cast<size_t>(chunks));
        std::atomic<Int> next{0};
        std::atomic<Int> found_below{chunks};
        auto worker = [&] {
            while (true) {
                Int c = next.fetch_add(1);
                if (c >= chunks || c > found_below.load()) break;
                auto r = scan_q_range(ctx, 1 + c * kChunk,
                                      std::min<Int>(sys.Q + 1, 1 + (c + 1) * kChunk));
                if (r) {
                    results[static_cast<size_t>(c)] = std::move(r);
                    Int cur = found_below.load();
                    while (c < cur && !found_below.compare_exchange_weak(cur, c)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (Int c = 0; c < chunks && !best; ++c) best = results[static_cast<size_t>(c)];
    }

    if (!best) best = scan_q_zero(ctx);
    if (!best) {
        std::ostringstream os;
        os << "solve_system: no lattice point found (Q=" << sys.Q
           << ", bounds product=" << sys.bounds_product()
           << "); Minkowski guarantees existence, so this is a bug or a "
              "precondition breach";
        throw SearchExhausted(os.str());
    }
    auto out = best->p;
    out.push_back(best->q);
    return out;
}

namespace {

struct AdmissibleContext {
    Rat B;               // inf_Q Q psi(Q), exact
    bool monotone_pred;  // membership is monotone in Q
    QuadExt r;           // inradius at alpha
    bool has_curvature;
    Rat third;  // B / (C d^2) when curved
    Int cap;    // table domain limit, if any
};

AdmissibleContext make_admissible_context(const ManifoldChart& chart,
                                          const std::vector<QuadExt>& alpha,
                                          const ApproxFunction& psi) {
    if (!psi.normalized()) throw DomainError("admissible set: psi must be normalized");
    psi.require_monotone();
    if (!chart.domain.contains(alpha)) throw DomainError("admissible set: alpha outside U");

    AdmissibleContext ctx;
    ctx.cap = std::numeric_limits<Int>::max();
    if (psi.kind() == PsiKind::PowerLaw) {
        const Rat& tau = psi.tau();
        if (tau > 1)
            throw HypothesisViolated("inf Q psi(Q) = 0: power law with tau > 1");
        ctx.B = std::min(Rat(1), psi.coeff());
        // Q psi(Q)^m grows like Q^(1 - m tau) off the clamp
        ctx.monotone_pred = Rat(chart.m) * tau <= 1;
    } else {
        ctx.B = Rat(0);
        for (const auto& [q, v] : psi.table()) {
            Rat qv = qrat(q) * std::min(Rat(1), v);
            if (ctx.B == 0 || qv < ctx.B) ctx.B = qv;
        }
        if (sgn(ctx.B) <= 0) throw HypothesisViolated("inf Q psi(Q) = 0 over the table");
        ctx.monotone_pred = false;
        ctx.cap = psi.domain_max();
    }
    ctx.r = chart.domain.inradius(alpha);
    ctx.has_curvature = sgn(chart.C_bound) > 0;
    if (ctx.has_curvature) ctx.third = ctx.B / (chart.C_bound * chart.d * chart.d);
    return ctx;
}

bool admissible_member(const AdmissibleContext& ctx, const ManifoldChart& chart,
                       const ApproxFunction& psi, Int Q) {
    double b2_d = std::pow(
        std::pow(2.0, -chart.m) * static_cast<double>(Q) * std::pow(psi.eval(Q), chart.m),
        -1.0 / chart.d);
    if (!b2_less_than(QuadExt(Rat(1)), chart.d, chart.m, psi, Q, b2_d)) return false;
    if (!b2_less_than(ctx.r, chart.d, chart.m, psi, Q, b2_d)) return false;
    if (ctx.has_curvature &&
        !b2_squared_less_than(ctx.third, chart.d, chart.m, psi, Q, b2_d))
        return false;
    return true;
}

}  // namespace

bool admissible_Q(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                  const ApproxFunction& psi, Int Q) {
    if (Q < 1) throw DomainError("admissible_Q: Q must be >= 1");
    auto ctx = make_admissible_context(chart, alpha, psi);
    if (Q > ctx.cap) return false;
    return admissible_member(ctx, chart, psi, Q);
}

std::vector<Int> admissible_Q_set(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                                  const ApproxFunction& psi, int count, Int search_cap) {
    if (count < 1) throw DomainError("admissible_Q_set: count must be >= 1");
    if (search_cap < 1) throw DomainError("admissible_Q_set: search_cap must be >= 1");

    auto ctx = make_admissible_context(chart, alpha, psi);
    search_cap = std::min(search_cap, ctx.cap);
    bool monotone_pred = ctx.monotone_pred;
    auto member = [&](Int Q) { return admissible_member(ctx, chart, psi, Q); };

    std::vector<Int> out;
    if (monotone_pred) {
        // exponential + binary search for the first admissible Q
        Int hi = 1;
        while (hi <= search_cap && !member(hi)) {
            if (hi > search_cap / 2) {
                hi = search_cap + 1;
                break;
            }
            hi *= 2;
        }
        if (hi > search_cap)
            throw Exhausted("admissible_Q_set: found 0 of " + std::to_string(count) +
                            " below search_cap " + std::to_string(search_cap));
        Int lo = hi / 2;  // member(lo) false (or lo == 0), member(hi) true
        while (lo + 1 < hi) {
            Int mid = lo + (hi - lo) / 2;
            (member(mid) ? hi : lo) = mid;
        }
        for (Int Q = hi; Q <= search_cap && static_cast<int>(out.size()) < count; ++Q)
            out.push_back(Q);
    } else {
        for (Int Q = 1; Q <= search_cap && static_cast<int>(out.size()) < count; ++Q)
            if (member(Q)) out.push_back(Q);
    }
    if (static_cast<int>(out.size()) < count)
        throw Exhausted("admissible_Q_set: found " + std::to_string(out.size()) + " of " +
                        std::to_string(count) + " below search_cap " +
                        std::to_string(search_cap) +
                        " (the growth hypothesis can fail for this psi)");
    return out;
}

DirichletSolution dirichlet_search(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                                   const ApproxFunction& psi, Int Q, int threads) {
    if (!admissible_Q(chart, alpha, psi, Q))
        throw DomainError("dirichlet_search: Q = " + std::to_string(Q) +
                          " is not in the admissible set for this (chart, alpha, psi)");
    auto sys = build_system(chart, alpha, psi, Q);
    auto vec = solve_system(sys, threads);
    Int q = vec.back();
    if (q < 1)
        throw CertificationFailed(
            "dirichlet_search: Minkowski solution has q = 0; the budget Q is not in the "
            "admissible set");
    std::vector<Int> p(vec.begin(), vec.end() - 1);

    DirichletSolution sol;
    sol.Q = Q;

    // (p_1/q, ..., p_d/q) must lie in U, strictly
    std::span<const Int> pd(p.data(), static_cast<size_t>(chart.d));
    if (!chart.domain.contains_rational(pd, q))
        throw CertificationFailed("dirichlet_search: rational point escaped U");

    const double b2_d = sys.mink2_bound();
    double v44 = 0;
    for (int i = 0; i < chart.d; ++i) {
        QuadExt err = QuadExt(qrat(q)) * alpha[i] - QuadExt(qrat(p[i]));
        double err_d = static_cast<double>(q) * sys.alpha_d[i] - static_cast<double>(p[i]);
        if (cmp_abs_vs_mink2(err, chart.d, chart.m, psi, Q, b2_d, err_d) >= 0)
            throw CertificationFailed("dirichlet_search: simultaneous-proximity (res_v44) re-verification failed");
        v44 = std::max(v44, std::fabs(err.to_double()) / static_cast<double>(q));
    }
    sol.res_v44_max = v44;

    double v45 = 0;
    if (chart.has_rational_eval()) {
        auto fv = chart.f_rational(pd, q);
        for (int j = 0; j < chart.m; ++j) {
            QuadExt err = QuadExt(qrat(q)) * fv[j] - QuadExt(qrat(p[chart.d + j]));
            if (psi.cmp_abs_vs_scaled(err, Rat(1), q) >= 0)
                throw CertificationFailed("dirichlet_search: manifold-closeness (res_v45) re-verification failed");
            v45 = std::max(v45, std::fabs(err.to_double()) / static_cast<double>(q));
        }
        sol.exact_certificate = true;
    } else {
        std::vector<double> x(chart.d);
        for (int i = 0; i < chart.d; ++i)
            x[i] = static_cast<double>(p[i]) / static_cast<double>(q);
        auto fv = chart.f(x);
        double bound = psi.eval(q);
        for (int j = 0; j < chart.m; ++j) {
            double err = static_cast<double>(q) * fv[j] - static_cast<double>(p[chart.d + j]);
            if (!(std::fabs(err) < bound))
                throw CertificationFailed("dirichlet_search: manifold-closeness (res_v45) numeric check failed");
            v45 = std::max(v45, std::fabs(err) / static_cast<double>(q));
        }
        sol.exact_certificate = false;
    }
    sol.res_v45_max = v45;
    sol.point = RationalPoint(std::move(p), q);
    sol.certified = true;
    return sol;
}

std::vector<DirichletSolution> cor2_stream(const ManifoldChart& chart,
                                           const std::vector<QuadExt>& alpha,
                                           const ApproxFunction& psi, const Rat& tau,
                                           const Rat& kappa, int k, Int qcap, int threads) {
    if (k < 1) throw DomainError("cor2_stream: count must be >= 1");
    if (sgn(kappa) <= 0) throw DomainError("cor2_stream: kappa must be positive");
    if (chart.m >= 1 && Rat(chart.m) * tau > 1)
        throw DomainError("cor2_stream: tau must satisfy tau <= 1/m");

    // the stream needs kappa <= Q^tau psi(Q) infinitely often; for a power law
    // q^tau psi(q) = c q^(tau - tau_psi): decreasing means only finitely many.
    if (psi.kind() == PsiKind::PowerLaw) {
        if (tau < psi.tau())
            throw HypothesisViolated("cor2: Q^tau psi(Q) -> 0, no Q can satisfy kappa <= Q^tau psi(Q)");
        if (tau == psi.tau() && kappa > psi.coeff())
            throw HypothesisViolated("cor2: kappa exceeds the constant Q^tau psi(Q)");
    }

    check_tau_size(tau);
    const long a = tau.get_num().get_si();
    const unsigned long b = tau.get_den().get_ui();
    const int d = chart.d, m = chart.m;

    // exact kappa <= Q^tau psi(Q) test at a specific Q: c' Q^(tau - tau') >= kappa
    auto kappa_floor_holds = [&](Int Q) {
        auto [c, taup] = psi.power_at(Q);
        Rat e = tau - taup;
        check_tau_size(e);
        long ea = e.get_num().get_si();
        long eb = static_cast<long>(e.get_den().get_ui());
        // c^eb * Q^ea >= kappa^eb
        return rat_pow(c, eb) * rat_pow(qrat(Q), ea) >= rat_pow(kappa, eb);
    };

    // exact per-solution residual bound: |q alpha_i - p_i|^(d b) q^(b - a m) < (2/kappa)^(m b)
    const Rat rhs21 = rat_pow(2 / kappa, static_cast<long>(m) * static_cast<long>(b));
    auto v421_holds = [&](const QuadExt& err, double err_d, Int q) {
        double bound = std::pow(2.0 / kappa.get_d(), static_cast<double>(m) / d) *
                       std::pow(static_cast<double>(q), -(1.0 - tau.get_d() * m) / d);
        double ax = std::fabs(err_d) / static_cast<double>(q);
        double scale = std::max(ax, bound);
        if (scale > 0 && std::fabs(ax - bound) > kFilterMargin * scale) return ax < bound;
        QuadExt lhs = err.abs().pow_ui(static_cast<unsigned long>(d) * b) *
                      QuadExt(rat_pow(qrat(q), static_cast<long>(b) - a * static_cast<long>(m)));
        return lhs.cmp(rhs21) < 0;
    };

    Int Q = admissible_Q_set(chart, alpha, psi, 1, qcap).front();
    std::vector<DirichletSolution> out;
    Int last_q = 0;
    int ladder = 0;
    while (static_cast<int>(out.size()) < k) {
        if (Q > qcap)
            throw Exhausted("cor2_stream: ladder exceeded qcap at height " +
                            std::to_string(ladder) + " with " + std::to_string(out.size()) +
                            " of " + std::to_string(k) + " solutions");
        ++ladder;
        if (kappa_floor_holds(Q) && admissible_Q(chart, alpha, psi, Q)) {
            auto sol = dirichlet_search(chart, alpha, psi, Q, threads);
            Int q = sol.point.q;
            if (q > last_q) {
                for (int i = 0; i < d; ++i) {
                    QuadExt err = QuadExt(qrat(q)) * alpha[i] - QuadExt(qrat(sol.point.p[i]));
                    double err_d = static_cast<double>(q) * alpha[i].to_double() -
                                   static_cast<double>(sol.point.p[i]);
                    if (!v421_holds(err, err_d, q))
                        throw CertificationFailed("cor2_stream: per-solution residual bound verification failed");
                }
                last_q = q;
                out.push_back(std::move(sol));
            }
        }
        if (Q > qcap / 2) {
            Q = qcap + 1;
        } else {
            Q *= 2;
        }
    }
    return out;
}

bool certification_inequality_holds(const ManifoldChart& chart, const ApproxFunction& psi, Int q, Int Q) {
    double lhs = std::pow(2.0, 2.0 * chart.m / chart.d) * chart.C() * chart.d * chart.d;
    double rhs = static_cast<double>(q) * psi.eval(q) *
                 std::pow(static_cast<double>(Q) * std::pow(psi.eval(Q), chart.m),
                          2.0 / chart.d);
    return lhs < rhs;
}

}  // namespace dioman
