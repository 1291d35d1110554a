// Acceptance suite: runs every acceptance criterion end to end at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit code is the
// number of failures. Criterion 12 invokes the CLI binary (path injected at
// build time) and byte-compares its CSV artifacts across thread counts.

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dioman/ball.hpp"
#include "dioman/dirichlet.hpp"
#include "dioman/errors.hpp"
#include "dioman/exponents.hpp"
#include "dioman/limsup.hpp"
#include "dioman/manifold.hpp"
#include "dioman/rational_points.hpp"
#include "dioman/sampling.hpp"

using namespace dioman;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

double run_criterion(int id, const std::string& label,
                     const std::function<std::string()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!detail.empty() && detail.rfind("FAIL:", 0) == 0) {
        ok = false;
        detail = detail.substr(5);
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          t0)
                    .count();
    std::printf("%s criterion %2d: %s (%s; %.0f ms)\n", ok ? "PASS" : "FAIL", id,
                label.c_str(), detail.c_str(), ms);
    std::fflush(stdout);
    if (!ok) ++g_failures;
    return ms;
}

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    Int range(Int lo, Int hi) {
        return lo + static_cast<Int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
};

// Brute-force reference solver: every p in the Mink2 boxes, every q <= Q,
// same tie-break as solve_system. Plain rational arithmetic throughout;
// requires rational alpha and tau in {0, 1/2, 1} so psi(Q)^2 is rational.
std::optional<std::vector<Int>> oracle_solve(const ManifoldChart& chart, const Rat& alpha,
                                             const Rat& c, const Rat& tau, Int Q) {
    Rat psiQ2 = c * c * rat_pow(rat_of(Q), -static_cast<long>(2 * to_double(tau)));
    const int m = chart.m;
    Rat W2 = rat_pow(rat_of(Q) / rat_pow(Rat(2), m), 2) * rat_pow(psiQ2, m);
    auto inside_mink2 = [&](const Rat& x) { return x * x * W2 < 1; };
    auto inside_mink1 = [&](const Rat& t, Int p) {
        Rat e = t - rat_of(p);
        return 4 * e * e < psiQ2;
    };
    auto g = eval_g_exact(chart, {QuadExt(alpha)});
    auto J = chart.grad_exact({QuadExt(alpha)});
    double b2_d = 1.0 / (std::pow(2.0, -m) * static_cast<double>(Q) *
                         std::pow(to_double(c) * std::pow(static_cast<double>(Q),
                                                          -to_double(tau)),
                                  m));
    auto try_q = [&](Int q) -> std::optional<std::vector<Int>> {
        Rat qa = rat_of(q) * alpha;
        double center = to_double(qa);
        std::vector<Int> valid;
        for (Int p = static_cast<Int>(std::floor(center - b2_d)) - 1;
             p <= static_cast<Int>(std::ceil(center + b2_d)) + 1; ++p)
            if (inside_mink2(Rat(qa - rat_of(p)))) valid.push_back(p);
        for (Int p1 : valid) {
            std::vector<Int> full(chart.n() + 1);
            full[0] = p1;
            bool ok = true;
            for (int j = 0; j < m && ok; ++j) {
                Rat t = rat_of(q) * g[j].rational_value() +
                        rat_of(p1) * J[j][0].rational_value();
                ok = false;
                for (Int p = to_int_checked(rat_floor(t)) - 1;
                     p <= to_int_checked(rat_ceil(t)) + 1; ++p)
                    if (inside_mink1(t, p)) {
                        full[1 + j] = p;
                        ok = true;
                        break;
                    }
            }
            if (ok) {
                full[chart.n()] = q;
                bool nonzero = q != 0;
                for (Int v : full) nonzero = nonzero || v != 0;
                if (nonzero) return full;
            }
        }
        return std::nullopt;
    };
    for (Int q = 1; q <= Q; ++q)
        if (auto r = try_q(q)) return r;
    return try_q(0);
}

std::vector<Int> fib_upto(Int cap) {
    std::vector<Int> f{1, 2};
    while (f[f.size() - 1] + f[f.size() - 2] <= cap)
        f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    return f;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    double total_ms = 0;

    // 1. Dirichlet-for-manifolds certification
    total_ms += run_criterion(1, "Dirichlet certification over seeded alpha", [] {
        struct Case {
            ManifoldChart chart;
            ApproxFunction psi;
            const char* name;
        };
        std::vector<Case> cases;
        cases.push_back({make_plane({QuadExt::golden()}, 1, BoxDomain::unit(1)),
                         ApproxFunction::power_law(Rat(1), Rat(1, 2)), "plane:golden"});
        cases.push_back({make_parabola(BoxDomain::unit(1)),
                         ApproxFunction::power_law(Rat(1), Rat(1, 2)), "parabola"});
        cases.push_back({make_veronese(3, BoxDomain::unit(1)),
                         ApproxFunction::power_law(Rat(1), Rat(1, 3)), "veronese:3"});
        long long searches = 0;
        auto t0 = std::chrono::steady_clock::now();
        for (size_t ci = 0; ci < cases.size(); ++ci) {
            const auto& cs = cases[ci];
            auto pts = sample_points(cs.chart.domain, 100, 20177 + ci);
            for (const auto& x : pts) {
                auto alpha = exact_point(x);
                auto qs = admissible_Q_set(cs.chart, alpha, cs.psi, 20, Int(1) << 45);
                for (Int Q : qs) {
                    auto sol = dirichlet_search(cs.chart, alpha, cs.psi, Q);
                    ++searches;
                    if (!sol.certified || !sol.exact_certificate)
                        return std::string("FAIL:uncertified solution on ") + cs.name;
                }
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        if (secs > 60.0)
            return std::string("FAIL:runtime ") + std::to_string(secs) + " s exceeds 60 s";
        std::ostringstream os;
        os << searches << " searches, all exact-certified, " << secs << " s";
        return os.str();
    });

    // 2. Oracle equivalence for solve_system
    total_ms += run_criterion(2, "solve_system equals brute force on 200 instances", [] {
        Rng rng(0x0a0c1eULL);
        int done = 0;
        while (done < 200) {
            int which = static_cast<int>(rng.range(0, 2));
            ManifoldChart chart =
                which == 0 ? make_plane({QuadExt(rat_of(rng.range(0, 9), 10))}, 1,
                                        BoxDomain::unit(1))
                           : which == 1 ? make_parabola(BoxDomain::unit(1))
                                        : make_veronese(3, BoxDomain::unit(1));
            Rat alpha = rat_of(rng.range(1, 96), 97);
            Rat c = rat_of(rng.range(1, 4), 4);
            static const Rat taus[3] = {Rat(0), Rat(1, 2), Rat(1)};
            Rat tau = taus[rng.range(0, 2)];
            Int Q = rng.range(1, 500);
            auto psi = ApproxFunction::power_law(c, tau);
            auto sys = build_system(chart, {QuadExt(alpha)}, psi, Q);
            if (sys.mink2_bound() > 2000) continue;
            ++done;
            auto got = solve_system(sys);
            auto want = oracle_solve(chart, alpha, c, tau, Q);
            if (!want) return std::string("FAIL:oracle found nothing (bug in the oracle)");
            if (got != *want) {
                std::ostringstream os;
                os << "FAIL:mismatch on instance " << done << " (Q=" << Q << ")";
                return os.str();
            }
        }
        return std::string("200 instances, exact agreement");
    });

    // 3. Exponent identities
    total_ms += run_criterion(3, "exponent identities and Jarnik flip, exact", [] {
        Rng rng(0x5eedULL);
        for (int it = 0; it < 1000; ++it) {
            int n = static_cast<int>(rng.range(2, 6));
            int m = static_cast<int>(rng.range(1, n - 1));
            int d = n - m;
            Rat tau = rat_of(rng.range(1, 40), rng.range(41, 80));
            Rat s = critical_exponent(n, m, tau);
            auto eta = eta_exponent(d, m, tau);
            if (!(Rat(d) * eta.eta + Rat(m) * tau == Rat(1)))
                return std::string("FAIL:d*eta + m*tau != 1");
            if (!(s == (eta.eta + 1) * d / (tau + 1)))
                return std::string("FAIL:s != (eta+1)d/(tau+1)");
        }
        int flips = 0;
        Rng rng2(0xc0ffeeULL);
        while (flips < 100) {
            int n = static_cast<int>(rng2.range(1, 5));
            Rat tau = rat_of(rng2.range(1, 30), rng2.range(1, 30));
            auto psi = ApproxFunction::power_law(Rat(1), tau);
            Rat s_star = critical_exponent(n, 0, tau);
            Rat eps(1, 1000000);
            if (!(sgn(s_star) > 0 && s_star + eps < n && sgn(s_star - eps) > 0)) continue;
            ++flips;
            if (jarnik_classify(psi, n, s_star) != SeriesClass::MeasureInfinity)
                return std::string("FAIL:boundary must diverge");
            if (jarnik_classify(psi, n, s_star + eps) != SeriesClass::MeasureZero)
                return std::string("FAIL:no flip above the critical exponent");
            if (jarnik_classify(psi, n, s_star - eps) != SeriesClass::MeasureInfinity)
                return std::string("FAIL:must diverge below the critical exponent");
        }
        return std::string("1000 identity triples + 100 flips, exact");
    });

    // 4. Fibonacci B-set at one million
    total_ms += run_criterion(4, "bset(golden, tau=1, 1e6) is exactly Fibonacci", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto set = bset({QuadExt::golden()}, Rat(1), 1000000);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        if (set.members != fib_upto(1000000))
            return std::string("FAIL:member list differs from the Fibonacci sequence");
        if (!set.undecided.empty()) return std::string("FAIL:undecided q reported");
        if (secs > 10.0)
            return std::string("FAIL:runtime ") + std::to_string(secs) + " s exceeds 10 s";
        std::ostringstream os;
        os << set.members.size() << " members, " << secs << " s";
        return os.str();
    });

    // 5. Counterexample emptiness
    total_ms += run_criterion(5, "counterexample(golden, 1e6): c0 window and emptiness", [] {
        auto rep = counterexample_check({QuadExt::golden()}, 1000000);
        if (!(rep.constant.c0 >= 0.447 && rep.constant.c0 <= 0.4473)) {
            std::ostringstream os;
            os << "FAIL:c0 = " << rep.constant.c0 << " outside [0.447, 0.4473]";
            return os.str();
        }
        if (!rep.empty) return std::string("FAIL:B-set not empty");
        std::ostringstream os;
        os << "c0 = " << rep.constant.c0 << " (tail argmin q = " << rep.constant.argmin_q
           << "), construction min " << rep.constant.scan_min << " at q = "
           << rep.constant.scan_argmin_q << ", set empty";
        return os.str();
    });

    // 6. Dimension slope, parabola
    total_ms += run_criterion(6, "parabola tau=0.6 slope within 0.875 +- 0.15", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto est = estimate_dimension(make_parabola(BoxDomain::unit(1)), Rat(3, 5), 12);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        if (secs > 300.0) return std::string("FAIL:runtime exceeds 5 min");
        if (std::fabs(est.slope - 0.875) > 0.15) {
            std::ostringstream os;
            os << "FAIL:slope " << est.slope << " misses 0.875 +- 0.15";
            return os.str();
        }
        std::ostringstream os;
        os << "slope " << est.slope << " +- " << est.stderr_ << " vs 0.875, " << secs
           << " s";
        return os.str();
    });

    // 7. Dimension slope, golden plane
    total_ms += run_criterion(7, "plane:golden tau=0.7 slope within 0.7647 +- 0.15", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto est = estimate_dimension(
            make_plane({QuadExt::golden()}, 1, BoxDomain::unit(1)), Rat(7, 10), 14);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        if (secs > 300.0) return std::string("FAIL:runtime exceeds 5 min");
        double target = 1.3 / 1.7;
        if (std::fabs(est.slope - target) > 0.15) {
            std::ostringstream os;
            os << "FAIL:slope " << est.slope << " misses " << target << " +- 0.15";
            return os.str();
        }
        std::ostringstream os;
        os << "slope " << est.slope << " +- " << est.stderr_ << " vs " << target << ", "
           << secs << " s";
        return os.str();
    });

    // 8. Dimension slope, full-set sanity
    total_ms += run_criterion(8, "parabola tau=1/n slope within 1 +- 0.1", [] {
        auto est = estimate_dimension(make_parabola(BoxDomain::unit(1)), Rat(1, 2), 12);
        if (std::fabs(est.slope - 1.0) > 0.1) {
            std::ostringstream os;
            os << "FAIL:slope " << est.slope << " misses 1 +- 0.1";
            return os.str();
        }
        std::ostringstream os;
        os << "slope " << est.slope << " +- " << est.stderr_;
        return os.str();
    });

    // 9. MTP full-measure hypothesis
    total_ms += run_criterion(9, "mtp-check plane:golden covers >= 0.99 of the grid", [] {
        auto chart = make_plane({QuadExt::golden()}, 1, BoxDomain::unit(1));
        Rat tau(7, 10);
        auto bundle = make_bundle(2, 1, tau);  // s = (eta+1)d/(tau+1)
        auto rows = mtp_hypothesis_check(chart, tau, bundle.s, 4096, 12);
        double prev = 0;
        for (const auto& r : rows) {
            if (r.cumulative + 1e-15 < prev)
                return std::string("FAIL:cumulative fraction decreased");
            prev = r.cumulative;
        }
        if (rows.back().cumulative < 0.99) {
            std::ostringstream os;
            os << "FAIL:cumulative " << rows.back().cumulative << " < 0.99";
            return os.str();
        }
        std::ostringstream os;
        os << "cumulative " << rows.back().cumulative << " over " << rows.size()
           << " bands";
        return os.str();
    });

    // 10. Estimator calibration
    total_ms += run_criterion(10, "middle-thirds slope, B^k = B, interval box count", [] {
        std::vector<std::pair<double, double>> pts;
        for (int k = 4; k <= 10; ++k) {
            std::vector<RationalBall> balls;
            std::function<void(int, Rat, Rat)> rec = [&](int level, Rat lo, Rat len) {
                if (level == 0) {
                    balls.push_back({{lo + len / 2}, len / 2});
                    return;
                }
                rec(level - 1, lo, len / 3);
                rec(level - 1, lo + 2 * len / 3, len / 3);
            };
            rec(k, Rat(0), Rat(1));
            long long N = box_count_exact(balls, rat_pow(Rat(1, 3), k), {Rat(0)}, {Rat(1)});
            pts.emplace_back(k * std::log(3.0), std::log(static_cast<double>(N)));
        }
        auto fit = fit_loglog(pts);
        double target = std::log(2.0) / std::log(3.0);
        if (std::fabs(fit.slope - target) > 0.01)
            return std::string("FAIL:middle-thirds slope off by more than 0.01");

        Ball b({0.37}, 0.0123456789);
        if (scale_ball(b, 1.0, 1).radius != b.radius)
            return std::string("FAIL:scale_ball at s = k is not the identity");
        Ball b2({0.1, 0.9}, 1e-6);
        if (scale_ball(b2, 2.0, 2).radius != 1e-6)
            return std::string("FAIL:scale_ball at s = k is not the identity in 2-d");

        std::vector<RationalBall> interval{{{Rat(1, 2)}, Rat(1, 10)}};
        long long n = box_count_exact(interval, Rat(1, 10), {Rat(0)}, {Rat(1)});
        if (n != 2) return std::string("FAIL:interval box count != 2");
        std::ostringstream os;
        os << "slope " << fit.slope << " vs " << target << ", identity exact, count 2";
        return os.str();
    });

    // 11. Corollary-2 stream
    total_ms += run_criterion(11, "cor2 stream: 10 increasing q, |a - p/q| < 2 q^-3/2", [] {
        auto par = make_parabola(BoxDomain::unit(1));
        auto psi = ApproxFunction::power_law(Rat(1), Rat(1, 2));
        std::vector<QuadExt> alpha{QuadExt::sqrt2_minus_1()};
        auto sols = cor2_stream(par, alpha, psi, Rat(1, 2), Rat(1), 10, Int(1) << 45);
        if (sols.size() != 10) return std::string("FAIL:expected 10 solutions");
        Int last = 0;
        for (const auto& s : sols) {
            if (s.point.q <= last) return std::string("FAIL:q not strictly increasing");
            last = s.point.q;
            QuadExt err = QuadExt(rat_of(s.point.q)) * alpha[0] -
                          QuadExt(rat_of(s.point.p[0]));
            QuadExt lhs = err * err * QuadExt(rat_of(s.point.q));
            if (lhs.cmp(Rat(4)) >= 0)
                return std::string("FAIL:residual bound 2 q^-3/2 violated");
        }
        std::ostringstream os;
        os << "q ladder ends at " << last << ", all bounds exact";
        return os.str();
    });

    // 12. Determinism across thread counts
    total_ms += run_criterion(12, "byte-identical CSV across --threads {1,4,8}", [] {
#ifndef DIOMAN_CLI_PATH
        return std::string("FAIL:CLI path not wired into the build");
#else
        const std::string cli = DIOMAN_CLI_PATH;
        fs::path tmp = fs::temp_directory_path() / "dioman_acceptance";
        fs::create_directories(tmp);
        struct Cmd {
            std::string name;
            std::string args;
        };
        std::vector<Cmd> cmds{
            {"exponents", "exponents --n 2 --m 1 --tau 0.6"},
            {"bset", "bset --beta golden --tau 1.0 --qmax 100000"},
            {"counterexample", "counterexample --beta golden --qmax 100000"},
            {"enumerate", "enumerate --chart parabola --psi pow:1:0.6 --qmax 512"},
            {"dirichlet", "dirichlet --chart veronese:3 --samples 5 --psi pow:1:1/3 --Q 1"},
            {"cor2",
             "cor2 --chart parabola --alpha sqrt2 --psi pow:1:0.5 --tau 0.5 --kappa 1 "
             "--count 5"},
            {"dimension", "dimension --chart parabola --tau 0.6 --bands 9"},
            {"mtp-check", "mtp-check --chart plane:golden --tau 0.7 --grid 512 --bands 9"},
        };
        for (const auto& cmd : cmds) {
            std::vector<std::string> outputs;
            for (int threads : {1, 4, 8}) {
                fs::path out = tmp / (cmd.name + "_" + std::to_string(threads) + ".csv");
                std::string full = cli + " " + cmd.args + " --threads " +
                                   std::to_string(threads) + " --out " + out.string() +
                                   " 2>/dev/null";
                int rc = std::system(full.c_str());
                if (rc != 0)
                    return "FAIL:" + cmd.name + " exited with " + std::to_string(rc);
                outputs.push_back(slurp(out));
            }
            if (outputs[0].empty()) return "FAIL:" + cmd.name + " produced no output";
            if (outputs[0] != outputs[1] || outputs[0] != outputs[2])
                return "FAIL:" + cmd.name + " differs across thread counts";
        }
        std::ostringstream os;
        os << cmds.size() << " subcommands x 3 thread counts, identical bytes";
        return os.str();
#endif
    });

    std::printf("%s: %d of 12 criteria failed (total %.1f s)\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures,
                total_ms / 1000.0);
    return g_failures;
}
