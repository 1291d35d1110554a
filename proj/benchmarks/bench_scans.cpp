// Microbenchmarks for the enumeration kernels: denominator-set scans,
// near-point enumeration, the Minkowski-system solver, and box counting.
// These are the hot paths behind the CLI pipelines.

#include <benchmark/benchmark.h>

#include <cmath>

#include "dioman/dirichlet.hpp"
#include "dioman/limsup.hpp"
#include "dioman/manifold.hpp"
#include "dioman/rational_points.hpp"

using namespace dioman;

namespace {

void BM_quadext_dist_golden(benchmark::State& state) {
    QuadExt g = QuadExt::golden();
    Int q = 1;
    for (auto _ : state) {
        QuadExt d = (QuadExt(rat_of(q)) * g).dist_to_nearest();
        benchmark::DoNotOptimize(d);
        q = q % 1000000 + 1;
    }
}
BENCHMARK(BM_quadext_dist_golden);

void BM_bset_golden_tau1(benchmark::State& state) {
    std::vector<QuadExt> beta{QuadExt::golden()};
    const Int qmax = state.range(0);
    for (auto _ : state) {
        auto set = bset(beta, Rat(1), qmax);
        benchmark::DoNotOptimize(set.members.size());
    }
    state.SetItemsProcessed(state.iterations() * qmax);
}
BENCHMARK(BM_bset_golden_tau1)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_bset_golden_tau_7_10(benchmark::State& state) {
    // fractional tau exercises the power-comparison fallback near boundaries
    std::vector<QuadExt> beta{QuadExt::golden()};
    const Int qmax = state.range(0);
    for (auto _ : state) {
        auto set = bset(beta, Rat(7, 10), qmax);
        benchmark::DoNotOptimize(set.members.size());
    }
    state.SetItemsProcessed(state.iterations() * qmax);
}
BENCHMARK(BM_bset_golden_tau_7_10)->Arg(10000)->Arg(100000);

void BM_enumerate_parabola(benchmark::State& state) {
    auto par = make_parabola(BoxDomain::unit(1));
    auto psi = ApproxFunction::power_law(Rat(1), Rat(3, 5));
    const Int qmax = state.range(0);
    for (auto _ : state) {
        auto e = enumerate_near(par, psi, qmax);
        benchmark::DoNotOptimize(e.records.size());
    }
    state.SetItemsProcessed(state.iterations() * qmax * (qmax + 1) / 2);
}
BENCHMARK(BM_enumerate_parabola)->Arg(256)->Arg(1024)->Arg(4096);

void BM_dirichlet_search_parabola(benchmark::State& state) {
    auto par = make_parabola(BoxDomain::unit(1));
    auto psi = ApproxFunction::power_law(Rat(1), Rat(1, 2));
    std::vector<QuadExt> alpha{QuadExt::sqrt2_minus_1()};
    const Int Q = state.range(0);
    for (auto _ : state) {
        auto sol = dirichlet_search(par, alpha, psi, Q);
        benchmark::DoNotOptimize(sol.point.q);
    }
}
BENCHMARK(BM_dirichlet_search_parabola)->Arg(1024)->Arg(65536)->Arg(1 << 20);

void BM_box_count_1d(benchmark::State& state) {
    const long long n = state.range(0);
    std::vector<Ball> balls;
    balls.reserve(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) {
        double c = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        balls.emplace_back(std::vector<double>{c}, 0.4 / static_cast<double>(n));
    }
    const double cell = 0.25 / static_cast<double>(n);
    for (auto _ : state) {
        long long count = box_count(balls, cell, {0.0}, {1.0});
        benchmark::DoNotOptimize(count);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_box_count_1d)->Arg(1000)->Arg(100000);

void BM_counterexample_golden(benchmark::State& state) {
    std::vector<QuadExt> beta{QuadExt::golden()};
    const Int qmax = state.range(0);
    for (auto _ : state) {
        auto rep = counterexample_check(beta, qmax);
        benchmark::DoNotOptimize(rep.constant.c0);
    }
    state.SetItemsProcessed(state.iterations() * qmax);
}
BENCHMARK(BM_counterexample_golden)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
