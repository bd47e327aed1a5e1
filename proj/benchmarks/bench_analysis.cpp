#include <benchmark/benchmark.h>

#include <cmath>

#include "dml/classify.hpp"
#include "dml/codim2.hpp"
#include "dml/continuation.hpp"
#include "dml/equilibria.hpp"

using namespace dml;

static void BM_FindEquilibria(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_equilibria(p));
    }
}
BENCHMARK(BM_FindEquilibria);

static void BM_BranchGamma028(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.03;
    const auto eqs = find_equilibria(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(continue_equilibrium(
            eqs.equilibria.front(), p, FreeParam::I, -0.05, 0.1));
    }
}
BENCHMARK(BM_BranchGamma028)->Unit(benchmark::kMillisecond);

static void BM_FoldCurve(benchmark::State& state) {
    OriginalParams p;
    std::vector<double> grid;
    for (int i = 1; i < 400; ++i) grid.push_back(0.66 * i / 400.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fold_curve(p, grid));
    }
}
BENCHMARK(BM_FoldCurve);

static void BM_Lyapunov(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    const double x = 7.0 / 15.0;
    p.I = (p.A / p.gamma) * std::exp(p.alpha * x) - x * x * (1 - x);
    const State2 eq{x, x * x * (1 - x) + p.I};
    for (auto _ : state) {
        benchmark::DoNotOptimize(first_lyapunov_coefficient(eq, p));
    }
}
BENCHMARK(BM_Lyapunov);

static void BM_DetectSpikes(benchmark::State& state) {
    // synthetic three-spikes-per-period pattern, 24k samples
    TimeSeries ts;
    ts.dim = 2;
    const int n = 24000;
    ts.t.resize(n);
    ts.states.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = 120.0 * i / (n - 1);
        const double ph = std::fmod(t, 12.0);
        double v = 0.0;
        for (double c : {2.0, 3.0, 4.0})
            v += std::exp(-(ph - c) * (ph - c) / 0.05);
        ts.t[i] = t;
        ts.states[i] = {v, 0, 0};
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_spikes(ts));
    }
}
BENCHMARK(BM_DetectSpikes)->Unit(benchmark::kMicrosecond);
