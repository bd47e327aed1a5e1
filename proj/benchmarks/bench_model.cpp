#include <benchmark/benchmark.h>

#include "dml/model.hpp"

using namespace dml;

static void BM_RhsOriginal(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.013;
    State2 s{0.3, 0.05};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_original(s, p));
    }
}
BENCHMARK(BM_RhsOriginal);

static void BM_RhsImproved(benchmark::State& state) {
    ImprovedParams p;
    p.I0 = 0.02;
    State3 s{0.3, 0.05, 0.2};
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_improved(s, t, p));
        t += 0.1;
    }
}
BENCHMARK(BM_RhsImproved);

static void BM_Jacobian(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    State2 s{0.3, 0.05};
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian_original(s, p));
    }
}
BENCHMARK(BM_Jacobian);
