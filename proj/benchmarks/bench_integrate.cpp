#include <benchmark/benchmark.h>

#include "dml/integrate.hpp"
#include "dml/scenarios.hpp"

using namespace dml;

static void BM_IntegrateOriginalUnit(benchmark::State& state) {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.03;
    const Rhs2 rhs = [&p](double, const State2& s) {
        return rhs_original(s, p);
    };
    SolverSettings st;
    st.rtol = 1e-9;
    st.atol = 1e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            integrate_to(rhs, {0.01, 0.01}, 0.0, 1000.0, st));
    }
}
BENCHMARK(BM_IntegrateOriginalUnit);

static void BM_ScenarioFig4e(benchmark::State& state) {
    const auto& sc = scenario_by_name("fig4e");
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(sc));
    }
}
BENCHMARK(BM_ScenarioFig4e)->Unit(benchmark::kMillisecond);
