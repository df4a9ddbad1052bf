#include <benchmark/benchmark.h>

#include <random>

#include "fairline/aoi.hpp"
#include "fairline/metrics.hpp"
#include "fairline/moead.hpp"

using namespace fairline;

namespace {

Scenario reference_scenario() {
    ScenarioConfig c;
    return validate(c, build_highway(c, {20, 24, 28}));
}

}  // namespace

static void BM_ObjectiveEvaluate(benchmark::State& state) {
    const Scenario s = reference_scenario();
    const moead::ObjectiveEvaluator eval(s);
    const WindowVector w = {40, 90, 140};
    for (auto _ : state) benchmark::DoNotOptimize(eval.evaluate(w));
}
BENCHMARK(BM_ObjectiveEvaluate);

static void BM_ShsSolve(benchmark::State& state) {
    const Scenario s = reference_scenario();
    const auto rates = aoi::build_rates({40, 90, 140}, s);
    for (auto _ : state) benchmark::DoNotOptimize(aoi::solve(rates));
}
BENCHMARK(BM_ShsSolve);

static void BM_ShsSimulate(benchmark::State& state) {
    const Scenario s = reference_scenario();
    const auto rates = aoi::build_rates({40, 90, 140}, s);
    for (auto _ : state)
        benchmark::DoNotOptimize(aoi::simulate_shs(rates, 0, 100000, 7));
}
BENCHMARK(BM_ShsSimulate);

static void BM_Hypervolume(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    for (long i = 0; i < state.range(0); ++i)
        pts.push_back({u(rng), u(rng), u(rng), u(rng)});
    const std::vector<double> ref(4, 1.1);
    for (auto _ : state) benchmark::DoNotOptimize(metrics::hypervolume(pts, ref));
}
BENCHMARK(BM_Hypervolume)->Arg(50)->Arg(200);

static void BM_EvolveGeneration(benchmark::State& state) {
    const Scenario s = reference_scenario();
    moead::OptimizerConfig cfg;
    cfg.generations = 1;
    cfg.rng_seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(moead::evolve(s, cfg));
}
BENCHMARK(BM_EvolveGeneration);

BENCHMARK_MAIN();
