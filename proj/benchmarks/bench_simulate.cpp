#include <benchmark/benchmark.h>

#include <vector>

#include "sevrel/limit_state.hpp"
#include "sevrel/severity.hpp"

using namespace sevrel;

namespace {

LimitStateModel case_study_model() {
    Mixture live{{{0.9995, GumbelMin{150.0, 30.0}}, {0.0005, GumbelMin{500.0, 30.0}}}};
    return LimitStateModel({{"R", 1.0, lognormal_from_median_cov(1520.0, 0.10)},
                            {"D", -1.2, Normal{500.0, 50.0}},
                            {"L", -1.6, std::move(live)}});
}

}  // namespace

static void BM_GenerateChunk(benchmark::State& state) {
    const LimitStateModel model = case_study_model();
    std::vector<double> out(static_cast<std::size_t>(state.range(0)));
    std::uint64_t chunk = 0;
    for (auto _ : state) {
        generate_chunk(model, 1, chunk++, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateChunk)->Arg(4096)->Arg(65536);

static void BM_Simulate(benchmark::State& state) {
    const LimitStateModel model = case_study_model();
    SimulationConfig config;
    config.sampleCount = static_cast<std::size_t>(state.range(0));
    ExecutionOptions exec;
    exec.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(model, config, exec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Args({1'000'000, 1})->Args({1'000'000, 4})->Unit(benchmark::kMillisecond);

static void BM_Analyze(benchmark::State& state) {
    const LimitStateModel model = case_study_model();
    SimulationConfig config;
    config.sampleCount = 1'000'000;
    const SimulationSummary summary = simulate(model, config);
    const MomentReport finiteness = model.analytic_moments();
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze(summary, finiteness));
    }
}
BENCHMARK(BM_Analyze)->Unit(benchmark::kMillisecond);
