#include <benchmark/benchmark.h>

#include "sevrel/gaussian.hpp"
#include "sevrel/severity.hpp"

namespace g = sevrel::gaussian;

static void BM_DeficitMap(benchmark::State& state) {
    const double b = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g::deficit_map(b));
    }
}
// Direct ratio below the switch at 8, continued fraction above.
BENCHMARK(BM_DeficitMap)->Arg(100)->Arg(300)->Arg(750)->Arg(1200)->Arg(4000);

static void BM_InvertDeficitMap(benchmark::State& state) {
    const double y = static_cast<double>(state.range(0)) / 10000.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g::invert_deficit_map(y));
    }
}
BENCHMARK(BM_InvertDeficitMap)->Arg(10)->Arg(1000)->Arg(3040)->Arg(4741)->Arg(7900);

static void BM_Quantile(benchmark::State& state) {
    double p = 0.0;
    for (auto _ : state) {
        p += 0.0001;
        if (p >= 1.0) p = 0.0001;
        benchmark::DoNotOptimize(g::quantile(p));
    }
}
BENCHMARK(BM_Quantile);

static void BM_Classify(benchmark::State& state) {
    double e = 0.0;
    for (auto _ : state) {
        e += 0.001;
        if (e >= 1.0) e = 0.001;
        benchmark::DoNotOptimize(sevrel::classify(e));
    }
}
BENCHMARK(BM_Classify);
