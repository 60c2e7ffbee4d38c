#include <benchmark/benchmark.h>

#include <cmath>

#include "brdim/estimators.hpp"
#include "brdim/rng.hpp"

namespace {

brdim::SamplePath random_walk(int d, long n, std::uint64_t seed) {
    brdim::NormalSampler g(seed);
    brdim::SamplePath p;
    p.horizon = 1.0;
    p.values.setZero(n + 1, d);
    const double sqdt = std::sqrt(1.0 / static_cast<double>(n));
    for (long i = 1; i <= n; ++i) {
        for (int j = 0; j < d; ++j) p.values(i, j) = p.values(i - 1, j) + sqdt * g.next();
    }
    return p;
}

// Full lbar/xi panel over the whole grid: the sliding-window hot loop.
void BM_PanelBuild(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const long n = state.range(1);
    const brdim::SamplePath path = random_walk(d, n, 7);
    brdim::PanelSpec spec;
    spec.times = {0.25, 0.5, 0.75, 1.0};
    spec.rmax = d;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::build_panel(path, spec));
    }
    state.SetItemsProcessed(state.iterations() * n * d);
}
BENCHMARK(BM_PanelBuild)->Args({2, 10000})->Args({3, 10000})->Args({5, 10000})->Args({3, 100000});

void BM_PanelWithZ(benchmark::State& state) {
    const long n = state.range(0);
    const brdim::SamplePath path = random_walk(2, n, 9);
    brdim::PanelSpec spec;
    spec.times = {1.0};
    spec.rmax = 2;
    spec.zpairs = {{1, 1}, {1, 2}, {2, 2}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::build_panel(path, spec));
    }
}
BENCHMARK(BM_PanelWithZ)->Arg(10000)->Arg(100000);

}  // namespace
