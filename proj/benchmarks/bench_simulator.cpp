#include <benchmark/benchmark.h>

#include "brdim/simulator.hpp"

namespace {

void BM_EulerStep(benchmark::State& state) {
    const auto model = brdim::make_model("sv2d", {{"rho", 0.5}});
    const double T = 1.0;
    const double h = 1.0 / static_cast<double>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::simulate_euler(model, T, h, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EulerStep)->Arg(10000)->Arg(100000);

void BM_EulerEnergy(benchmark::State& state) {
    const auto model = brdim::make_model("energy3d");
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::simulate_euler(model, 1.0, 1e-4, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EulerEnergy);

}  // namespace

BENCHMARK_MAIN();
