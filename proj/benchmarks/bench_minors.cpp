#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "brdim/minors.hpp"
#include "brdim/rng.hpp"

namespace {

Eigen::MatrixXd random_psd(int d, std::uint64_t seed) {
    brdim::NormalSampler g(seed);
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = g.next();
    }
    return a * a.transpose();
}

void BM_MinorSums(benchmark::State& state) {
    const Eigen::MatrixXd sigma = random_psd(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::minor_sums(sigma));
    }
}
BENCHMARK(BM_MinorSums)->DenseRange(2, 10, 2);

void BM_MinorSumsEnum(benchmark::State& state) {
    const Eigen::MatrixXd sigma = random_psd(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brdim::minor_sums_enum(sigma));
    }
}
BENCHMARK(BM_MinorSumsEnum)->DenseRange(2, 10, 2);

}  // namespace
