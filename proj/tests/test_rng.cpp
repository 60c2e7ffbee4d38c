#include "brdim/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using brdim::derive_stream;
using brdim::NormalSampler;
using brdim::SplitMix64;

TEST(SplitMix64, KnownSequence) {
    // Reference values of the Vigna splitmix64 for seed 0 and seed 42.
    SplitMix64 zero(0);
    EXPECT_EQ(zero.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(zero.next(), 0x6E789E6AA1B965F4ULL);
    SplitMix64 forty_two(42);
    EXPECT_EQ(forty_two.next(), 0xBDD732262FEB6E95ULL);
}

TEST(SplitMix64, UnitIntervalRange) {
    SplitMix64 g(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = g.next_unit();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(DeriveStream, DistinctAndOrderFree) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_stream(99, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_stream(99, 7), derive_stream(99, 7));
    EXPECT_NE(derive_stream(99, 7), derive_stream(100, 7));
}

TEST(NormalSampler, DeterministicPerSeed) {
    NormalSampler a(2024), b(2024), c(2025);
    bool any_different = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.next();
        EXPECT_EQ(x, b.next());
        if (x != c.next()) any_different = true;
    }
    EXPECT_TRUE(any_different);
}

TEST(NormalSampler, MomentsMatchStandardNormal) {
    NormalSampler g(31337);
    const long n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double x = g.next();
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double kurt = sum4 / n;
    // 5 standard errors of the respective sample moments.
    EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(var, 1.0, 5.0 * std::sqrt(2.0 / static_cast<double>(n)));
    EXPECT_NEAR(kurt, 3.0, 5.0 * std::sqrt(96.0 / static_cast<double>(n)));
}
