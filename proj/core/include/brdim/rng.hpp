#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace brdim {

// splitmix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). 64-bit
// state advanced by a fixed odd constant, output run through a finalizer.
// The whole sequence is a pure function of the seed, on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Seed for substream `index` of a master seed. Distinct indices give
// decorrelated streams, so work units can be assigned to threads in any
// order without changing their draws.
std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index);

// Standard normals via Marsaglia's polar transform (exact, no table or
// quantile approximation). The second deviate of each pair is cached.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next();
    void fill(Eigen::Ref<Eigen::MatrixXd> out);

private:
    SplitMix64 gen_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

}  // namespace brdim
