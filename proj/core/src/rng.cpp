#include "brdim/rng.hpp"

#include <cmath>

namespace brdim {

std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    // Two rounds of the splitmix finalizer over (master, index); one round
    // already decorrelates adjacent indices, the second covers adjacent
    // masters as well.
    SplitMix64 g(master ^ (index * 0xD1B54A32D192ED03ULL));
    g.next();
    return g.next();
}

double NormalSampler::next() {
    if (has_cache_) {
        has_cache_ = false;
        return cache_;
    }
    while (true) {
        const double u = 2.0 * gen_.next_unit() - 1.0;
        const double v = 2.0 * gen_.next_unit() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * f;
        has_cache_ = true;
        return u * f;
    }
}

void NormalSampler::fill(Eigen::Ref<Eigen::MatrixXd> out) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = next();
        }
    }
}

}  // namespace brdim
