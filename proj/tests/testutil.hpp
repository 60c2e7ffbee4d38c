#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "brdim/path.hpp"
#include "brdim/rng.hpp"

namespace testutil {

// Homogeneous Brownian path with increment factor `sigma`, built straight
// from normal draws so estimator tests do not depend on the simulator.
inline brdim::SamplePath brownian_path(const Eigen::MatrixXd& sigma, double T, long n,
                                       std::uint64_t seed) {
    const int d = static_cast<int>(sigma.rows());
    brdim::NormalSampler g(seed);
    brdim::SamplePath p;
    p.horizon = T;
    p.values.setZero(n + 1, d);
    const double sqdt = std::sqrt(T / static_cast<double>(n));
    Eigen::VectorXd noise(d);
    for (long i = 1; i <= n; ++i) {
        g.fill(noise);
        p.values.row(i) = p.values.row(i - 1) + (sigma * noise).transpose() * sqdt;
    }
    return p;
}

// Symmetric matrix with N(0,1)-ish entries; generally indefinite.
inline Eigen::MatrixXd random_symmetric(int d, brdim::NormalSampler& g) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            m(i, j) = g.next();
            m(j, i) = m(i, j);
        }
    }
    return m;
}

// Sum of k outer products of random vectors: PSD with rank min(k, d)
// almost surely.
inline Eigen::MatrixXd random_psd(int d, int k, brdim::NormalSampler& g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v(d);
        for (int j = 0; j < d; ++j) v[j] = g.next();
        m.noalias() += v * v.transpose();
    }
    return m;
}

// Standard normal CDF through erfc; the basis of the quantile oracle below.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Upper-alpha quantile by bisecting the erfc-based CDF: an independent check
// on the rational-polynomial implementation.
inline double normal_upper_quantile_oracle(double alpha) {
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - normal_cdf(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline bool close_rel(double a, double b, double tol, double floor = 0.0) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace testutil
