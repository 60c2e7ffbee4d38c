#include "brdim/minors.hpp"

#include <gtest/gtest.h>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "brdim/rng.hpp"
#include "testutil.hpp"

using brdim::eigenvalues_desc;
using brdim::minor_sums;
using brdim::minor_sums_enum;
using brdim::numerical_rank;

TEST(MinorSumsEnum, ClosedForms) {
    Eigen::MatrixXd one(1, 1);
    one << 5.0;
    EXPECT_DOUBLE_EQ(minor_sums_enum(one).at(1), 5.0);

    Eigen::MatrixXd diag2 = Eigen::Vector2d(3.0, 7.0).asDiagonal();
    const auto ms2 = minor_sums_enum(diag2);
    EXPECT_DOUBLE_EQ(ms2.at(1), 10.0);
    EXPECT_DOUBLE_EQ(ms2.at(2), 21.0);

    // Identity: binomial coefficients.
    const auto ms5 = minor_sums_enum(Eigen::MatrixXd::Identity(5, 5));
    const double expect[] = {5, 10, 10, 5, 1};
    for (int r = 1; r <= 5; ++r) EXPECT_DOUBLE_EQ(ms5.at(r), expect[r - 1]);
}

TEST(MinorSumsEnum, RefusesLargeDimension) {
    EXPECT_THROW(minor_sums_enum(Eigen::MatrixXd::Identity(13, 13)), std::length_error);
}

TEST(MinorSums, Identity3) {
    const auto ms = minor_sums(Eigen::MatrixXd::Identity(3, 3));
    EXPECT_NEAR(ms.at(1), 3.0, 1e-12);
    EXPECT_NEAR(ms.at(2), 3.0, 1e-12);
    EXPECT_NEAR(ms.at(3), 1.0, 1e-12);
}

TEST(MinorSums, RankOneDiagonal) {
    const auto ms = minor_sums(Eigen::Vector3d(2.0, 0.0, 0.0).asDiagonal().toDenseMatrix());
    EXPECT_NEAR(ms.at(1), 2.0, 1e-12);
    EXPECT_NEAR(ms.at(2), 0.0, 1e-12);
    EXPECT_NEAR(ms.at(3), 0.0, 1e-12);
}

TEST(MinorSums, RejectsAsymmetricInput) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    EXPECT_THROW(minor_sums(m), std::invalid_argument);
    EXPECT_THROW(minor_sums_enum(m), std::invalid_argument);
    EXPECT_THROW(eigenvalues_desc(m), std::invalid_argument);
}

// Fast path against the enumeration oracle over mixed inputs; the full 1e4
// sweep runs in the acceptance suite.
TEST(MinorSums, AgreesWithEnumeration) {
    brdim::NormalSampler g(20240101);
    for (int trial = 0; trial < 1500; ++trial) {
        const int d = 1 + trial % 8;
        Eigen::MatrixXd sigma;
        switch (trial % 3) {
            case 0: sigma = testutil::random_symmetric(d, g); break;
            case 1: sigma = testutil::random_psd(d, d, g); break;
            default: sigma = testutil::random_psd(d, std::max(1, d / 2), g); break;
        }
        const auto fast = minor_sums(sigma);
        const auto slow = minor_sums_enum(sigma);
        const double norm = sigma.norm();
        for (int r = 1; r <= d; ++r) {
            EXPECT_TRUE(testutil::close_rel(fast.at(r), slow.at(r), 1e-9, std::pow(norm, r)))
                << "d=" << d << " r=" << r << " fast=" << fast.at(r) << " slow=" << slow.at(r);
        }
    }
}

// Spectrum sandwich: det(r)/d(d-1)..(d-r+1) <= lam_1..lam_r <= det(r).
TEST(MinorSums, EigenvalueProductBounds) {
    brdim::NormalSampler g(7);
    for (int trial = 0; trial < 1500; ++trial) {
        const int d = 2 + trial % 6;
        const Eigen::MatrixXd sigma = testutil::random_psd(d, 1 + trial % d, g);
        const auto ms = minor_sums(sigma);
        const auto lam = eigenvalues_desc(sigma);
        const double slack = 1e-9 * std::pow(sigma.norm() + 1.0, d);
        double falling = 1.0, product = 1.0;
        for (int r = 1; r <= d; ++r) {
            falling *= static_cast<double>(d - r + 1);
            product *= lam[r - 1];
            EXPECT_LE(ms.at(r) / falling, product + slack);
            EXPECT_LE(product, ms.at(r) + slack);
        }
    }
}

// Rank-k construction: positive minors through order k, numerically zero past it.
TEST(MinorSums, RankDetection) {
    brdim::NormalSampler g(99);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + trial % 5;
        const int k = 1 + trial % d;
        const Eigen::MatrixXd sigma = testutil::random_psd(d, k, g);
        const auto ms = minor_sums(sigma);
        const double scale = sigma.trace();
        for (int r = 1; r <= k; ++r) EXPECT_GT(ms.at(r), 0.0) << "d=" << d << " k=" << k;
        for (int r = k + 1; r <= d; ++r) {
            EXPECT_LE(std::abs(ms.at(r)), 1e-8 * std::pow(scale, r)) << "d=" << d << " k=" << k;
        }
        EXPECT_EQ(numerical_rank(sigma), k);
    }
}

// Ratio bounds on each eigenvalue:
// (r!/d!) det(r)/det(r-1) <= lam_r <= (d!/(r-1)!) det(r)/det(r-1).
TEST(MinorSums, SuccessiveRatioBounds) {
    brdim::NormalSampler g(4242);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + trial % 5;
        const int rank = 2 + trial % (d - 1);
        const Eigen::MatrixXd sigma = testutil::random_psd(d, rank, g);
        const auto ms = minor_sums(sigma);
        const auto lam = eigenvalues_desc(sigma);
        double dfact = 1.0;
        for (int i = 2; i <= d; ++i) dfact *= i;
        double rfact = 1.0;
        for (int r = 2; r <= rank; ++r) {
            rfact *= r;
            const double ratio = ms.at(r) / ms.at(r - 1);
            const double slack = 1e-9 * (1.0 + lam[r - 1]);
            double rm1fact = rfact / r;
            EXPECT_LE(rfact / dfact * ratio, lam[r - 1] + slack);
            EXPECT_LE(lam[r - 1], dfact / rm1fact * ratio + slack);
        }
    }
}

// Homogeneity: scaling the matrix by u^2 scales det(r) by u^{2r}.
TEST(MinorSums, ScalingHomogeneity) {
    brdim::NormalSampler g(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 5;
        const Eigen::MatrixXd sigma = testutil::random_psd(d, d, g);
        const double u2 = (trial % 2 == 0) ? 1e6 : 1e-4;
        const auto base = minor_sums(sigma);
        const auto scaled = minor_sums(u2 * sigma);
        for (int r = 1; r <= d; ++r) {
            // The product of the r smallest-conditioned eigenvalues can move
            // by eps * cond between the two solves.
            EXPECT_TRUE(testutil::close_rel(scaled.at(r), std::pow(u2, r) * base.at(r), 1e-10))
                << "d=" << d << " r=" << r;
        }
    }
}

TEST(EigenvaluesDesc, DiagonalSorted) {
    const auto lam = eigenvalues_desc(Eigen::Vector3d(1.0, 3.0, 2.0).asDiagonal().toDenseMatrix());
    EXPECT_DOUBLE_EQ(lam[0], 3.0);
    EXPECT_DOUBLE_EQ(lam[1], 2.0);
    EXPECT_DOUBLE_EQ(lam[2], 1.0);

    const auto ones = eigenvalues_desc(Eigen::MatrixXd::Identity(4, 4));
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(ones[i], 1.0);
}

// Residual check: every eigenvalue satisfies det(sigma - lam I) ~ 0 through
// the reconstructed characteristic polynomial; here checked as
// || (sigma - lam I) v || via a full decomposition re-solve.
TEST(EigenvaluesDesc, ResidualsSmall) {
    brdim::NormalSampler g(555);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::MatrixXd sigma = testutil::random_symmetric(4, g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(sigma);
        ASSERT_EQ(full.info(), Eigen::Success);
        const auto sorted = eigenvalues_desc(sigma);
        for (int i = 0; i < 4; ++i) {
            const Eigen::VectorXd v = full.eigenvectors().col(i);
            const double lam = full.eigenvalues()[i];
            EXPECT_LE((sigma * v - lam * v).norm(), 1e-9 * (1.0 + sigma.norm()));
        }
        // Sorted output carries the same multiset (indefinite, so no clamping).
        Eigen::VectorXd reference = full.eigenvalues();
        std::sort(reference.begin(), reference.end(), std::greater<double>());
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(sorted[i], reference[i], 1e-12 * (1 + sigma.norm()));
    }
}

TEST(EigenvaluesDesc, ClampsPsdNoiseOnly) {
    brdim::NormalSampler g(17);
    // Rank-deficient PSD: no negative output.
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::MatrixXd sigma = testutil::random_psd(5, 2, g);
        const auto lam = eigenvalues_desc(sigma);
        for (int i = 0; i < 5; ++i) EXPECT_GE(lam[i], 0.0);
    }
    // Genuinely indefinite input keeps its negative eigenvalue.
    Eigen::MatrixXd indef = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    EXPECT_DOUBLE_EQ(eigenvalues_desc(indef)[1], -1.0);
}
