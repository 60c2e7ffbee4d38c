#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "brdim/coeff.hpp"

namespace brdim {

// Integral of det(r; c_s) over [0, t], left-Riemann on the recorded grid.
double lbar_true(const CoeffPath& cp, int r, double t);

// Integral of the r-th largest eigenvalue of c_s over [0, t].
double l_true(const CoeffPath& cp, int r, double t);

// Maximal numerical rank of c_s over the grid points of [0, t].
int rank_true(const CoeffPath& cp, double t);

// t^{r-1} lbar_true(r) / lbar_true(1)^r with 0/0 = 0.
double s_true(const CoeffPath& cp, int r, double t);

// Scale-invariant ratio t^{1/r} lbar_true(r+1) / lbar_true(r)^{(r+1)/r},
// 0/0 = 0.
double xi_true(const CoeffPath& cp, int r, double t);

// Per-grid-point minor sums integrated once, for callers that query many
// (r, t) pairs on the same path.
class TrueFunctionals {
public:
    TrueFunctionals(const CoeffPath& cp, int rmax);

    double lbar(int r, double t) const;
    double xi(int r, double t) const;
    double s(int r, double t) const;
    int rank(double t) const;
    int rmax() const noexcept { return rmax_; }

private:
    long index(double t) const;

    double step_;
    int rmax_;
    Eigen::MatrixXd lbar_prefix_;   // (points + 1) x rmax, cumulative integrals
    std::vector<int> rank_prefix_;  // running maximum of per-point ranks
};

struct McEstimate {
    double mean;
    double std_error;
};

// Monte-Carlo mean of det(r; zeta_r) / r! over draws of r i.i.d. N(0, Sigma)
// vectors; the unbiased estimate of det(r; Sigma). Draws come from a
// rank-truncated factor of Sigma, so r above rank(Sigma) makes every draw
// exactly degenerate and the estimate is an exact zero.
McEstimate gamma_mc(const Eigen::MatrixXd& sigma, int r, long n_draws, std::uint64_t seed);

// Monte-Carlo estimate of the covariance functional
//   Gamma(r, r'; Sigma) = E(det(r; zeta_r) det(r'; zeta_{r'})
//                           - det(r; zeta_r) det(r'; zeta'_{r'})) / (r! r'!)
// with zeta_j built from the first j of d + r' draws per sample and zeta'
// from the last r', so the two factors of the second product share nothing.
McEstimate gamma2_mc(const Eigen::MatrixXd& sigma, int r, int rprime, long n_draws,
                     std::uint64_t seed);

// Riemann sum of gamma2_mc over every `stride`-th grid point of [0, t]:
// the asymptotic covariance integral Z(r, r')_t. The standard error is
// propagated across the evaluation points.
McEstimate z_true(const CoeffPath& cp, int r, int rprime, double t,
                  long n_per_point = 2000, long stride = 100, std::uint64_t seed = 0);

}  // namespace brdim
