#include "brdim/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "brdim/errors.hpp"
#include "brdim/estimators.hpp"
#include "brdim/minors.hpp"
#include "brdim/rng.hpp"

namespace brdim {

namespace {

void check_coeff(const CoeffPath& cp) {
    if (cp.values.size() < 2 || !(cp.step > 0.0)) {
        throw std::invalid_argument("coeff path: need step > 0 and >= 2 grid points");
    }
}

long point_index(const CoeffPath& cp, double t) {
    check_coeff(cp);
    if (!(t > 0.0) || t > cp.horizon() * (1.0 + 1e-9)) {
        throw std::invalid_argument("oracle: t outside (0, horizon]");
    }
    const double x = t / cp.step;
    const double k = std::round(x);
    const long idx = (std::abs(x - k) <= 1e-9 * std::max(1.0, x)) ? static_cast<long>(k)
                                                                  : static_cast<long>(std::floor(x));
    return std::min(idx, static_cast<long>(cp.values.size()) - 1);
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

// d x rank factor A with A A* = Sigma, eigenvalues at or below the rank cut
// dropped entirely.
Eigen::MatrixXd truncated_factor(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1 || !is_symmetric(sigma)) {
        throw std::invalid_argument("gamma_mc: matrix must be symmetric, d >= 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
    if (solver.info() != Eigen::Success) throw EigenSolveError(sigma);
    const Eigen::VectorXd lam = solver.eigenvalues();
    const double lam_max = lam.maxCoeff();
    const double cut = kRankTol * std::max(lam_max, 0.0);

    std::vector<int> keep;
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] > cut) keep.push_back(i);
    }
    Eigen::MatrixXd factor(sigma.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        factor.col(static_cast<Eigen::Index>(j)) =
            solver.eigenvectors().col(keep[j]) * std::sqrt(lam[keep[j]]);
    }
    return factor;
}

// det(r; sum of r outer products) equals the Gram determinant of the r
// draws (Cauchy-Binet), which keeps the Monte-Carlo route free of the
// eigenvalue machinery it is meant to check.
double gram_det(const Eigen::MatrixXd& block) {
    const Eigen::MatrixXd gram = block.transpose() * block;
    return gram.rows() == 1 ? gram(0, 0) : gram.determinant();
}

McEstimate finish(double sum, double sum_sq, long n) {
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

double lbar_true(const CoeffPath& cp, int r, double t) {
    const long upto = point_index(cp, t);
    double sum = 0.0;
    for (long k = 0; k < upto; ++k) {
        sum += minor_sums(cp.values[static_cast<std::size_t>(k)]).at(r);
    }
    return cp.step * sum;
}

double l_true(const CoeffPath& cp, int r, double t) {
    const long upto = point_index(cp, t);
    double sum = 0.0;
    for (long k = 0; k < upto; ++k) {
        const Eigen::VectorXd lam = eigenvalues_desc(cp.values[static_cast<std::size_t>(k)]);
        sum += lam[r - 1];
    }
    return cp.step * sum;
}

int rank_true(const CoeffPath& cp, double t) {
    const long upto = point_index(cp, t);
    int rank = 0;
    for (long k = 0; k <= upto; ++k) {
        rank = std::max(rank, numerical_rank(cp.values[static_cast<std::size_t>(k)]));
    }
    return rank;
}

double s_true(const CoeffPath& cp, int r, double t) {
    const double l1 = lbar_true(cp, 1, t);
    const double lr = lbar_true(cp, r, t);
    if (lr == 0.0) return 0.0;
    if (l1 == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(t, r - 1) * lr / std::pow(l1, r);
}

double xi_true(const CoeffPath& cp, int r, double t) {
    return xi_from_lbar(lbar_true(cp, r, t), lbar_true(cp, r + 1, t), r, t);
}

TrueFunctionals::TrueFunctionals(const CoeffPath& cp, int rmax) : step_(cp.step), rmax_(rmax) {
    check_coeff(cp);
    if (rmax < 1 || rmax > cp.dim()) {
        throw std::invalid_argument("oracle: rmax must lie in 1..d");
    }
    const long points = static_cast<long>(cp.values.size());
    lbar_prefix_.setZero(points + 1, rmax);
    rank_prefix_.resize(static_cast<std::size_t>(points));
    int running = 0;
    for (long k = 0; k < points; ++k) {
        const Eigen::MatrixXd& c = cp.values[static_cast<std::size_t>(k)];
        const MinorSums ms = minor_sums(c);
        for (int r = 1; r <= rmax; ++r) {
            lbar_prefix_(k + 1, r - 1) = lbar_prefix_(k, r - 1) + step_ * ms.at(r);
        }
        running = std::max(running, numerical_rank(c));
        rank_prefix_[static_cast<std::size_t>(k)] = running;
    }
}

long TrueFunctionals::index(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("oracle: t must be > 0");
    const double x = t / step_;
    const double k = std::round(x);
    const long idx = (std::abs(x - k) <= 1e-9 * std::max(1.0, x)) ? static_cast<long>(k)
                                                                  : static_cast<long>(std::floor(x));
    return std::min(idx, static_cast<long>(rank_prefix_.size()) - 1);
}

double TrueFunctionals::lbar(int r, double t) const {
    if (r < 1 || r > rmax_) throw std::out_of_range("oracle: no lbar(" + std::to_string(r) + ")");
    return lbar_prefix_(index(t), r - 1);
}

double TrueFunctionals::xi(int r, double t) const {
    return xi_from_lbar(lbar(r, t), lbar(r + 1, t), r, t);
}

double TrueFunctionals::s(int r, double t) const {
    const double l1 = lbar(1, t);
    const double lr = lbar(r, t);
    if (lr == 0.0) return 0.0;
    if (l1 == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(t, r - 1) * lr / std::pow(l1, r);
}

int TrueFunctionals::rank(double t) const {
    return rank_prefix_[static_cast<std::size_t>(index(t))];
}

McEstimate gamma_mc(const Eigen::MatrixXd& sigma, int r, long n_draws, std::uint64_t seed) {
    if (r < 1 || r > sigma.rows()) throw std::invalid_argument("gamma_mc: r outside 1..d");
    if (n_draws < 100) throw std::invalid_argument("gamma_mc: need >= 100 draws");
    const Eigen::MatrixXd factor = truncated_factor(sigma);
    if (factor.cols() < r) return {0.0, 0.0};  // every zeta_r has rank < r

    NormalSampler normals(seed);
    Eigen::MatrixXd w(factor.cols(), r);
    const double norm = factorial(r);
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n_draws; ++i) {
        normals.fill(w);
        const double v = gram_det(factor * w) / norm;
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, n_draws);
}

McEstimate gamma2_mc(const Eigen::MatrixXd& sigma, int r, int rprime, long n_draws,
                     std::uint64_t seed) {
    const int d = static_cast<int>(sigma.rows());
    if (r < 1 || r > d || rprime < 1 || rprime > d) {
        throw std::invalid_argument("gamma2_mc: orders outside 1..d");
    }
    if (n_draws < 100) throw std::invalid_argument("gamma2_mc: need >= 100 draws");
    const Eigen::MatrixXd factor = truncated_factor(sigma);
    if (factor.cols() < r || factor.cols() < rprime) return {0.0, 0.0};

    NormalSampler normals(seed);
    Eigen::MatrixXd w(factor.cols(), d + rprime);
    const double norm = factorial(r) * factorial(rprime);
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n_draws; ++i) {
        normals.fill(w);
        const Eigen::MatrixXd draws = factor * w;  // d x (d + rprime)
        const double det_r = gram_det(draws.leftCols(r));
        const double det_rp = gram_det(draws.leftCols(rprime));
        const double det_rp_fresh = gram_det(draws.rightCols(rprime));
        const double v = (det_r * det_rp - det_r * det_rp_fresh) / norm;
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, n_draws);
}

McEstimate z_true(const CoeffPath& cp, int r, int rprime, double t, long n_per_point,
                  long stride, std::uint64_t seed) {
    if (stride < 1) throw std::invalid_argument("z_true: stride must be >= 1");
    const long upto = point_index(cp, t);
    double sum = 0.0, var = 0.0;
    for (long k = 0; k < upto; k += stride) {
        const double width = cp.step * static_cast<double>(std::min(stride, upto - k));
        const McEstimate g = gamma2_mc(cp.values[static_cast<std::size_t>(k)], r, rprime,
                                       n_per_point, derive_stream(seed, static_cast<std::uint64_t>(k)));
        sum += width * g.mean;
        var += width * width * g.std_error * g.std_error;
    }
    return {sum, std::sqrt(var)};
}

}  // namespace brdim
