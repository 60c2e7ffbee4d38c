#include "brdim/minors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brdim {

double MinorSums::at(int r) const {
    if (r < 1 || r > dim()) {
        throw std::out_of_range("minor sum order " + std::to_string(r) +
                                " outside 1.." + std::to_string(dim()));
    }
    return values[static_cast<std::size_t>(r - 1)];
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    if (m.size() == 0) return false;
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol * scale) return false;
        }
    }
    return true;
}

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square, d >= 1");
    }
    if (!is_symmetric(m)) {
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric within tolerance");
    }
}

Eigen::VectorXd solve_eigenvalues(const Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(sigma, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenSolveError(sigma);
    return solver.eigenvalues();
}

// Clamp the near-zero negatives a PSD input picks up in finite precision.
void clamp_psd_noise(Eigen::VectorXd& vals, double trace) {
    const double tol = kRankTol * std::max(trace, 0.0);
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals[i] < 0.0 && vals[i] >= -tol) vals[i] = 0.0;
    }
}

}  // namespace

std::vector<double> elementary_symmetric(const Eigen::VectorXd& values) {
    const int k = static_cast<int>(values.size());
    std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < k; ++i) {
        for (int r = std::min(i + 1, k); r >= 1; --r) {
            e[static_cast<std::size_t>(r)] += values[i] * e[static_cast<std::size_t>(r - 1)];
        }
    }
    return {e.begin() + 1, e.end()};
}

MinorSums minor_sums(const Eigen::MatrixXd& sigma) {
    require_symmetric(sigma, "minor_sums");
    Eigen::VectorXd vals = solve_eigenvalues(sigma);
    clamp_psd_noise(vals, sigma.trace());
    return MinorSums{elementary_symmetric(vals)};
}

MinorSums minor_sums_enum(const Eigen::MatrixXd& sigma) {
    require_symmetric(sigma, "minor_sums_enum");
    const int d = static_cast<int>(sigma.rows());
    if (d > 12) {
        throw std::length_error("minor_sums_enum: d = " + std::to_string(d) +
                                " exceeds the enumeration cap of 12");
    }

    MinorSums out;
    out.values.assign(static_cast<std::size_t>(d), 0.0);
    for (int r = 1; r <= d; ++r) {
        // Iterate r-subsets of {0..d-1} in lexicographic order.
        std::vector<int> idx(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
        double sum = 0.0;
        while (true) {
            Eigen::MatrixXd sub(r, r);
            for (int i = 0; i < r; ++i) {
                for (int j = 0; j < r; ++j) {
                    sub(i, j) = sigma(idx[static_cast<std::size_t>(i)],
                                      idx[static_cast<std::size_t>(j)]);
                }
            }
            sum += (r == 1) ? sub(0, 0) : sub.determinant();

            int pos = r - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == d - r + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < r; ++i) {
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
            }
        }
        out.values[static_cast<std::size_t>(r - 1)] = sum;
    }
    return out;
}

Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& sigma) {
    require_symmetric(sigma, "eigenvalues_desc");
    Eigen::VectorXd vals = solve_eigenvalues(sigma);
    clamp_psd_noise(vals, sigma.trace());
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

int numerical_rank(const Eigen::MatrixXd& sigma) {
    const Eigen::VectorXd vals = eigenvalues_desc(sigma);
    if (vals[0] <= 0.0) return 0;
    const double cut = kRankTol * vals[0];
    int rank = 0;
    while (rank < vals.size() && vals[rank] > cut) ++rank;
    return rank;
}

}  // namespace brdim
