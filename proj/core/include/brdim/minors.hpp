#pragma once

#include <Eigen/Core>
#include <vector>

#include "brdim/errors.hpp"

namespace brdim {

// Relative tolerance accepted when validating matrix symmetry.
inline constexpr double kSymmetryTol = 1e-12;

// An eigenvalue counts as zero when <= kRankTol * lambda_max.
inline constexpr double kRankTol = 1e-10;

// Eigensolver failed to converge; carries the offending input.
class EigenSolveError : public NumericError {
public:
    explicit EigenSolveError(Eigen::MatrixXd input)
        : NumericError("symmetric eigensolver did not converge (d = " +
                       std::to_string(input.rows()) + ")"),
          input_(std::move(input)) {}

    const Eigen::MatrixXd& input() const noexcept { return input_; }

private:
    Eigen::MatrixXd input_;
};

// Principal minor sums of a d x d symmetric matrix: at(r) is the sum of the
// determinants of all r x r principal submatrices. at(1) is the trace,
// at(d) the determinant.
struct MinorSums {
    std::vector<double> values;

    int dim() const noexcept { return static_cast<int>(values.size()); }
    double at(int r) const;  // 1-based order; throws std::out_of_range
};

bool is_symmetric(const Eigen::MatrixXd& m, double tol = kSymmetryTol);

// All d minor sums in O(d^3): eigendecompose and accumulate the elementary
// symmetric polynomials of the spectrum. Throws std::invalid_argument for
// non-symmetric input.
MinorSums minor_sums(const Eigen::MatrixXd& sigma);

// Literal sum over all r-subsets of {1..d}, each minor by LU. Exponential in
// d; refused above d = 12 (std::length_error).
MinorSums minor_sums_enum(const Eigen::MatrixXd& sigma);

// Eigenvalues sorted non-increasing. Negative values within
// kRankTol * max(trace, 0) of zero are clamped to zero, so PSD inputs come
// out non-negative; genuinely indefinite spectra are left alone.
Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& sigma);

// Count of eigenvalues above kRankTol * lambda_max.
int numerical_rank(const Eigen::MatrixXd& sigma);

// e_1..e_k of the given values, e_r = sum over r-subsets of products.
std::vector<double> elementary_symmetric(const Eigen::VectorXd& values);

}  // namespace brdim
