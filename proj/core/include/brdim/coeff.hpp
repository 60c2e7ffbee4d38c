#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace brdim {

// The latent instantaneous covariance c_s = sigma sigma* recorded on a
// uniform grid of step `step`, values[k] = c at time k*step. Only a
// simulator knows this path; estimators never see it.
struct CoeffPath {
    double step = 0.0;
    std::vector<Eigen::MatrixXd> values;

    int dim() const noexcept { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
    double horizon() const noexcept {
        return values.empty() ? 0.0 : step * static_cast<double>(values.size() - 1);
    }
};

// CSV with header `time,c11,c12,...,cdd` (upper triangle, row-major).
void save_coeff_csv(const CoeffPath& cp, std::ostream& out);
void save_coeff_csv(const CoeffPath& cp, const std::filesystem::path& file);
CoeffPath load_coeff_csv(std::istream& in);
CoeffPath load_coeff_csv(const std::filesystem::path& file);

}  // namespace brdim
