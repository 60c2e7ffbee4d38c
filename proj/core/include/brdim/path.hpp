#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>

namespace brdim {

// A d-dimensional path observed at the n+1 regular times i*T/n. Timestamps
// are implicit; the loader validates spacing and then drops them.
struct SamplePath {
    double horizon = 0.0;   // T
    Eigen::MatrixXd values; // (n+1) x d, row i = X_{iT/n}

    int dim() const noexcept { return static_cast<int>(values.cols()); }
    long steps() const noexcept { return static_cast<long>(values.rows()) - 1; }  // n
};

// Throws std::invalid_argument unless n >= 1, d >= 1, T > 0 and all entries
// are finite.
void validate(const SamplePath& path);

// Row i = X_{(i+1)T/n} - X_{iT/n}; n rows, exact differences.
Eigen::MatrixXd increments(const SamplePath& path);

// CSV with header `time,x1,...,xd`, times strictly increasing, equally
// spaced within 1e-6 relative jitter, starting at 0. T is the last time.
// Throws ParseError with the offending 1-based line number.
SamplePath load_csv(std::istream& in);
SamplePath load_csv(const std::filesystem::path& file);

// Inverse of load_csv; numbers carry 17 significant digits so a save/load
// round trip is lossless.
void save_csv(const SamplePath& path, std::ostream& out);
void save_csv(const SamplePath& path, const std::filesystem::path& file);

// Keeps rows 0, n/m, 2n/m, ..., n; the result has m steps over the same
// horizon. m must divide n.
SamplePath subsample(const SamplePath& path, long m);

}  // namespace brdim
