#include "brdim/path.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "brdim/csv.hpp"
#include "brdim/errors.hpp"

namespace brdim {

void validate(const SamplePath& path) {
    if (path.dim() < 1) throw std::invalid_argument("path: dimension must be >= 1");
    if (path.steps() < 1) throw std::invalid_argument("path: need >= 2 observations");
    if (!(path.horizon > 0.0)) throw std::invalid_argument("path: horizon must be > 0");
    if (!path.values.allFinite()) throw std::invalid_argument("path: non-finite entries");
}

Eigen::MatrixXd increments(const SamplePath& path) {
    validate(path);
    const long n = path.steps();
    return path.values.bottomRows(n) - path.values.topRows(n);
}

SamplePath load_csv(std::istream& in) {
    const std::vector<std::string> lines = csv::read_lines(in);
    if (lines.empty()) throw ParseError("empty input");

    const auto header = csv::split(lines[0]);
    if (header.empty() || header[0] != "time") {
        throw ParseError("header must start with 'time'", 1);
    }
    const int d = static_cast<int>(header.size()) - 1;
    if (d < 1) throw ParseError("header has no coordinate columns", 1);
    for (int j = 1; j <= d; ++j) {
        const std::string expect = "x" + std::to_string(j);
        if (header[static_cast<std::size_t>(j)] != expect) {
            throw ParseError("expected column '" + expect + "', got '" +
                                 std::string(header[static_cast<std::size_t>(j)]) + "'",
                             1);
        }
    }

    const long rows = static_cast<long>(lines.size()) - 1;
    if (rows < 2) throw ParseError("need >= 2 observations");

    std::vector<double> times(static_cast<std::size_t>(rows));
    Eigen::MatrixXd values(rows, d);
    for (long i = 0; i < rows; ++i) {
        const long line_no = i + 2;
        const auto fields = csv::split(lines[static_cast<std::size_t>(i + 1)]);
        if (static_cast<int>(fields.size()) != d + 1) {
            throw ParseError("expected " + std::to_string(d + 1) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        times[static_cast<std::size_t>(i)] = csv::parse_double(fields[0], line_no);
        for (int j = 0; j < d; ++j) {
            values(i, j) = csv::parse_double(fields[static_cast<std::size_t>(j + 1)], line_no);
        }
    }

    const long n = rows - 1;
    const double T = times.back();
    if (!(T > 0.0)) throw ParseError("final time must be > 0", rows + 1);
    const double mean_dt = T / static_cast<double>(n);
    if (std::abs(times[0]) > 1e-6 * mean_dt) {
        throw ParseError("first time must be 0", 2);
    }
    for (long i = 1; i <= n; ++i) {
        const double dt = times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(i - 1)];
        if (!(dt > 0.0)) throw ParseError("times not strictly increasing", i + 2);
        if (std::abs(dt - mean_dt) > 1e-6 * mean_dt) {
            throw ParseError("unequal time spacing beyond tolerance", i + 2);
        }
    }

    SamplePath path{T, std::move(values)};
    validate(path);
    return path;
}

SamplePath load_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open '" + file.string() + "'");
    return load_csv(in);
}

void save_csv(const SamplePath& path, std::ostream& out) {
    validate(path);
    const int d = path.dim();
    const long n = path.steps();

    out << "time";
    for (int j = 1; j <= d; ++j) out << ",x" << j;
    out << '\n';
    for (long i = 0; i <= n; ++i) {
        out << csv::format(path.horizon * static_cast<double>(i) / static_cast<double>(n));
        for (int j = 0; j < d; ++j) out << ',' << csv::format(path.values(i, j));
        out << '\n';
    }
}

void save_csv(const SamplePath& path, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot open '" + file.string() + "' for writing");
    save_csv(path, out);
}

SamplePath subsample(const SamplePath& path, long m) {
    validate(path);
    const long n = path.steps();
    if (m < 1 || n % m != 0) {
        throw std::invalid_argument("subsample: m = " + std::to_string(m) +
                                    " does not divide n = " + std::to_string(n));
    }
    const long stride = n / m;
    SamplePath out;
    out.horizon = path.horizon;
    out.values.resize(m + 1, path.dim());
    for (long i = 0; i <= m; ++i) out.values.row(i) = path.values.row(i * stride);
    return out;
}

}  // namespace brdim
