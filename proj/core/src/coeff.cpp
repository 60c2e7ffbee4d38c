#include "brdim/coeff.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "brdim/csv.hpp"
#include "brdim/errors.hpp"

namespace brdim {

void save_coeff_csv(const CoeffPath& cp, std::ostream& out) {
    const int d = cp.dim();
    if (d < 1 || cp.values.size() < 2 || !(cp.step > 0.0)) {
        throw std::invalid_argument("coeff path: need step > 0 and >= 2 grid points");
    }
    out << "time";
    for (int i = 1; i <= d; ++i) {
        for (int j = i; j <= d; ++j) out << ",c" << i << j;
    }
    out << '\n';
    for (std::size_t k = 0; k < cp.values.size(); ++k) {
        out << csv::format(cp.step * static_cast<double>(k));
        const Eigen::MatrixXd& c = cp.values[k];
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) out << ',' << csv::format(c(i, j));
        }
        out << '\n';
    }
}

void save_coeff_csv(const CoeffPath& cp, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot open '" + file.string() + "' for writing");
    save_coeff_csv(cp, out);
}

CoeffPath load_coeff_csv(std::istream& in) {
    const std::vector<std::string> lines = csv::read_lines(in);
    if (lines.empty()) throw ParseError("empty input");

    const auto header = csv::split(lines[0]);
    if (header.empty() || header[0] != "time") {
        throw ParseError("header must start with 'time'", 1);
    }
    const long ncols = static_cast<long>(header.size()) - 1;
    // d(d+1)/2 upper-triangle columns.
    int d = 0;
    while (static_cast<long>(d + 1) * (d + 2) / 2 <= ncols) ++d;
    if (d < 1 || static_cast<long>(d) * (d + 1) / 2 != ncols) {
        throw ParseError("column count does not match an upper triangle", 1);
    }

    const long rows = static_cast<long>(lines.size()) - 1;
    if (rows < 2) throw ParseError("need >= 2 grid points");

    CoeffPath cp;
    cp.values.reserve(static_cast<std::size_t>(rows));
    std::vector<double> times(static_cast<std::size_t>(rows));
    for (long k = 0; k < rows; ++k) {
        const long line_no = k + 2;
        const auto fields = csv::split(lines[static_cast<std::size_t>(k + 1)]);
        if (static_cast<long>(fields.size()) != ncols + 1) {
            throw ParseError("expected " + std::to_string(ncols + 1) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        times[static_cast<std::size_t>(k)] = csv::parse_double(fields[0], line_no);
        Eigen::MatrixXd c(d, d);
        std::size_t f = 1;
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                c(i, j) = csv::parse_double(fields[f++], line_no);
                c(j, i) = c(i, j);
            }
        }
        cp.values.push_back(std::move(c));
    }

    const double T = times.back();
    if (!(T > 0.0)) throw ParseError("final time must be > 0", rows + 1);
    const double mean_dt = T / static_cast<double>(rows - 1);
    if (std::abs(times[0]) > 1e-6 * mean_dt) throw ParseError("first time must be 0", 2);
    for (long k = 1; k < rows; ++k) {
        const double dt = times[static_cast<std::size_t>(k)] - times[static_cast<std::size_t>(k - 1)];
        if (!(dt > 0.0)) throw ParseError("times not strictly increasing", k + 2);
        if (std::abs(dt - mean_dt) > 1e-6 * mean_dt) {
            throw ParseError("unequal time spacing beyond tolerance", k + 2);
        }
    }
    cp.step = mean_dt;
    return cp;
}

CoeffPath load_coeff_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open '" + file.string() + "'");
    return load_coeff_csv(in);
}

}  // namespace brdim
