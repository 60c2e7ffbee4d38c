#include "brdim/estimators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "brdim/csv.hpp"
#include "brdim/minors.hpp"

namespace brdim {

namespace {

// Slides between full re-accumulations of the rolling window sum.
constexpr long kReaccumulateEvery = 10000;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

// det(r; zeta) for a PSD window matrix, via the elementary symmetric
// polynomial of its spectrum. Shares the PSD noise clamp with minor_sums.
class WindowMinor {
public:
    explicit WindowMinor(int r) : r_(r) {}

    double operator()(const Eigen::MatrixXd& zeta) {
        solver_.compute(zeta, Eigen::EigenvaluesOnly);
        if (solver_.info() != Eigen::Success) throw EigenSolveError(zeta);
        Eigen::VectorXd vals = solver_.eigenvalues();
        const double tol = kRankTol * std::max(zeta.trace(), 0.0);
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (vals[i] < 0.0 && vals[i] >= -tol) vals[i] = 0.0;
        }
        return elementary_symmetric(vals)[static_cast<std::size_t>(r_ - 1)];
    }

private:
    int r_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

void check_order(int r, int d, const char* who) {
    if (r < 1 || r > d) {
        throw std::invalid_argument(std::string(who) + ": order r = " + std::to_string(r) +
                                    " outside 1..d = " + std::to_string(d));
    }
}

// det(r; zeta(r)_i) for every admissible 0-based window start, computed with
// a rolling zeta.
std::vector<double> window_det_curve(const Eigen::MatrixXd& inc, int r) {
    const long n = inc.rows();
    const int d = static_cast<int>(inc.cols());
    const long count = n - r + 1;
    if (count <= 0) return {};

    std::vector<double> out(static_cast<std::size_t>(count));
    WindowMinor minor(r);

    Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < r; ++j) zeta.noalias() += inc.row(j).transpose() * inc.row(j);

    long since_rebuild = 0;
    for (long i = 0;; ++i) {
        out[static_cast<std::size_t>(i)] = minor(zeta);
        if (i + 1 >= count) break;
        if (++since_rebuild >= kReaccumulateEvery) {
            zeta.setZero();
            for (long j = i + 1; j < i + 1 + r; ++j) {
                zeta.noalias() += inc.row(j).transpose() * inc.row(j);
            }
            since_rebuild = 0;
        } else {
            zeta.noalias() -= inc.row(i).transpose() * inc.row(i);
            zeta.noalias() += inc.row(i + r).transpose() * inc.row(i + r);
        }
    }
    return out;
}

double lbar_prefactor(long n, double T, int r) {
    return std::pow(static_cast<double>(n) / T, r - 1) / factorial(r);
}

double z_prefactor(long n, double T, int r, int rprime) {
    return std::pow(static_cast<double>(n) / T, r + rprime - 1) / (factorial(r) * factorial(rprime));
}

}  // namespace

long grid_index(double t, long n, double T) {
    const double x = static_cast<double>(n) * t / T;
    const double k = std::round(x);
    if (std::abs(x - k) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<long>(k);
    return static_cast<long>(std::floor(x));
}

Eigen::MatrixXd window_cov(const Eigen::MatrixXd& inc, Eigen::Index first, int r) {
    if (r < 1) throw std::invalid_argument("window_cov: window length must be >= 1");
    if (first < 0 || first + r > inc.rows()) {
        throw std::out_of_range("window_cov: window [" + std::to_string(first) + ", " +
                                std::to_string(first + r) + ") overruns " +
                                std::to_string(inc.rows()) + " increments");
    }
    const int d = static_cast<int>(inc.cols());
    Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < r; ++j) {
        zeta.noalias() += inc.row(first + j).transpose() * inc.row(first + j);
    }
    return zeta;
}

double lbar_n(const Eigen::MatrixXd& inc, int r, double t, double T) {
    const long n = inc.rows();
    check_order(r, static_cast<int>(inc.cols()), "lbar_n");
    if (!(t > 0.0)) return 0.0;
    const long m = std::min(grid_index(t, n, T), n);
    const long count = m - r + 1;
    if (count <= 0) return 0.0;

    WindowMinor minor(r);
    double sum = 0.0;
    for (long i = 0; i < count; ++i) sum += minor(window_cov(inc, i, r));
    return lbar_prefactor(n, T, r) * sum;
}

double z_n(const Eigen::MatrixXd& inc, int r, int rprime, double t, double T) {
    const long n = inc.rows();
    const int d = static_cast<int>(inc.cols());
    check_order(r, d, "z_n");
    check_order(rprime, d, "z_n");
    if (!(t > 0.0)) return 0.0;
    const long m = std::min(grid_index(t, n, T), n);
    const long count = m - d - rprime + 1;
    if (count <= 0) return 0.0;

    WindowMinor minor_r(r);
    WindowMinor minor_rp(rprime);
    double sum = 0.0;
    for (long i = 0; i < count; ++i) {
        const double a = minor_r(window_cov(inc, i, r));
        const double b = minor_rp(window_cov(inc, i, rprime));
        const double b_shift = minor_rp(window_cov(inc, i + d, rprime));
        sum += a * b - a * b_shift;
    }
    return z_prefactor(n, T, r, rprime) * sum;
}

double xi_from_lbar(double lbar_r, double lbar_r_plus_1, int r, double t) {
    if (r < 1) throw std::invalid_argument("xi: order must be >= 1");
    if (lbar_r_plus_1 == 0.0) return 0.0;
    if (lbar_r == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(t, 1.0 / r) * lbar_r_plus_1 /
           std::pow(lbar_r, (r + 1.0) / static_cast<double>(r));
}

double xi_n(const Eigen::MatrixXd& inc, int r, double t, double T) {
    return xi_from_lbar(lbar_n(inc, r, t, T), lbar_n(inc, r + 1, t, T), r, t);
}

double v_n(double lbar_estimate, double lbar_truth, long n) {
    return std::sqrt(static_cast<double>(n)) * (lbar_estimate - lbar_truth);
}

std::size_t EstimatorPanel::time_index(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
    }
    throw std::out_of_range("panel has no time " + std::to_string(t));
}

double EstimatorPanel::lbar_at(double t, int r) const {
    if (r < 1 || r > rmax) throw std::out_of_range("panel has no lbar(" + std::to_string(r) + ")");
    return lbar(static_cast<Eigen::Index>(time_index(t)), r - 1);
}

double EstimatorPanel::xi_at(double t, int r) const {
    if (r < 1 || r > rmax - 1) throw std::out_of_range("panel has no xi(" + std::to_string(r) + ")");
    return xi(static_cast<Eigen::Index>(time_index(t)), r - 1);
}

bool EstimatorPanel::has_z(int r, int rprime) const {
    for (const auto& [a, b] : zpairs) {
        if (a == r && b == rprime) return true;
    }
    return false;
}

double EstimatorPanel::z_at(double t, int r, int rprime) const {
    for (std::size_t p = 0; p < zpairs.size(); ++p) {
        if (zpairs[p].first == r && zpairs[p].second == rprime) {
            return zvals(static_cast<Eigen::Index>(time_index(t)), static_cast<Eigen::Index>(p));
        }
    }
    throw std::out_of_range("panel has no z(" + std::to_string(r) + "," + std::to_string(rprime) + ")");
}

EstimatorPanel build_panel(const SamplePath& path, const PanelSpec& spec) {
    validate(path);
    const int d = path.dim();
    const long n = path.steps();
    const double T = path.horizon;

    if (spec.rmax < 1 || spec.rmax > d) {
        throw std::invalid_argument("panel: rmax must lie in 1..d");
    }
    if (spec.times.empty()) throw std::invalid_argument("panel: no evaluation times");
    for (double t : spec.times) {
        if (!(t > 0.0) || t > T * (1.0 + 1e-9)) {
            throw std::invalid_argument("panel: time " + std::to_string(t) + " outside (0, T]");
        }
    }
    for (const auto& [r, rp] : spec.zpairs) {
        if (r < 1 || r > spec.rmax || rp < 1 || rp > spec.rmax) {
            throw std::invalid_argument("panel: z pair outside 1..rmax");
        }
    }

    EstimatorPanel panel;
    panel.d = d;
    panel.n = n;
    panel.T = T;
    panel.times = spec.times;
    panel.rmax = spec.rmax;
    panel.zpairs = spec.zpairs;

    const Eigen::MatrixXd inc = increments(path);
    const auto nt = static_cast<Eigen::Index>(spec.times.size());

    // Distinct orders appearing anywhere in the request.
    std::vector<char> need(static_cast<std::size_t>(d + 1), 0);
    for (int r = 1; r <= spec.rmax; ++r) need[static_cast<std::size_t>(r)] = 1;

    std::vector<std::vector<double>> curves(static_cast<std::size_t>(d + 1));
    for (int r = 1; r <= d; ++r) {
        if (need[static_cast<std::size_t>(r)]) {
            curves[static_cast<std::size_t>(r)] = window_det_curve(inc, r);
        }
    }

    // lbar: prefix sums of each curve picked up at the requested times.
    panel.lbar.setZero(nt, spec.rmax);
    for (int r = 1; r <= spec.rmax; ++r) {
        const auto& curve = curves[static_cast<std::size_t>(r)];
        std::vector<double> prefix(curve.size() + 1, 0.0);
        for (std::size_t i = 0; i < curve.size(); ++i) prefix[i + 1] = prefix[i] + curve[i];
        const double pref = lbar_prefactor(n, T, r);
        for (Eigen::Index k = 0; k < nt; ++k) {
            const long m = std::min(grid_index(spec.times[static_cast<std::size_t>(k)], n, T), n);
            const long count = std::max<long>(0, std::min<long>(m - r + 1, static_cast<long>(curve.size())));
            panel.lbar(k, r - 1) = pref * prefix[static_cast<std::size_t>(count)];
        }
    }

    panel.xi.setZero(nt, std::max(spec.rmax - 1, 0));
    for (int r = 1; r < spec.rmax; ++r) {
        for (Eigen::Index k = 0; k < nt; ++k) {
            panel.xi(k, r - 1) = xi_from_lbar(panel.lbar(k, r - 1), panel.lbar(k, r),
                                              r, spec.times[static_cast<std::size_t>(k)]);
        }
    }

    panel.zvals.setZero(nt, static_cast<Eigen::Index>(spec.zpairs.size()));
    for (std::size_t p = 0; p < spec.zpairs.size(); ++p) {
        const auto [r, rp] = spec.zpairs[p];
        const auto& cr = curves[static_cast<std::size_t>(r)];
        const auto& crp = curves[static_cast<std::size_t>(rp)];
        const long max_terms = n - d - rp + 1;
        std::vector<double> prefix(static_cast<std::size_t>(std::max<long>(max_terms, 0)) + 1, 0.0);
        for (long i = 0; i < max_terms; ++i) {
            const double a = cr[static_cast<std::size_t>(i)];
            const double term = a * crp[static_cast<std::size_t>(i)] -
                                a * crp[static_cast<std::size_t>(i + d)];
            prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + term;
        }
        const double pref = z_prefactor(n, T, r, rp);
        for (Eigen::Index k = 0; k < nt; ++k) {
            const long m = std::min(grid_index(spec.times[static_cast<std::size_t>(k)], n, T), n);
            const long count = std::max<long>(0, std::min<long>(m - d - rp + 1, max_terms));
            panel.zvals(k, static_cast<Eigen::Index>(p)) =
                pref * prefix[static_cast<std::size_t>(count)];
        }
    }

    return panel;
}

void save_panel_csv(const EstimatorPanel& panel, std::ostream& lbar_out) {
    lbar_out << "t,r,lbar,xi\n";
    for (std::size_t k = 0; k < panel.times.size(); ++k) {
        for (int r = 1; r <= panel.rmax; ++r) {
            lbar_out << csv::format(panel.times[k]) << ',' << r << ','
                     << csv::format(panel.lbar(static_cast<Eigen::Index>(k), r - 1)) << ',';
            if (r < panel.rmax) {
                lbar_out << csv::format(panel.xi(static_cast<Eigen::Index>(k), r - 1));
            }
            lbar_out << '\n';
        }
    }
}

void save_z_csv(const EstimatorPanel& panel, std::ostream& z_out) {
    z_out << "t,r,rprime,z\n";
    for (std::size_t k = 0; k < panel.times.size(); ++k) {
        for (std::size_t p = 0; p < panel.zpairs.size(); ++p) {
            z_out << csv::format(panel.times[k]) << ',' << panel.zpairs[p].first << ','
                  << panel.zpairs[p].second << ','
                  << csv::format(panel.zvals(static_cast<Eigen::Index>(k),
                                             static_cast<Eigen::Index>(p)))
                  << '\n';
        }
    }
}

}  // namespace brdim
