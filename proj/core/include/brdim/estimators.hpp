#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <utility>
#include <vector>

#include "brdim/path.hpp"

namespace brdim {

// Integer part [n*t/T] with a snap window for times that sit on the grid up
// to rounding of t itself.
long grid_index(double t, long n, double T);

// Sum of r consecutive increment outer products starting at 0-based row
// `first`: a PSD matrix of rank <= r. Throws std::out_of_range when the
// window overruns the path end.
Eigen::MatrixXd window_cov(const Eigen::MatrixXd& inc, Eigen::Index first, int r);

// Sliding-window minor-sum functional
//   lbar_n = (n/T)^{r-1} / r! * sum_{i=1}^{[nt/T]-r+1} det(r; zeta(r)_i)
// evaluated directly (every window built from scratch). Returns 0 when the
// sum is empty. The panel builder below computes the same quantity with a
// rolling window; the two must agree to 1e-10 relative.
double lbar_n(const Eigen::MatrixXd& inc, int r, double t, double T);

// Companion covariance statistic
//   z_n = (n/T)^{r+r'-1} / (r! r'!) *
//         sum_{i=1}^{[nt/T]-d-r'+1} det(r; zeta(r)_i) *
//                                   (det(r'; zeta(r')_i) - det(r'; zeta(r')_{d+i}))
// Returns 0 when [nt/T] < d + r'. May be negative in finite samples; the
// formula is asymmetric in (r, r') and is evaluated literally.
double z_n(const Eigen::MatrixXd& inc, int r, int rprime, double t, double T);

// Scale-invariant ratio t^{1/r} * lbar(r+1) / lbar(r)^{(r+1)/r} with the
// 0/0 = 0 convention. A zero denominator with a positive numerator yields
// +infinity.
double xi_from_lbar(double lbar_r, double lbar_r_plus_1, int r, double t);
double xi_n(const Eigen::MatrixXd& inc, int r, double t, double T);

// Rate diagnostic sqrt(n) * (estimate - truth); the truth comes from a
// recorded coefficient path, so this only makes sense in simulations.
double v_n(double lbar_estimate, double lbar_truth, long n);

struct PanelSpec {
    std::vector<double> times;                  // evaluation times in (0, T]
    int rmax = 0;                               // lbar/xi computed for r = 1..rmax
    std::vector<std::pair<int, int>> zpairs;    // requested Z(r, r') pairs
};

// Time-indexed estimator values for one path. lbar is non-negative (up to
// rounding) and non-decreasing in t; z entries may be negative and z(r,r')
// is not symmetrized.
struct EstimatorPanel {
    int d = 0;
    long n = 0;
    double T = 0.0;
    std::vector<double> times;
    int rmax = 0;
    std::vector<std::pair<int, int>> zpairs;
    Eigen::MatrixXd lbar;   // times.size() x rmax
    Eigen::MatrixXd xi;     // times.size() x max(rmax-1, 0)
    Eigen::MatrixXd zvals;  // times.size() x zpairs.size()

    std::size_t time_index(double t) const;     // throws std::out_of_range
    double lbar_at(double t, int r) const;
    double xi_at(double t, int r) const;
    bool has_z(int r, int rprime) const;
    double z_at(double t, int r, int rprime) const;
};

// One pass per r over the increments with a rolling window (the window sum
// is re-accumulated from scratch every 10^4 slides to cap drift), so a full
// panel costs O(n d^3) per requested order.
EstimatorPanel build_panel(const SamplePath& path, const PanelSpec& spec);

// Rows `t,r,lbar,xi` (xi blank at r = rmax) and, when z pairs were
// requested, rows `t,r,rprime,z` to the second stream.
void save_panel_csv(const EstimatorPanel& panel, std::ostream& lbar_out);
void save_z_csv(const EstimatorPanel& panel, std::ostream& z_out);

}  // namespace brdim
