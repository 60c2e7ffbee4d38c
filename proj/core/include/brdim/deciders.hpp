#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "brdim/estimators.hpp"

namespace brdim {

// Threshold sequence rho_n: either a fixed value in (0, 1] or the power law
// c * n^{-theta} with 0 < theta < 1/2, so rho_n -> 0 while rho_n sqrt(n)
// diverges.
class ThresholdSchedule {
public:
    static ThresholdSchedule fixed(double rho);
    static ThresholdSchedule power_law(double c, double theta);

    double at(long n) const;
    bool is_fixed() const noexcept { return fixed_; }
    std::string describe() const;

private:
    ThresholdSchedule() = default;
    bool fixed_ = true;
    double rho_ = 0.01;
    double c_ = 1.0;
    double theta_ = 0.25;
};

struct Comparison {
    int r;             // clause index
    double statistic;  // left-hand side
    double threshold;  // right-hand side
    bool satisfied;
};

// Outcome of one decision rule on one panel; reproducible from the panel and
// the threshold alone.
struct DecisionReport {
    std::string rule;
    double t = 0.0;
    long n = 0;
    double rho_n = 0.0;
    int r_hat = 0;
    std::vector<Comparison> comparisons;
    bool no_guarantee = false;  // set by rules with no consistency result

    // Confidence-interval test fields (rule == "ci").
    bool is_ci = false;
    int r = 0;
    double epsilon = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double s_nt = 0.0;
    double z_nt = 0.0;
    double eta_nt = 0.0;
    bool reject = false;
};

// Smallest r in {0..rmax-1} with lbar(r+1) < rho_n * t, else rmax.
DecisionReport decide_absolute(const EstimatorPanel& panel, double t, double rho_n);

// Largest r in {1..rmax} with lbar(r) >= rho_n * t, else 0.
DecisionReport decide_absolute_sup(const EstimatorPanel& panel, double t, double rho_n);

// Smallest r with a large relative drop: xi(r) < rho_n for r >= 1; the r = 0
// clause falls back to lbar(1) < rho_n * t (the ratio form is undefined
// there). Scale-invariant for r >= 1.
DecisionReport decide_relative(const EstimatorPanel& panel, double t, double rho_n);

// Smallest r with lbar(r+1) < rho_n * t^{-r} * lbar(1)^{r+1}; never returns 0
// when lbar(1) > 0 and rho_n < 1.
DecisionReport decide_relative_prime(const EstimatorPanel& panel, double t, double rho_n);

// Largest r whose own level clears the relative threshold: xi(r-1) >= rho_n
// for r >= 2, lbar(1) >= rho_n * t for r = 1, else 0. No consistency result
// backs this rule; reports carry no_guarantee.
DecisionReport decide_relative_sup(const EstimatorPanel& panel, double t, double rho_n);

// Upper-alpha quantile of the standard normal: P(G > gamma) = alpha.
// Absolute accuracy better than 1e-9 on (0, 1).
double normal_quantile(double alpha);

struct SStat {
    double s;  // t^{r-1} lbar(r) / lbar(1)^r
    double z;  // plug-in variance of sqrt(n) (s_n - s)
};

// Requires z(r,r), z(1,r) and z(1,1) on the panel. Throws NumericError when
// lbar(1) = 0 (the statistic is undefined there).
SStat s_statistic(const EstimatorPanel& panel, int r, double t);

// Rejects "S_t >= epsilon" when s_n < epsilon - gamma * sqrt(|z_n|) / sqrt(n),
// gamma the upper-alpha normal quantile.
DecisionReport ci_test(const EstimatorPanel& panel, int r, double t, double epsilon, double alpha);

struct Interval {
    double lo;
    double hi;
};

// Two-sided interval lbar(r) -+ q_{alpha/2} sqrt(T |z(r,r)|) / sqrt(n), from
// the studentized central limit theorem for the lbar estimator.
Interval ci_lbar(const EstimatorPanel& panel, int r, double t, double alpha);

std::string report_text(const DecisionReport& report);
void report_csv_header(const DecisionReport& report, std::ostream& out);
void report_csv(const DecisionReport& report, std::ostream& out);

}  // namespace brdim
