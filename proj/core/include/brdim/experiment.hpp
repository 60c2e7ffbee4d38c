#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brdim/deciders.hpp"

namespace brdim {

enum class Rule {
    kAbsolute,
    kAbsoluteSup,
    kRelative,
    kRelativePrime,
    kRelativeSup,
};

Rule rule_from_name(const std::string& name);
std::string rule_name(Rule rule);
DecisionReport apply_rule(Rule rule, const EstimatorPanel& panel, double t, double rho_n);

// A replicated simulation study: one model, one fine grid, one or more
// observation counts, decisions and statistics at the listed times.
// Replication k draws its stream from (seed, k), so results do not depend
// on the worker count.
struct ExperimentPlan {
    std::string model = "sv2d";
    std::map<std::string, double> params;
    double T = 10.0;
    double h = 1e-3;
    std::vector<long> n_list = {1000};
    std::vector<double> times = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    int rmax = 2;
    long replications = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    Rule rule = Rule::kRelative;
    ThresholdSchedule schedule = ThresholdSchedule::fixed(0.01);
};

struct QuantileRow {
    std::string statistic;
    double t;
    double min, q01, q10, q25, q50, q75, q90, q99, max;
};
using QuantileTable = std::vector<QuantileRow>;

// Type-7 (linear interpolation) empirical quantile of the sample; p in [0, 1].
double quantile_type7(std::vector<double> sample, double p);

struct QuantileStudy {
    // samples[statistic][time index][replication]; statistics are named
    // xi<r>_n<n> for estimates and xi<r>_true for the oracle values.
    std::map<std::string, std::vector<std::vector<double>>> samples;
    std::vector<double> times;
    QuantileTable table;
    long diverged = 0;
};

// Simulate, subsample, build panels, and record the scale-invariant ratios
// next to their oracle values from the latent coefficient path. Diverged
// replications are dropped and counted; more than 1% of them fails the run.
QuantileStudy run_replications(const ExperimentPlan& plan);

struct PowerRow {
    std::string rule;
    long n;
    double t;
    double beta_hat;  // empirical frequency of r_hat != true_r
    double se;        // binomial standard error
    long kept;
    long discarded;
};

// Misclassification frequency of the plan's rule against a known dimension.
// When condition_epsilon is set, replications whose oracle lbar(r) falls
// below epsilon * t for some r <= true_r are discarded (and counted).
std::vector<PowerRow> power_estimate(const ExperimentPlan& plan, int true_r,
                                     std::optional<double> condition_epsilon = std::nullopt);

struct CiRow {
    long n;
    double t;
    double reject_freq;
    double se;
    double mean_oracle_s;
};

// Rejection frequency of the studentized test of "S_t >= epsilon" at level
// alpha, with the oracle S_t averaged for context.
std::vector<CiRow> ci_level_power(const ExperimentPlan& plan, int r, double epsilon,
                                  double alpha);

struct RateRow {
    int r;
    long n;
    double rmse;  // root mean square of lbar(r)^n_T - lbar(r)_T
};

// Error decay of the lbar estimators across the plan's n list, at t = T,
// for r = 1..plan.rmax.
std::vector<RateRow> rate_check(const ExperimentPlan& plan);

// Plot-ready emitters.
void save_quantiles_csv(const QuantileTable& table, std::ostream& out);
void save_power_csv(const std::vector<PowerRow>& rows, std::ostream& out);
void save_ci_csv(const std::vector<CiRow>& rows, std::ostream& out);
void save_rate_csv(const std::vector<RateRow>& rows, std::ostream& out);

}  // namespace brdim
