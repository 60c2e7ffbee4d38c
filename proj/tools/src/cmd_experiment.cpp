#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "brdim/errors.hpp"
#include "brdim/experiment.hpp"
#include "common.hpp"

namespace brdim::cli {

namespace {

struct ExperimentArgs {
    std::string kind = "quantiles";
    ModelArgs model;
    double T = 10.0;
    double h = 1e-3;
    std::vector<long> n_list = {1000};
    std::vector<double> times;
    int rmax = 2;
    long reps = 100;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string rule = "relative";
    ScheduleArgs schedule;
    int true_r = 2;
    int r = 2;
    double epsilon = 0.0;
    CLI::Option* epsilon_opt = nullptr;
    double alpha = 0.05;
    std::string out;
};

void run(const ExperimentArgs& args) {
    ExperimentPlan plan;
    plan.model = args.model.model;
    plan.params = args.model.params();
    plan.T = args.T;
    plan.h = args.h;
    plan.n_list = args.n_list;
    plan.times = args.times.empty() ? default_times(args.T) : args.times;
    plan.rmax = args.rmax;
    plan.replications = args.reps;
    plan.seed = args.seed;
    plan.workers = args.workers;
    plan.rule = rule_from_name(args.rule);
    plan.schedule = args.schedule.make();

    std::ofstream out(args.out);
    if (!out) throw ParseError("cannot open '" + args.out + "' for writing");

    if (args.kind == "quantiles") {
        const QuantileStudy study = run_replications(plan);
        save_quantiles_csv(study.table, out);
        std::cout << "quantile table: " << study.table.size() << " rows, " << study.diverged
                  << " diverged replications, written to " << args.out << '\n';
    } else if (args.kind == "power") {
        std::optional<double> eps;
        if (args.epsilon_opt->count() > 0) eps = args.epsilon;
        const auto rows = power_estimate(plan, args.true_r, eps);
        save_power_csv(rows, out);
        std::cout << "power table: " << rows.size() << " rows, written to " << args.out << '\n';
    } else if (args.kind == "ci") {
        if (!(args.epsilon > 0.0)) throw ConfigError("kind ci requires --epsilon > 0");
        const auto rows = ci_level_power(plan, args.r, args.epsilon, args.alpha);
        save_ci_csv(rows, out);
        std::cout << "ci table: " << rows.size() << " rows, written to " << args.out << '\n';
    } else if (args.kind == "rate") {
        const auto rows = rate_check(plan);
        save_rate_csv(rows, out);
        std::cout << "rate table: " << rows.size() << " rows, written to " << args.out << '\n';
    } else {
        throw ConfigError("unknown experiment kind '" + args.kind +
                          "' (expected quantiles, power, ci or rate)");
    }
}

}  // namespace

void register_experiment(CLI::App& app) {
    auto args = std::make_shared<ExperimentArgs>();
    CLI::App* cmd = app.add_subcommand(
        "experiment", "Monte-Carlo studies: quantile tables, decision power, CI level, rates");
    add_config_flag(cmd);
    cmd->add_option("--kind", args->kind, "quantiles, power, ci or rate")->capture_default_str();
    args->model.attach(cmd);
    cmd->add_option("--T", args->T, "Horizon")->capture_default_str();
    cmd->add_option("--h", args->h, "Fine Euler stepsize")->capture_default_str();
    cmd->add_option("--n", args->n_list, "Observation counts (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--times", args->times, "Evaluation times (default: integers 2..T)")
        ->delimiter(',');
    cmd->add_option("--rmax", args->rmax, "Highest minor order")->capture_default_str();
    cmd->add_option("--reps", args->reps, "Replication count")->capture_default_str();
    cmd->add_option("--seed", args->seed, "Master seed; replication k uses stream (seed, k)")
        ->capture_default_str();
    cmd->add_option("--workers", args->workers, "Worker threads; the output is schedule-free")
        ->capture_default_str();
    cmd->add_option("--rule", args->rule, "Decision rule for kind=power")->capture_default_str();
    args->schedule.attach(cmd, "--rho-n");
    cmd->add_option("--true-r", args->true_r, "Known dimension for kind=power")
        ->capture_default_str();
    cmd->add_option("--r", args->r, "Order tested by kind=ci")->capture_default_str();
    args->epsilon_opt = cmd->add_option(
        "--epsilon", args->epsilon,
        "kind=ci: null level; kind=power: oracle conditioning lbar(r) >= epsilon*t");
    cmd->add_option("--alpha", args->alpha, "Level for kind=ci")->capture_default_str();
    cmd->add_option("--out", args->out, "Output CSV")->required();
    cmd->callback([args] { run(*args); });
}

}  // namespace brdim::cli
