#pragma once

#include <CLI11.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "brdim/deciders.hpp"

namespace brdim::cli {

// Model flags shared by `simulate` and `experiment`: a generic repeated
// --param key=value plus convenience spellings for the common knobs.
struct ModelArgs {
    std::string model;
    std::vector<std::string> raw_params;
    double rho = 0.0, eta = 0.0, theta = 0.0;
    CLI::Option* rho_opt = nullptr;
    CLI::Option* eta_opt = nullptr;
    CLI::Option* theta_opt = nullptr;

    void attach(CLI::App* cmd);
    std::map<std::string, double> params() const;
};

// A fixed threshold, or --rho-c with --rho-theta for the power law
// c * n^{-theta}. The fixed flag is --rho on `decide`; `experiment` uses
// --rho-n because --rho is taken by the sv2d correlation there.
struct ScheduleArgs {
    double rho = 0.01;
    double c = 1.0;
    double theta = 0.25;
    CLI::Option* c_opt = nullptr;

    void attach(CLI::App* cmd, const std::string& fixed_flag);
    ThresholdSchedule make() const;
};

std::vector<std::pair<int, int>> parse_zpairs(const std::string& text);

// Documents --config in the subcommand help; the actual expansion happens
// before CLI11 parsing (see run_main), with command-line flags winning.
void add_config_flag(CLI::App* cmd);

// Integer times 2..T as in the experiment figures; falls back to {T}.
std::vector<double> default_times(double T);

int run_main(int argc, char** argv);

void register_simulate(CLI::App& app);
void register_estimate(CLI::App& app);
void register_decide(CLI::App& app);
void register_oracle(CLI::App& app);
void register_experiment(CLI::App& app);

}  // namespace brdim::cli
