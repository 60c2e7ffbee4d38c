#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "brdim/deciders.hpp"
#include "brdim/errors.hpp"
#include "brdim/experiment.hpp"
#include "brdim/path.hpp"
#include "common.hpp"

namespace brdim::cli {

namespace {

struct DecideArgs {
    std::string in;
    std::string rule = "relative";
    double t = 0.0;
    CLI::Option* t_opt = nullptr;
    ScheduleArgs schedule;
    int rmax = 0;
    int r = 2;
    double epsilon = 0.0;
    double alpha = 0.05;
    std::string out;
};

void run(const DecideArgs& args) {
    const SamplePath path = load_csv(std::filesystem::path(args.in));
    const double t = args.t_opt->count() > 0 ? args.t : path.horizon;
    const bool is_ci = args.rule == "ci";

    PanelSpec spec;
    spec.times = {t};
    spec.rmax = args.rmax > 0 ? args.rmax : path.dim();
    if (is_ci) {
        spec.rmax = std::max(spec.rmax, args.r);
        spec.zpairs = {{1, 1}, {1, args.r}, {args.r, args.r}};
    }
    const EstimatorPanel panel = build_panel(path, spec);

    DecisionReport report;
    if (is_ci) {
        if (!(args.epsilon > 0.0)) throw ConfigError("rule ci requires --epsilon > 0");
        report = ci_test(panel, args.r, t, args.epsilon, args.alpha);
    } else {
        const double rho_n = args.schedule.make().at(panel.n);
        report = apply_rule(rule_from_name(args.rule), panel, t, rho_n);
    }

    std::cout << report_text(report);
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw ParseError("cannot open '" + args.out + "' for writing");
        report_csv_header(report, out);
        report_csv(report, out);
    }
}

}  // namespace

void register_decide(CLI::App& app) {
    auto args = std::make_shared<DecideArgs>();
    CLI::App* cmd = app.add_subcommand(
        "decide", "Apply a decision rule or the confidence-interval test to an observed path");
    add_config_flag(cmd);
    cmd->add_option("--in", args->in, "Observed path CSV")->required();
    cmd->add_option("--rule", args->rule,
                    "absolute, absolute-sup, relative, relative-prime, relative-sup or ci")
        ->capture_default_str();
    args->t_opt = cmd->add_option("--t", args->t, "Evaluation time (default: the horizon)");
    args->schedule.attach(cmd, "--rho");
    cmd->add_option("--rmax", args->rmax, "Highest minor order (default: path dimension)");
    cmd->add_option("--r", args->r, "Order tested by rule ci")->capture_default_str();
    cmd->add_option("--epsilon", args->epsilon, "Null level for rule ci: tests S_t >= epsilon");
    cmd->add_option("--alpha", args->alpha, "Level of rule ci")->capture_default_str();
    cmd->add_option("--out", args->out, "Optional report CSV");
    cmd->callback([args] { run(*args); });
}

}  // namespace brdim::cli
