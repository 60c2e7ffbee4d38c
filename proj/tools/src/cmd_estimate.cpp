#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "brdim/errors.hpp"
#include "brdim/estimators.hpp"
#include "brdim/path.hpp"
#include "common.hpp"

namespace brdim::cli {

namespace {

struct EstimateArgs {
    std::string in;
    std::vector<double> times;
    int rmax = 0;
    std::string zpairs;
    std::string out;
    std::string z_out;
};

void run(const EstimateArgs& args) {
    const SamplePath path = load_csv(std::filesystem::path(args.in));

    PanelSpec spec;
    spec.times = args.times.empty() ? std::vector<double>{path.horizon} : args.times;
    spec.rmax = args.rmax > 0 ? args.rmax : path.dim();
    if (!args.zpairs.empty()) spec.zpairs = parse_zpairs(args.zpairs);

    const EstimatorPanel panel = build_panel(path, spec);

    std::ofstream out(args.out);
    if (!out) throw ParseError("cannot open '" + args.out + "' for writing");
    save_panel_csv(panel, out);
    std::cout << "wrote panel (" << spec.times.size() << " times, rmax = " << spec.rmax
              << ") to " << args.out << '\n';

    if (!spec.zpairs.empty()) {
        if (args.z_out.empty()) {
            throw ConfigError("--zpairs given without --z-out");
        }
        std::ofstream zout(args.z_out);
        if (!zout) throw ParseError("cannot open '" + args.z_out + "' for writing");
        save_z_csv(panel, zout);
        std::cout << "wrote " << spec.zpairs.size() << " z columns to " << args.z_out << '\n';
    }
}

}  // namespace

void register_estimate(CLI::App& app) {
    auto args = std::make_shared<EstimateArgs>();
    CLI::App* cmd = app.add_subcommand(
        "estimate", "Compute the lbar/xi panel (and optional z statistics) of an observed path");
    add_config_flag(cmd);
    cmd->add_option("--in", args->in, "Observed path CSV")->required();
    cmd->add_option("--t", args->times, "Evaluation times (repeatable or comma separated)")
        ->delimiter(',');
    cmd->add_option("--rmax", args->rmax, "Highest minor order (default: path dimension)");
    cmd->add_option("--zpairs", args->zpairs, "Z(r,r') pairs, e.g. \"1,1;1,2;2,2\"");
    cmd->add_option("--out", args->out, "Panel CSV (t,r,lbar,xi)")->required();
    cmd->add_option("--z-out", args->z_out, "Z CSV (t,r,rprime,z)");
    cmd->callback([args] { run(*args); });
}

}  // namespace brdim::cli
