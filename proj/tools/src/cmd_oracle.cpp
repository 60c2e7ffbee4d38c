#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "brdim/coeff.hpp"
#include "brdim/csv.hpp"
#include "brdim/errors.hpp"
#include "brdim/oracle.hpp"
#include "common.hpp"

namespace brdim::cli {

namespace {

struct OracleArgs {
    std::string in;
    std::vector<double> times;
    int rmax = 0;
    std::string out;
};

void run(const OracleArgs& args) {
    const CoeffPath cp = load_coeff_csv(std::filesystem::path(args.in));
    const std::vector<double> times =
        args.times.empty() ? std::vector<double>{cp.horizon()} : args.times;
    const int rmax = args.rmax > 0 ? args.rmax : cp.dim();

    std::ofstream out(args.out);
    if (!out) throw ParseError("cannot open '" + args.out + "' for writing");
    out << "t,r,lbar_true,l_true,rank_true\n";
    for (double t : times) {
        const int rank = rank_true(cp, t);
        for (int r = 1; r <= rmax; ++r) {
            out << csv::format(t) << ',' << r << ',' << csv::format(lbar_true(cp, r, t)) << ','
                << csv::format(l_true(cp, r, t)) << ',' << rank << '\n';
        }
    }
    std::cout << "wrote oracle functionals (" << times.size() << " times, rmax = " << rmax
              << ") to " << args.out << '\n';
}

}  // namespace

void register_oracle(CLI::App& app) {
    auto args = std::make_shared<OracleArgs>();
    CLI::App* cmd = app.add_subcommand(
        "oracle", "Integrate ground-truth functionals of a recorded covariance path");
    add_config_flag(cmd);
    cmd->add_option("--in", args->in, "Coefficient path CSV (time,c11,...)")->required();
    cmd->add_option("--t", args->times, "Evaluation times (default: the horizon)")->delimiter(',');
    cmd->add_option("--rmax", args->rmax, "Highest order (default: dimension)");
    cmd->add_option("--out", args->out, "Output CSV (t,r,lbar_true,l_true,rank_true)")->required();
    cmd->callback([args] { run(*args); });
}

}  // namespace brdim::cli
