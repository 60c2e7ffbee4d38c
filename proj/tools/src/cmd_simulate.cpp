#include <cstdint>
#include <iostream>
#include <memory>
#include <string>

#include "brdim/coeff.hpp"
#include "brdim/path.hpp"
#include "brdim/simulator.hpp"
#include "common.hpp"

namespace brdim::cli {

namespace {

struct SimulateArgs {
    ModelArgs model;
    double T = 10.0;
    double h = 1e-3;
    long n = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string coeff_out;
};

void run(const SimulateArgs& args) {
    const ModelSpec model = make_model(args.model.model, args.model.params());
    const SimResult sim = simulate_euler(model, args.T, args.h, args.seed);
    const SamplePath observed = args.n > 0 ? subsample(sim.fine, args.n) : sim.fine;
    save_csv(observed, std::filesystem::path(args.out));
    std::cout << "wrote " << observed.steps() + 1 << " observations (d = " << observed.dim()
              << ", T = " << observed.horizon << ") to " << args.out << '\n';
    if (!args.coeff_out.empty()) {
        save_coeff_csv(sim.coeff, std::filesystem::path(args.coeff_out));
        std::cout << "wrote coefficient path (" << sim.coeff.values.size() << " grid points) to "
                  << args.coeff_out << '\n';
    }
}

}  // namespace

void register_simulate(CLI::App& app) {
    auto args = std::make_shared<SimulateArgs>();
    CLI::App* cmd = app.add_subcommand(
        "simulate", "Simulate a catalog model with the Euler scheme and write the observed path");
    add_config_flag(cmd);
    args->model.attach(cmd);
    cmd->add_option("--T", args->T, "Horizon")->capture_default_str();
    cmd->add_option("--h", args->h, "Euler stepsize (T/h must be an integer)")
        ->capture_default_str();
    cmd->add_option("--n", args->n,
                    "Observation count; the fine grid is thinned to n rows (0 keeps the fine grid)")
        ->capture_default_str();
    cmd->add_option("--seed", args->seed, "RNG seed")->capture_default_str();
    cmd->add_option("--out", args->out, "Output path CSV")->required();
    cmd->add_option("--coeff-out", args->coeff_out,
                    "Also write the latent covariance path c_s as CSV");
    cmd->callback([args] { run(*args); });
}

}  // namespace brdim::cli
