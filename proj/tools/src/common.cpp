#include "common.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "brdim/errors.hpp"

namespace brdim::cli {

namespace {

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Expands `--config FILE` into --key value pairs appended after the real
// flags. Keys already present on the command line are skipped, so explicit
// flags win.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string file;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (file.empty()) return args;

    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file '" + file + "'");
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trimmed(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trimmed(stripped.substr(0, eq));
        const std::string value = trimmed(stripped.substr(eq + 1));
        const std::string flag = "--" + key;
        bool on_command_line = false;
        for (const std::string& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                on_command_line = true;
                break;
            }
        }
        if (!on_command_line) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

}  // namespace

void ModelArgs::attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "Model name: sv2d, energy3d, osc2d, homog, drift")
        ->required();
    cmd->add_option("--param", raw_params, "Model parameter as key=value (repeatable)");
    rho_opt = cmd->add_option("--rho", rho, "sv2d correlation (shorthand for --param rho=...)");
    eta_opt = cmd->add_option("--eta", eta, "osc2d drift amplitude");
    theta_opt = cmd->add_option("--theta", theta, "osc2d drift frequency");
}

std::map<std::string, double> ModelArgs::params() const {
    std::map<std::string, double> out;
    for (const std::string& kv : raw_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--param expects key=value, got '" + kv + "'");
        }
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--param '" + kv + "' has a non-numeric value");
        }
    }
    if (rho_opt && rho_opt->count() > 0) out["rho"] = rho;
    if (eta_opt && eta_opt->count() > 0) out["eta"] = eta;
    if (theta_opt && theta_opt->count() > 0) out["theta"] = theta;
    return out;
}

void ScheduleArgs::attach(CLI::App* cmd, const std::string& fixed_flag) {
    cmd->add_option(fixed_flag, rho, "Fixed threshold rho_n")->capture_default_str();
    c_opt = cmd->add_option("--rho-c", c, "Power-law threshold constant: rho_n = c * n^-theta");
    cmd->add_option("--rho-theta", theta, "Power-law threshold exponent, in (0, 1/2)")
        ->capture_default_str();
}

ThresholdSchedule ScheduleArgs::make() const {
    if (c_opt && c_opt->count() > 0) return ThresholdSchedule::power_law(c, theta);
    return ThresholdSchedule::fixed(rho);
}

void add_config_flag(CLI::App* cmd) {
    static std::string sink;
    cmd->add_option("--config", sink, "Flat key=value file standing in for flags; flags win");
}

std::vector<std::pair<int, int>> parse_zpairs(const std::string& text) {
    std::vector<std::pair<int, int>> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        const auto comma = item.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("--zpairs expects r,r' items separated by ';', got '" + item + "'");
        }
        try {
            out.emplace_back(std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError("--zpairs item '" + item + "' is not a pair of integers");
        }
        start = end + 1;
    }
    return out;
}

std::vector<double> default_times(double T) {
    std::vector<double> times;
    for (int t = 2; t <= static_cast<int>(std::floor(T + 1e-9)); ++t) {
        times.push_back(static_cast<double>(t));
    }
    if (times.empty()) times.push_back(T);
    return times;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Brownian dimension estimation for discretely observed Ito processes"};
    app.require_subcommand(1);
    // -h stays free for the stepsize flag; help is --help only.
    app.set_help_flag("--help", "Print help");

    register_simulate(app);
    register_estimate(app);
    register_decide(app);
    register_oracle(app);
    register_experiment(app);
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
        sub->set_help_flag("--help", "Print help");
    }

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config(std::move(args));
        std::reverse(args.begin(), args.end());  // CLI11's vector parse pops from the back
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace brdim::cli
