#include "brdim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "brdim/csv.hpp"
#include "brdim/errors.hpp"
#include "brdim/oracle.hpp"
#include "brdim/rng.hpp"
#include "brdim/simulator.hpp"

namespace brdim {

Rule rule_from_name(const std::string& name) {
    if (name == "absolute") return Rule::kAbsolute;
    if (name == "absolute-sup") return Rule::kAbsoluteSup;
    if (name == "relative") return Rule::kRelative;
    if (name == "relative-prime") return Rule::kRelativePrime;
    if (name == "relative-sup") return Rule::kRelativeSup;
    throw ConfigError("unknown rule '" + name + "'");
}

std::string rule_name(Rule rule) {
    switch (rule) {
        case Rule::kAbsolute: return "absolute";
        case Rule::kAbsoluteSup: return "absolute-sup";
        case Rule::kRelative: return "relative";
        case Rule::kRelativePrime: return "relative-prime";
        case Rule::kRelativeSup: return "relative-sup";
    }
    throw std::logic_error("unreachable");
}

DecisionReport apply_rule(Rule rule, const EstimatorPanel& panel, double t, double rho_n) {
    switch (rule) {
        case Rule::kAbsolute: return decide_absolute(panel, t, rho_n);
        case Rule::kAbsoluteSup: return decide_absolute_sup(panel, t, rho_n);
        case Rule::kRelative: return decide_relative(panel, t, rho_n);
        case Rule::kRelativePrime: return decide_relative_prime(panel, t, rho_n);
        case Rule::kRelativeSup: return decide_relative_sup(panel, t, rho_n);
    }
    throw std::logic_error("unreachable");
}

double quantile_type7(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("quantile of an empty sample");
    p = std::clamp(p, 0.0, 1.0);
    std::sort(sample.begin(), sample.end());
    const double pos = p * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sample.size()) return sample.back();
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sample[lo] + w * sample[lo + 1];
}

namespace {

void check_plan(const ExperimentPlan& plan) {
    if (plan.replications < 1) throw std::invalid_argument("plan: need >= 1 replication");
    if (plan.n_list.empty()) throw std::invalid_argument("plan: empty n list");
    if (plan.times.empty()) throw std::invalid_argument("plan: empty time list");
    for (double t : plan.times) {
        if (!(t > 0.0) || t > plan.T * (1.0 + 1e-9)) {
            throw std::invalid_argument("plan: time outside (0, T]");
        }
    }
}

// Runs f(k) for k in [0, count) on `workers` threads. Work is pulled from an
// atomic counter; every k writes only its own slot, so the schedule cannot
// leak into the results.
template <typename F>
void parallel_for(long count, int workers, F&& f) {
    workers = std::max(1, workers);
    if (workers == 1 || count <= 1) {
        for (long k = 0; k < count; ++k) f(k);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (true) {
            const long k = next.fetch_add(1);
            if (k >= count) return;
            try {
                f(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct RepOutcome {
    bool diverged = false;
};

// Per-replication driver shared by all studies: simulate once, hand the
// recorded coefficient path and the subsampled panels to `consume`.
template <typename Consume>
long for_each_replication(const ExperimentPlan& plan, const PanelSpec& base_spec,
                          Consume&& consume) {
    check_plan(plan);
    const ModelSpec model = make_model(plan.model, plan.params);
    const long fine_steps = std::lround(plan.T / plan.h);
    for (long n : plan.n_list) {
        if (n < 1 || fine_steps % n != 0) {
            throw std::invalid_argument("plan: n = " + std::to_string(n) +
                                        " does not divide the fine grid T/h = " +
                                        std::to_string(fine_steps));
        }
    }

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(plan.replications));
    parallel_for(plan.replications, plan.workers, [&](long rep) {
        SimResult sim;
        try {
            sim = simulate_euler(model, plan.T, plan.h,
                                 derive_stream(plan.seed, static_cast<std::uint64_t>(rep)));
        } catch (const DivergenceError&) {
            outcomes[static_cast<std::size_t>(rep)].diverged = true;
            return;
        }
        TrueFunctionals truth(sim.coeff, base_spec.rmax);
        std::vector<EstimatorPanel> panels;
        panels.reserve(plan.n_list.size());
        for (long n : plan.n_list) {
            panels.push_back(build_panel(subsample(sim.fine, n), base_spec));
        }
        consume(rep, truth, panels);
    });

    long diverged = 0;
    for (const auto& o : outcomes) diverged += o.diverged ? 1 : 0;
    if (static_cast<double>(diverged) > 0.01 * static_cast<double>(plan.replications)) {
        throw NumericError(std::to_string(diverged) + " of " + std::to_string(plan.replications) +
                           " replications diverged");
    }
    return diverged;
}

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

void append_quantiles(QuantileTable& table, const std::string& statistic, double t,
                      std::vector<double> sample) {
    std::erase_if(sample, [](double v) { return std::isnan(v); });
    if (sample.empty()) return;
    std::sort(sample.begin(), sample.end());
    QuantileRow row;
    row.statistic = statistic;
    row.t = t;
    row.min = sample.front();
    row.q01 = quantile_type7(sample, 0.01);
    row.q10 = quantile_type7(sample, 0.10);
    row.q25 = quantile_type7(sample, 0.25);
    row.q50 = quantile_type7(sample, 0.50);
    row.q75 = quantile_type7(sample, 0.75);
    row.q90 = quantile_type7(sample, 0.90);
    row.q99 = quantile_type7(sample, 0.99);
    row.max = sample.back();
    table.push_back(row);
}

}  // namespace

QuantileStudy run_replications(const ExperimentPlan& plan) {
    PanelSpec spec{plan.times, plan.rmax, {}};

    QuantileStudy study;
    study.times = plan.times;
    const std::size_t nt = plan.times.size();
    const auto reps = static_cast<std::size_t>(plan.replications);

    std::vector<std::string> stat_names;
    for (int r = 1; r < plan.rmax; ++r) {
        for (long n : plan.n_list) {
            stat_names.push_back("xi" + std::to_string(r) + "_n" + std::to_string(n));
        }
        stat_names.push_back("xi" + std::to_string(r) + "_true");
    }
    for (const auto& name : stat_names) {
        study.samples[name].assign(nt, std::vector<double>(reps, kMissing));
    }

    study.diverged = for_each_replication(
        plan, spec,
        [&](long rep, const TrueFunctionals& truth, const std::vector<EstimatorPanel>& panels) {
            for (std::size_t k = 0; k < nt; ++k) {
                const double t = plan.times[k];
                for (int r = 1; r < plan.rmax; ++r) {
                    for (std::size_t j = 0; j < plan.n_list.size(); ++j) {
                        const std::string name =
                            "xi" + std::to_string(r) + "_n" + std::to_string(plan.n_list[j]);
                        study.samples[name][k][static_cast<std::size_t>(rep)] =
                            panels[j].xi_at(t, r);
                    }
                    study.samples["xi" + std::to_string(r) + "_true"][k]
                                 [static_cast<std::size_t>(rep)] = truth.xi(r, t);
                }
            }
        });

    for (const auto& name : stat_names) {
        for (std::size_t k = 0; k < nt; ++k) {
            append_quantiles(study.table, name, plan.times[k], study.samples[name][k]);
        }
    }
    return study;
}

std::vector<PowerRow> power_estimate(const ExperimentPlan& plan, int true_r,
                                     std::optional<double> condition_epsilon) {
    PanelSpec spec{plan.times, plan.rmax, {}};
    const std::size_t nt = plan.times.size();
    const std::size_t nn = plan.n_list.size();

    // counts[n][t]: {mismatches, kept, discarded}
    struct Cell {
        std::atomic<long> wrong{0}, kept{0}, discarded{0};
    };
    std::vector<std::vector<Cell>> cells(nn);
    for (auto& row : cells) row = std::vector<Cell>(nt);

    for_each_replication(
        plan, spec,
        [&](long, const TrueFunctionals& truth, const std::vector<EstimatorPanel>& panels) {
            for (std::size_t j = 0; j < nn; ++j) {
                const double rho = plan.schedule.at(plan.n_list[j]);
                for (std::size_t k = 0; k < nt; ++k) {
                    const double t = plan.times[k];
                    if (condition_epsilon) {
                        bool ok = true;
                        for (int r = 1; r <= std::min(true_r, plan.rmax); ++r) {
                            if (truth.lbar(r, t) < *condition_epsilon * t) ok = false;
                        }
                        if (!ok) {
                            cells[j][k].discarded.fetch_add(1);
                            continue;
                        }
                    }
                    const DecisionReport rep = apply_rule(plan.rule, panels[j], t, rho);
                    cells[j][k].kept.fetch_add(1);
                    if (rep.r_hat != true_r) cells[j][k].wrong.fetch_add(1);
                }
            }
        });

    std::vector<PowerRow> rows;
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t k = 0; k < nt; ++k) {
            const long kept = cells[j][k].kept.load();
            const long wrong = cells[j][k].wrong.load();
            PowerRow row;
            row.rule = rule_name(plan.rule);
            row.n = plan.n_list[j];
            row.t = plan.times[k];
            row.kept = kept;
            row.discarded = cells[j][k].discarded.load();
            row.beta_hat = kept > 0 ? static_cast<double>(wrong) / static_cast<double>(kept) : 0.0;
            row.se = kept > 0 ? std::sqrt(row.beta_hat * (1.0 - row.beta_hat) /
                                          static_cast<double>(kept))
                              : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<CiRow> ci_level_power(const ExperimentPlan& plan, int r, double epsilon,
                                  double alpha) {
    if (r < 1 || r > plan.rmax) throw std::invalid_argument("ci study: r outside 1..rmax");
    PanelSpec spec{plan.times, plan.rmax, {{1, 1}, {1, r}, {r, r}}};
    const std::size_t nt = plan.times.size();
    const std::size_t nn = plan.n_list.size();

    // Per-replication slots; the reduction below runs in replication order so
    // the output is identical at any worker count.
    const auto reps = static_cast<std::size_t>(plan.replications);
    std::vector<std::vector<std::vector<double>>> verdicts(
        nn, std::vector<std::vector<double>>(nt, std::vector<double>(reps, kMissing)));
    std::vector<std::vector<std::vector<double>>> oracle_s(
        nn, std::vector<std::vector<double>>(nt, std::vector<double>(reps, kMissing)));

    for_each_replication(
        plan, spec,
        [&](long rep, const TrueFunctionals& truth, const std::vector<EstimatorPanel>& panels) {
            for (std::size_t j = 0; j < nn; ++j) {
                for (std::size_t k = 0; k < nt; ++k) {
                    const double t = plan.times[k];
                    const DecisionReport report = ci_test(panels[j], r, t, epsilon, alpha);
                    verdicts[j][k][static_cast<std::size_t>(rep)] = report.reject ? 1.0 : 0.0;
                    oracle_s[j][k][static_cast<std::size_t>(rep)] = truth.s(r, t);
                }
            }
        });

    std::vector<CiRow> rows;
    for (std::size_t j = 0; j < nn; ++j) {
        for (std::size_t k = 0; k < nt; ++k) {
            long total = 0, rejected = 0;
            double s_sum = 0.0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                if (std::isnan(verdicts[j][k][rep])) continue;
                ++total;
                rejected += verdicts[j][k][rep] > 0.5 ? 1 : 0;
                s_sum += oracle_s[j][k][rep];
            }
            CiRow row;
            row.n = plan.n_list[j];
            row.t = plan.times[k];
            row.reject_freq =
                total > 0 ? static_cast<double>(rejected) / static_cast<double>(total) : 0.0;
            row.se = total > 0 ? std::sqrt(row.reject_freq * (1.0 - row.reject_freq) /
                                           static_cast<double>(total))
                               : 0.0;
            row.mean_oracle_s = total > 0 ? s_sum / static_cast<double>(total) : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<RateRow> rate_check(const ExperimentPlan& plan) {
    PanelSpec spec{{plan.T}, plan.rmax, {}};
    const std::size_t nn = plan.n_list.size();

    std::vector<std::vector<std::vector<double>>> sq_err(
        static_cast<std::size_t>(plan.rmax),
        std::vector<std::vector<double>>(nn,
                                         std::vector<double>(static_cast<std::size_t>(plan.replications),
                                                             kMissing)));

    for_each_replication(
        plan, spec,
        [&](long rep, const TrueFunctionals& truth, const std::vector<EstimatorPanel>& panels) {
            for (int r = 1; r <= plan.rmax; ++r) {
                const double target = truth.lbar(r, plan.T);
                for (std::size_t j = 0; j < nn; ++j) {
                    const double err = panels[j].lbar_at(plan.T, r) - target;
                    sq_err[static_cast<std::size_t>(r - 1)][j][static_cast<std::size_t>(rep)] =
                        err * err;
                }
            }
        });

    std::vector<RateRow> rows;
    for (int r = 1; r <= plan.rmax; ++r) {
        for (std::size_t j = 0; j < nn; ++j) {
            double sum = 0.0;
            long count = 0;
            for (double v : sq_err[static_cast<std::size_t>(r - 1)][j]) {
                if (!std::isnan(v)) {
                    sum += v;
                    ++count;
                }
            }
            rows.push_back({r, plan.n_list[j],
                            count > 0 ? std::sqrt(sum / static_cast<double>(count)) : 0.0});
        }
    }
    return rows;
}

void save_quantiles_csv(const QuantileTable& table, std::ostream& out) {
    out << "statistic,t,min,q01,q10,q25,q50,q75,q90,q99,max\n";
    for (const auto& row : table) {
        out << row.statistic << ',' << csv::format(row.t) << ',' << csv::format(row.min) << ','
            << csv::format(row.q01) << ',' << csv::format(row.q10) << ',' << csv::format(row.q25)
            << ',' << csv::format(row.q50) << ',' << csv::format(row.q75) << ','
            << csv::format(row.q90) << ',' << csv::format(row.q99) << ',' << csv::format(row.max)
            << '\n';
    }
}

void save_power_csv(const std::vector<PowerRow>& rows, std::ostream& out) {
    out << "rule,n,t,beta_hat,se,kept,discarded\n";
    for (const auto& row : rows) {
        out << row.rule << ',' << row.n << ',' << csv::format(row.t) << ','
            << csv::format(row.beta_hat) << ',' << csv::format(row.se) << ',' << row.kept << ','
            << row.discarded << '\n';
    }
}

void save_ci_csv(const std::vector<CiRow>& rows, std::ostream& out) {
    out << "n,t,reject_freq,se,mean_oracle_s\n";
    for (const auto& row : rows) {
        out << row.n << ',' << csv::format(row.t) << ',' << csv::format(row.reject_freq) << ','
            << csv::format(row.se) << ',' << csv::format(row.mean_oracle_s) << '\n';
    }
}

void save_rate_csv(const std::vector<RateRow>& rows, std::ostream& out) {
    out << "r,n,rmse\n";
    for (const auto& row : rows) {
        out << row.r << ',' << row.n << ',' << csv::format(row.rmse) << '\n';
    }
}

}  // namespace brdim
