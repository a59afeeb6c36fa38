#include "turkpf/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace turkpf {

namespace {

std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_f2(double v) {
    if (v == 0.0) {
        v = 0.0; // never print "-0.00"
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double round2(double v) {
    return std::round(v * 100.0) / 100.0;
}

EpisodeConfig apply_sweep_value(EpisodeConfig episode,
                                const std::string& param, double value) {
    auto require_positive_integer = [&](double v) {
        if (!(v >= 1.0) || v != std::floor(v)) {
            throw UsageError("sweep value for " + param +
                             " must be a positive integer, got " +
                             format_g6(v));
        }
    };
    if (param == "particles") {
        require_positive_integer(value);
        episode.particles = static_cast<std::size_t>(value);
    } else if (param == "budget") {
        episode.budget = value;
    } else if (param == "c_improve") {
        episode.improve_cost = value;
    } else if (param == "gamma_true") {
        episode.gamma_true = value;
    } else if (param == "lookahead_depth") {
        require_positive_integer(value);
        episode.lookahead_depth = static_cast<int>(value);
    } else {
        throw UsageError("unknown sweep parameter: " + param);
    }
    return episode;
}

void validate_run_config(const RunConfig& config) {
    if (config.runs < 1) {
        throw UsageError("runs must be at least 1");
    }
    try {
        config.episode.validate();
        if (!config.sweep_param.empty()) {
            for (double v : config.sweep_values) {
                apply_sweep_value(config.episode, config.sweep_param, v)
                    .validate();
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

struct EpisodeTask {
    EpisodeConfig episode;
    std::string sweep_param;
    double sweep_value;
    std::uint64_t seed;
};

SweepRow run_task(const EpisodeTask& task) {
    RandomStream rng(task.seed);
    const EpisodeResult res = run_episode(task.episode, rng);
    SweepRow row;
    row.sweep_param = task.sweep_param;
    row.sweep_value = task.sweep_value;
    row.seed = task.seed;
    row.net_utility = res.net_utility;
    row.improvements = res.improvements;
    row.ballots = res.ballots;
    row.final_quality_true = res.final_quality_true;
    row.total_spent = res.total_spent;
    if (!res.action_ms.empty()) {
        double acc = 0.0;
        for (double ms : res.action_ms) {
            acc += ms;
        }
        row.ms_per_action = acc / static_cast<double>(res.action_ms.size());
    }
    return row;
}

} // namespace

const std::vector<std::string>& sweepable_params() {
    static const std::vector<std::string> names{
        "particles", "gamma_true", "budget", "c_improve", "lookahead_depth",
    };
    return names;
}

std::vector<SweepRow> run_sweep_rows(const RunConfig& config) {
    validate_run_config(config);
    std::vector<EpisodeTask> tasks;
    const bool swept = !config.sweep_param.empty();
    const std::vector<double> values =
        swept ? config.sweep_values : std::vector<double>{0.0};
    for (double value : values) {
        EpisodeConfig episode =
            swept ? apply_sweep_value(config.episode, config.sweep_param, value)
                  : config.episode;
        for (int r = 0; r < config.runs; ++r) {
            tasks.push_back(EpisodeTask{
                episode,
                swept ? config.sweep_param : std::string("none"),
                value,
                config.seed ^ static_cast<std::uint64_t>(r),
            });
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(hw, tasks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            rows[i] = run_task(tasks[i]);
        }
    } else {
        // Episodes are independent; hand them out by index so the result
        // vector is identical to the serial order.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) {
                        return;
                    }
                    rows[i] = run_task(tasks[i]);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         if (a.sweep_value != b.sweep_value) {
                             return a.sweep_value < b.sweep_value;
                         }
                         return a.seed < b.seed;
                     });
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "sweep_param,sweep_value,seed,net_utility,improvements,ballots,"
           "final_quality_true,total_spent,ms_per_action\n";
    for (const SweepRow& row : rows) {
        out << row.sweep_param << ',' << format_g6(row.sweep_value) << ','
            << row.seed << ',' << format_g6(row.net_utility) << ','
            << row.improvements << ',' << row.ballots << ','
            << format_g6(row.final_quality_true) << ','
            << format_g6(row.total_spent) << ','
            << format_g6(row.ms_per_action) << '\n';
    }
}

void run_sweep(const RunConfig& config, std::ostream& out) {
    write_sweep_csv(run_sweep_rows(config), out);
}

void run_trace(const RunConfig& config, std::ostream& out) {
    if (!config.episode.dont_submit) {
        throw std::invalid_argument("trace runs require dont_submit mode");
    }
    validate_run_config(config);
    RandomStream rng(config.seed);
    const EpisodeResult res = run_episode(config.episode, rng);

    out << "Action\tTrue Utility\tTrue Qlty\tEst Qlty\tEst-Real\t"
           "Would've Submitted?\n";
    for (const TraceRecord& rec : res.trace) {
        const char* token = rec.action == Action::Improve ? "Imprvmt"
                            : rec.action == Action::Ballot ? "Ballot"
                                                           : "Submit";
        out << token << '\t' << format_f2(rec.true_utility);
        if (rec.action == Action::Submit) {
            out << "\t\t\t\t\n";
            continue;
        }
        // Est-Real is reported on the rounded columns so the printed
        // arithmetic is self-consistent.
        const double diff = round2(rec.est_quality) - round2(rec.true_quality);
        out << '\t' << format_f2(rec.true_quality) << '\t'
            << format_f2(rec.est_quality) << '\t' << format_f2(diff) << '\t'
            << (rec.would_have_submitted ? "yes" : "") << '\n';
    }
}

ParsedCommand parse_config(const std::vector<std::string>& args) {
    RunConfig config;
    std::string sweep_spec;

    CLI::App app{"Decision-theoretic controller for iterative improvement "
                 "crowdsourcing, driven by a particle-filter belief over "
                 "artifact quality."};
    app.name("turkpf");
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI config file");

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--particles", config.episode.particles,
                        "Particles per filter");
        cmd->add_option("--budget", config.episode.budget,
                        "Total budget per episode");
        cmd->add_option("--improve-cost", config.episode.improve_cost,
                        "Cost of one improvement job");
        cmd->add_option("--ballot-cost", config.episode.ballot_cost,
                        "Cost of one ballot vote");
        cmd->add_option("--gamma-true", config.episode.gamma_true,
                        "True worker error parameter");
        cmd->add_option("--gamma-est", config.episode.gamma_est_init,
                        "Initial planning estimate of worker gamma");
        cmd->add_option("--depth", config.episode.lookahead_depth,
                        "Expectimax lookahead depth");
        cmd->add_flag("--dont-submit", config.episode.dont_submit,
                      "Never submit while a paid action is affordable");
        cmd->add_option("--seed", config.seed, "Base seed");
        cmd->add_option("--runs", config.runs, "Episodes per sweep value");
        cmd->add_option("--sweep", sweep_spec,
                        "Sweep spec: <param>:<v1>,<v2>,... with param one of "
                        "particles, gamma_true, budget, c_improve, "
                        "lookahead_depth");
        cmd->add_option("--out", config.out_path,
                        "Write output to this file instead of stdout");
    };
    add_shared(&app);
    CLI::App* cmd_run =
        app.add_subcommand("run", "Run episodes at a single configuration");
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Run episodes across a parameter sweep");
    CLI::App* cmd_trace =
        app.add_subcommand("trace", "Print the action log of one episode");
    for (CLI::App* cmd : {cmd_run, cmd_sweep, cmd_trace}) {
        cmd->fallthrough();
    }

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        ParsedCommand parsed;
        parsed.mode = ParsedCommand::Mode::Help;
        parsed.help_text = app.help();
        return parsed;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!sweep_spec.empty()) {
        const auto colon = sweep_spec.find(':');
        if (colon == std::string::npos || colon == 0 ||
            colon + 1 >= sweep_spec.size()) {
            throw UsageError("--sweep expects <param>:<v1>,<v2>,...");
        }
        config.sweep_param = sweep_spec.substr(0, colon);
        const auto& names = sweepable_params();
        if (std::find(names.begin(), names.end(), config.sweep_param) ==
            names.end()) {
            throw UsageError("unknown sweep parameter: " + config.sweep_param);
        }
        std::string list = sweep_spec.substr(colon + 1);
        std::size_t start = 0;
        while (start <= list.size()) {
            const auto comma = list.find(',', start);
            const std::string item =
                list.substr(start, comma == std::string::npos
                                       ? std::string::npos
                                       : comma - start);
            try {
                std::size_t used = 0;
                const double v = std::stod(item, &used);
                if (used != item.size()) {
                    throw std::invalid_argument(item);
                }
                config.sweep_values.push_back(v);
            } catch (const std::exception&) {
                throw UsageError("bad sweep value: '" + item + "'");
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (config.sweep_values.empty()) {
            throw UsageError("sweep value list is empty");
        }
    }

    ParsedCommand parsed;
    if (app.got_subcommand(cmd_trace)) {
        parsed.mode = ParsedCommand::Mode::Trace;
        config.episode.dont_submit = true; // a trace is a dont_submit run
    } else if (app.got_subcommand(cmd_sweep)) {
        parsed.mode = ParsedCommand::Mode::Sweep;
        if (config.sweep_param.empty()) {
            throw UsageError("sweep mode requires --sweep");
        }
    } else {
        parsed.mode = ParsedCommand::Mode::Run;
    }
    parsed.config = std::move(config);
    validate_run_config(parsed.config);
    return parsed;
}

} // namespace turkpf
