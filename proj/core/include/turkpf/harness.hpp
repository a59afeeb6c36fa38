#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "turkpf/sim.hpp"

namespace turkpf {

// Invalid command line or config file; the CLI maps this to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    EpisodeConfig episode;
    std::uint64_t seed = 1;
    int runs = 50;
    std::string sweep_param;           // empty: no sweep, single point
    std::vector<double> sweep_values;
    std::string out_path;              // empty: stdout
};

struct ParsedCommand {
    enum class Mode { Run, Sweep, Trace, Help };
    Mode mode = Mode::Run;
    RunConfig config;
    std::string help_text; // filled for Mode::Help
};

// Parses a full argument vector (without argv[0]). Flags beat config-file
// values, which beat defaults. Throws UsageError on any invalid input.
ParsedCommand parse_config(const std::vector<std::string>& args);

// Parameter names accepted by --sweep.
const std::vector<std::string>& sweepable_params();

struct SweepRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double net_utility = 0.0;
    int improvements = 0;
    int ballots = 0;
    double final_quality_true = 0.0;
    double total_spent = 0.0;
    double ms_per_action = 0.0;
};

// Runs `runs` episodes per sweep value under common random numbers
// (episode r is seeded with seed XOR r) and returns one row per episode,
// sorted by (sweep_value, seed). Without a sweep parameter, produces a
// single point labelled "none".
std::vector<SweepRow> run_sweep_rows(const RunConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

// run_sweep_rows + write_sweep_csv.
void run_sweep(const RunConfig& config, std::ostream& out);

// Plays a single episode in dont_submit mode and renders the action log
// as a tab-separated table. Requires config.episode.dont_submit.
void run_trace(const RunConfig& config, std::ostream& out);

} // namespace turkpf
