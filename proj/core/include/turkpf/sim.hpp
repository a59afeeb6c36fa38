#pragma once

#include <cstddef>
#include <vector>

#include "turkpf/agent.hpp"
#include "turkpf/quality_model.hpp"
#include "turkpf/random.hpp"

namespace turkpf {

// Hidden true qualities of the two live versions of the artifact.
struct GroundTruth {
    double alpha = 0.0;       // previous version
    double alpha_prime = 0.0; // improved version
};

// Simulated crowd: an unbounded pool of interchangeable workers sharing
// one true error parameter. Jobs are handed out round-robin.
struct SimWorkerPool {
    double gamma_true = 1.0;
    int next_worker_id = 0;

    int take_worker() { return next_worker_id++; }
};

struct EpisodeConfig {
    std::size_t particles = 100;
    double budget = 10.0;
    double improve_cost = 0.3;
    double ballot_cost = 0.1;
    double gamma_true = 1.0;
    double gamma_est_init = 1.0;
    int lookahead_depth = 2;
    bool dont_submit = false;
    ModelParams params;

    void validate() const;
};

// One row of the action log. Quality fields refer to the version the agent
// would submit at that instant (the better-believed side): `true_quality`
// is its hidden quality, `est_quality` the corresponding filter mean.
struct TraceRecord {
    Action action = Action::Submit;
    double true_utility = 0.0;
    double true_quality = 0.0;
    double est_quality = 0.0;
    double est_minus_real = 0.0;
    bool would_have_submitted = false;
};

struct EpisodeResult {
    double net_utility = 0.0;
    int improvements = 0;
    int ballots = 0;
    double final_quality_true = 0.0; // hidden quality of the submitted version
    double total_spent = 0.0;
    std::vector<double> action_ms; // wall time of each agent decision
    std::vector<TraceRecord> trace;
};

// One improvement job executed by a gamma_true worker. The version the
// agent believes is better becomes the base; the worker's output quality
// is the mean of three draws from the improvement distribution around
// that base.
GroundTruth simulate_improvement(const GroundTruth& truth,
                                 const BeliefState& belief, double gamma_true,
                                 const ModelParams& params, RandomStream& rng);

// One ballot vote ("is the improved version better?") from a gamma_true
// worker who sees the hidden qualities.
bool simulate_ballot(const GroundTruth& truth, double gamma_true,
                     const ModelParams& params, RandomStream& rng);

// Plays one full episode: forced initial improvement, then repeated
// plan/act/observe rounds until the agent submits (or, with dont_submit,
// until no paid action is affordable).
EpisodeResult run_episode(const EpisodeConfig& config, RandomStream& rng);

} // namespace turkpf
