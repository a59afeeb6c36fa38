#pragma once

#include <vector>

#include "turkpf/particle_filter.hpp"
#include "turkpf/quality_model.hpp"
#include "turkpf/random.hpp"

namespace turkpf {

enum class Action { Submit, Improve, Ballot };

const char* to_string(Action action);

// Joint belief over the previous and the improved version of the artifact,
// plus the votes observed since the last improvement round.
struct BeliefState {
    ParticleFilter prev;
    ParticleFilter improved;
    std::vector<bool> ballot_history;
};

// Budget ledger. Comparisons carry a small absolute slack so that a budget
// assembled from decimal costs (0.3 + 0.1 + ...) still affords the action
// it was meant to afford despite binary rounding.
struct CostModel {
    double budget = 10.0;
    double improve_cost = 0.3;
    double ballot_cost = 0.1;
    double spent = 0.0;

    double remaining() const { return budget - spent; }
    bool affordable(double cost) const;
    // Throws std::logic_error when the cost is not affordable.
    void pay(double cost);
};

// Discretized posterior over the error parameter gamma of the worker
// population, tracked on a fixed geometric grid.
struct WorkerEstimate {
    int worker_id = 0;
    std::vector<double> gamma_grid;
    std::vector<double> posterior;      // sums to 1
    double gamma_estimate = 1.0;        // value used for planning
    int updates = 0;                    // ballots folded in so far

    // Uniform posterior over a 50-point geometric grid on [1/4, 4];
    // gamma_estimate starts at initial_gamma until the first update.
    static WorkerEstimate make_default(double initial_gamma);
};

struct ActionValues {
    double submit = 0.0;
    double improve = 0.0;
    double ballot = 0.0;
    bool improve_available = false;
    bool ballot_available = false;

    // Arg-max with ties resolved in favor of Submit, then Ballot.
    Action best() const;
};

// Expected utility of submitting now: the better-mean filter's expected
// utility, with the improved version preferred on an exact tie of means.
double value_submit(const BeliefState& belief, const ModelParams& params);

// One-step lookahead value of requesting an improvement: the expected
// utility of predicting the better filter forward, minus the improvement
// cost. Works on scratch copies; the belief is unchanged.
double value_improve(const BeliefState& belief, const CostModel& costs,
                     double gamma_est, const ModelParams& params,
                     RandomStream& rng);

// Probability of a yes vote under the joint belief: the pairwise average
// of prob_yes over the two particle clouds.
double prob_yes_belief(const BeliefState& belief, double gamma,
                       const ModelParams& params);

// One-step lookahead value of asking for a ballot: expectation over the
// two vote outcomes of the post-vote submit value, minus the ballot cost.
// Vote posteriors are deterministic reweightings (no resampling noise).
double value_ballot(const BeliefState& belief, const CostModel& costs,
                    double gamma_est, const ModelParams& params);

// Depth-limited expectimax over {Submit, Improve, Ballot}. Vote branches
// reweight the particle clouds deterministically (no resampling inside
// the planner); improvement branches draw predicted clouds from a forked
// stream, consuming exactly one raw draw from `rng` regardless of depth.
// Actions that the remaining budget cannot pay for are unavailable, both
// at the root and along every lookahead path.
ActionValues evaluate_actions(const BeliefState& belief,
                              const CostModel& costs, double gamma_est,
                              int depth, const ModelParams& params,
                              RandomStream& rng);

Action choose_action(const BeliefState& belief, const CostModel& costs,
                     double gamma_est, int depth, const ModelParams& params,
                     RandomStream& rng);

// Belief transition after a completed improvement job: the better-mean
// filter becomes the previous version (ties keep the previous version),
// its prediction becomes the improved version, and the ballot history is
// cleared.
BeliefState incorporate_improvement(const BeliefState& belief,
                                    double gamma_est,
                                    const ModelParams& params,
                                    RandomStream& rng);

// Belief transition after observing one ballot vote: both filters are
// reweighted against a snapshot of the other taken before either update,
// then resampled; the vote is appended to the history.
BeliefState incorporate_ballot(const BeliefState& belief, bool vote_yes,
                               double gamma_est, const ModelParams& params,
                               RandomStream& rng);

// Bayesian grid update of the worker-population gamma from one vote,
// evaluated against the belief snapshot that generated the ballot.
WorkerEstimate update_worker_gamma(const WorkerEstimate& estimate,
                                   bool vote_yes,
                                   const BeliefState& snapshot,
                                   const ModelParams& params);

} // namespace turkpf
