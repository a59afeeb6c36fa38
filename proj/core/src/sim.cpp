#include "turkpf/sim.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace turkpf {

namespace {

double clamp_mean(double mu, const ModelParams& params) {
    return std::clamp(mu, params.clamp_epsilon, 1.0 - params.clamp_epsilon);
}

// The side the agent would submit right now (ties prefer the improved
// version, matching the submit rule).
bool submit_side_is_improved(const BeliefState& belief) {
    return mean_quality(belief.improved) >= mean_quality(belief.prev);
}

TraceRecord make_record(Action action, const GroundTruth& truth,
                        const BeliefState& belief, const ModelParams& params,
                        bool would_have_submitted) {
    const bool improved_side = submit_side_is_improved(belief);
    TraceRecord rec;
    rec.action = action;
    rec.true_quality = improved_side ? truth.alpha_prime : truth.alpha;
    rec.true_utility = utility(rec.true_quality, params);
    rec.est_quality = mean_quality(improved_side ? belief.improved
                                                 : belief.prev);
    rec.est_minus_real = rec.est_quality - rec.true_quality;
    rec.would_have_submitted = would_have_submitted;
    return rec;
}

} // namespace

void EpisodeConfig::validate() const {
    if (particles == 0) {
        throw std::invalid_argument("particles must be at least 1");
    }
    if (!(budget >= 0.0)) {
        throw std::invalid_argument("budget must be non-negative");
    }
    if (!(improve_cost > 0.0) || !(ballot_cost > 0.0)) {
        throw std::invalid_argument("action costs must be positive");
    }
    if (!(gamma_true > 0.0) || !(gamma_est_init > 0.0)) {
        throw std::invalid_argument("gamma parameters must be positive");
    }
    if (lookahead_depth < 1) {
        throw std::invalid_argument("lookahead depth must be at least 1");
    }
    params.validate();
}

GroundTruth simulate_improvement(const GroundTruth& truth,
                                 const BeliefState& belief, double gamma_true,
                                 const ModelParams& params, RandomStream& rng) {
    if (!(gamma_true > 0.0)) {
        throw std::invalid_argument("gamma_true must be positive");
    }
    // The environment hands the worker whichever version the agent
    // believes is better; on a tie of means the previous version is kept.
    const bool base_is_improved =
        mean_quality(belief.prev) < mean_quality(belief.improved);
    const double base = base_is_improved ? truth.alpha_prime : truth.alpha;
    const double mu = clamp_mean(improvement_mean(base, gamma_true, params),
                                 params);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        sum += rng.beta(10.0 * mu, 10.0 * (1.0 - mu));
    }
    return GroundTruth{base, sum / 3.0};
}

bool simulate_ballot(const GroundTruth& truth, double gamma_true,
                     const ModelParams& params, RandomStream& rng) {
    const double p = prob_yes(truth.alpha, truth.alpha_prime, gamma_true,
                              params);
    return rng.uniform() < p;
}

EpisodeResult run_episode(const EpisodeConfig& config, RandomStream& rng) {
    config.validate();
    const ModelParams& params = config.params;
    CostModel costs{config.budget, config.improve_cost, config.ballot_cost,
                    0.0};
    SimWorkerPool pool{config.gamma_true, 0};
    EpisodeResult result;

    // Draw order is fixed: true initial quality, then the belief particles,
    // then per-action draws (environment before belief update).
    GroundTruth truth;
    truth.alpha = rng.beta(params.prior_alpha, params.prior_beta);
    truth.alpha_prime = truth.alpha; // no improved version exists yet
    ParticleFilter pf = init_filter(config.particles, params.prior_alpha,
                                    params.prior_beta, rng);
    BeliefState belief{pf, pf, {}};
    WorkerEstimate gamma_est = WorkerEstimate::make_default(config.gamma_est_init);

    auto do_improve = [&](bool would_have_submitted) {
        costs.pay(costs.improve_cost);
        pool.take_worker();
        truth = simulate_improvement(truth, belief, config.gamma_true, params,
                                     rng);
        belief = incorporate_improvement(belief, gamma_est.gamma_estimate,
                                         params, rng);
        ++result.improvements;
        result.trace.push_back(make_record(Action::Improve, truth, belief,
                                           params, would_have_submitted));
    };
    auto do_ballot = [&](bool would_have_submitted) {
        costs.pay(costs.ballot_cost);
        pool.take_worker();
        const bool vote = simulate_ballot(truth, config.gamma_true, params,
                                          rng);
        const BeliefState snapshot = belief;
        belief = incorporate_ballot(belief, vote, gamma_est.gamma_estimate,
                                    params, rng);
        gamma_est = update_worker_gamma(gamma_est, vote, snapshot, params);
        ++result.ballots;
        result.trace.push_back(make_record(Action::Ballot, truth, belief,
                                           params, would_have_submitted));
    };
    auto do_submit = [&] {
        const bool improved_side = submit_side_is_improved(belief);
        result.final_quality_true =
            improved_side ? truth.alpha_prime : truth.alpha;
        TraceRecord rec;
        rec.action = Action::Submit;
        rec.true_quality = result.final_quality_true;
        rec.true_utility = utility(rec.true_quality, params);
        rec.est_quality = mean_quality(improved_side ? belief.improved
                                                     : belief.prev);
        rec.est_minus_real = rec.est_quality - rec.true_quality;
        result.trace.push_back(rec);
    };

    // The first action is always an improvement: with a single version
    // there is nothing to ballot and submitting is never better than in
    // the pre-improvement state it was priced for.
    if (costs.affordable(costs.improve_cost)) {
        do_improve(false);
        for (;;) {
            const auto t0 = std::chrono::steady_clock::now();
            const ActionValues values =
                evaluate_actions(belief, costs, gamma_est.gamma_estimate,
                                 config.lookahead_depth, params, rng);
            const auto t1 = std::chrono::steady_clock::now();
            result.action_ms.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());

            const Action unrestricted = values.best();
            const bool would_submit = unrestricted == Action::Submit;
            Action taken = unrestricted;
            if (config.dont_submit) {
                // Keep spending: best affordable paid action, ballots
                // favored on exact ties; submit only when nothing is
                // affordable any more.
                if (values.ballot_available && values.improve_available) {
                    taken = values.improve > values.ballot ? Action::Improve
                                                           : Action::Ballot;
                } else if (values.ballot_available) {
                    taken = Action::Ballot;
                } else if (values.improve_available) {
                    taken = Action::Improve;
                } else {
                    taken = Action::Submit;
                }
            }
            if (taken == Action::Submit) {
                do_submit();
                break;
            }
            if (taken == Action::Improve) {
                do_improve(would_submit);
            } else {
                do_ballot(would_submit);
            }
        }
    } else {
        do_submit();
    }

    result.total_spent = costs.spent;
    result.net_utility =
        utility(result.final_quality_true, params) - result.total_spent;
    return result;
}

} // namespace turkpf
