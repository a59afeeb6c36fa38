#include "turkpf/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

#include "pair_kernel.hpp"

namespace turkpf {

namespace {

constexpr double kBudgetSlack = 1e-9;
// Upper bound (in doubles, ~640 MB) on a cached pairwise kernel matrix.
constexpr std::size_t kMatrixCacheLimit = 80'000'000;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using SharedValues = std::shared_ptr<const std::vector<double>>;

// One side of a planning node: a particle cloud plus importance weights.
// Clouds are shared between nodes (vote branches never change them);
// weights are per-node.
struct PlanSide {
    SharedValues vals;
    std::vector<double> w;
    double mean = 0.0;
};

struct PlanNode {
    PlanSide prev;
    PlanSide impr;
};

double weighted_mean(const std::vector<double>& vals,
                     const std::vector<double>& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        acc += w[i] * vals[i];
    }
    return acc;
}

PlanSide make_side(SharedValues vals) {
    PlanSide side;
    side.w.assign(vals->size(), 1.0 / static_cast<double>(vals->size()));
    side.mean = weighted_mean(*vals, side.w);
    side.vals = std::move(vals);
    return side;
}

PlanNode root_node(const BeliefState& belief) {
    PlanNode node;
    node.prev = make_side(
        std::make_shared<const std::vector<double>>(belief.prev.particles()));
    node.impr = make_side(std::make_shared<const std::vector<double>>(
        belief.improved.particles()));
    return node;
}

double side_expected_utility(const PlanSide& side, const ModelParams& params) {
    double acc = 0.0;
    for (std::size_t i = 0; i < side.vals->size(); ++i) {
        acc += side.w[i] * utility((*side.vals)[i], params);
    }
    return acc;
}

// Submit value of a node; ties between means go to the improved side.
double node_submit_value(const PlanNode& node, const ModelParams& params) {
    const PlanSide& side = (node.impr.mean >= node.prev.mean) ? node.impr
                                                              : node.prev;
    return side_expected_utility(side, params);
}

// Improvement transition: the better side (ties keep the previous version,
// mirroring the environment's swap rule) becomes prev, and a fresh cloud is
// drawn particle-by-particle from the improvement model. Weights transfer
// unchanged since the transition maps particle i to particle i.
PlanNode improve_child(const PlanNode& node, double gamma_est,
                       const ModelParams& params, RandomStream& rng) {
    const PlanSide& better =
        (node.prev.mean < node.impr.mean) ? node.impr : node.prev;
    auto predicted =
        std::make_shared<std::vector<double>>(better.vals->size());
    for (std::size_t i = 0; i < better.vals->size(); ++i) {
        const double mu =
            std::clamp(improvement_mean((*better.vals)[i], gamma_est, params),
                       params.clamp_epsilon, 1.0 - params.clamp_epsilon);
        (*predicted)[i] = rng.beta(10.0 * mu, 10.0 * (1.0 - mu));
    }
    PlanNode child;
    child.prev = better;
    child.impr.vals = predicted;
    child.impr.w = better.w;
    child.impr.mean = weighted_mean(*predicted, child.impr.w);
    return child;
}

// Deterministic vote branch: posterior weight of every particle is its
// prior weight times the vote likelihood, normalized. No resampling here;
// only real observations resample.
std::optional<PlanNode> vote_child(const PlanNode& node,
                                   const detail::BallotExpansion& expansion,
                                   bool vote_yes) {
    PlanNode child;
    child.prev.vals = node.prev.vals;
    child.impr.vals = node.impr.vals;
    auto reweight = [vote_yes](const std::vector<double>& prior,
                               const std::vector<double>& yes_prob,
                               std::vector<double>& out) {
        out.resize(prior.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < prior.size(); ++i) {
            const double like =
                std::max(vote_yes ? yes_prob[i] : 1.0 - yes_prob[i], 0.0);
            out[i] = prior[i] * like;
            sum += out[i];
        }
        if (!(sum > 0.0)) {
            return false;
        }
        for (double& w : out) {
            w /= sum;
        }
        return true;
    };
    if (!reweight(node.prev.w, expansion.yes_prob_prev, child.prev.w) ||
        !reweight(node.impr.w, expansion.yes_prob_impr, child.impr.w)) {
        return std::nullopt;
    }
    child.prev.mean = weighted_mean(*child.prev.vals, child.prev.w);
    child.impr.mean = weighted_mean(*child.impr.vals, child.impr.w);
    return child;
}

struct PlanContext {
    double gamma_est;
    const ModelParams& params;
    const CostModel& costs;
    RandomStream& rng;
};

double node_value(const PlanNode& node, double remaining, int depth,
                  PlanContext& ctx, const detail::PairKernel* inherited);

// Expected value of balloting at this node (cost already subtracted).
// `inherited` carries the parent's cached kernel when this node shares its
// particle clouds with the parent (vote branches do).
double ballot_branch_value(const PlanNode& node, double remaining, int depth,
                           PlanContext& ctx,
                           const detail::PairKernel* inherited) {
    std::optional<detail::PairKernel> local;
    const detail::PairKernel* kernel = inherited;
    if (kernel == nullptr) {
        const bool cache =
            depth >= 2 && node.prev.vals->size() * node.impr.vals->size() <=
                              kMatrixCacheLimit;
        local.emplace(*node.prev.vals, *node.impr.vals, ctx.gamma_est,
                      ctx.params, cache);
        kernel = &*local;
    }
    const auto expansion = kernel->expand(node.prev.w, node.impr.w);
    const double p_yes = std::clamp(expansion.p_yes, 0.0, 1.0);
    const double next_budget = remaining - ctx.costs.ballot_cost;
    double acc = 0.0;
    // Fixed traversal order (yes branch before no branch) keeps the draw
    // sequence of nested improvement lookaheads reproducible.
    if (p_yes > 0.0) {
        const auto child = vote_child(node, expansion, true);
        acc += p_yes * (child ? node_value(*child, next_budget, depth - 1,
                                           ctx, kernel)
                              : node_submit_value(node, ctx.params));
    }
    if (p_yes < 1.0) {
        const auto child = vote_child(node, expansion, false);
        acc += (1.0 - p_yes) *
               (child ? node_value(*child, next_budget, depth - 1, ctx, kernel)
                      : node_submit_value(node, ctx.params));
    }
    return acc - ctx.costs.ballot_cost;
}

double improve_branch_value(const PlanNode& node, double remaining, int depth,
                            PlanContext& ctx) {
    PlanNode child = improve_child(node, ctx.gamma_est, ctx.params, ctx.rng);
    return node_value(child, remaining - ctx.costs.improve_cost, depth - 1,
                      ctx, nullptr) -
           ctx.costs.improve_cost;
}

double node_value(const PlanNode& node, double remaining, int depth,
                  PlanContext& ctx, const detail::PairKernel* inherited) {
    const double v_submit = node_submit_value(node, ctx.params);
    if (depth <= 0) {
        return v_submit;
    }
    // Improvement subtree is evaluated first so that its position in the
    // draw sequence does not depend on the ballot branch.
    double v_improve = kNegInf;
    if (remaining + kBudgetSlack >= ctx.costs.improve_cost) {
        v_improve = improve_branch_value(node, remaining, depth, ctx);
    }
    double v_ballot = kNegInf;
    if (remaining + kBudgetSlack >= ctx.costs.ballot_cost) {
        v_ballot = ballot_branch_value(node, remaining, depth, ctx, inherited);
    }
    double best = v_submit;
    if (v_ballot > best) {
        best = v_ballot;
    }
    if (v_improve > best) {
        best = v_improve;
    }
    return best;
}

void check_belief(const BeliefState& belief) {
    if (belief.prev.empty() || belief.improved.empty()) {
        throw std::invalid_argument("belief filters must be non-empty");
    }
}

void check_gamma_est(double gamma_est) {
    if (!(gamma_est > 0.0)) {
        throw std::invalid_argument("gamma estimate must be positive");
    }
}

} // namespace

const char* to_string(Action action) {
    switch (action) {
    case Action::Submit:
        return "Submit";
    case Action::Improve:
        return "Improve";
    case Action::Ballot:
        return "Ballot";
    }
    return "?";
}

bool CostModel::affordable(double cost) const {
    if (!(cost >= 0.0)) {
        throw std::invalid_argument("costs must be non-negative");
    }
    return cost <= remaining() + kBudgetSlack;
}

void CostModel::pay(double cost) {
    if (!affordable(cost)) {
        throw std::logic_error("action cost exceeds remaining budget");
    }
    spent += cost;
}

WorkerEstimate WorkerEstimate::make_default(double initial_gamma) {
    if (!(initial_gamma > 0.0)) {
        throw std::invalid_argument("initial gamma must be positive");
    }
    constexpr int kGridSize = 50;
    WorkerEstimate est;
    est.gamma_grid.resize(kGridSize);
    for (int k = 0; k < kGridSize; ++k) {
        est.gamma_grid[k] =
            0.25 * std::pow(16.0, static_cast<double>(k) / (kGridSize - 1));
    }
    est.posterior.assign(kGridSize, 1.0 / kGridSize);
    est.gamma_estimate = initial_gamma;
    est.updates = 0;
    return est;
}

Action ActionValues::best() const {
    Action action = Action::Submit;
    double value = submit;
    if (ballot_available && ballot > value) {
        action = Action::Ballot;
        value = ballot;
    }
    if (improve_available && improve > value) {
        action = Action::Improve;
    }
    return action;
}

double value_submit(const BeliefState& belief, const ModelParams& params) {
    check_belief(belief);
    const double mean_prev = mean_quality(belief.prev);
    const double mean_impr = mean_quality(belief.improved);
    const ParticleFilter& side =
        (mean_impr >= mean_prev) ? belief.improved : belief.prev;
    return expected_utility(side, params);
}

double value_improve(const BeliefState& belief, const CostModel& costs,
                     double gamma_est, const ModelParams& params,
                     RandomStream& rng) {
    check_belief(belief);
    check_gamma_est(gamma_est);
    const double mean_prev = mean_quality(belief.prev);
    const double mean_impr = mean_quality(belief.improved);
    const ParticleFilter& better =
        (mean_prev < mean_impr) ? belief.improved : belief.prev;
    const ParticleFilter predicted = predict(better, gamma_est, params, rng);
    return expected_utility(predicted, params) - costs.improve_cost;
}

double prob_yes_belief(const BeliefState& belief, double gamma,
                       const ModelParams& params) {
    check_belief(belief);
    check_gamma_est(gamma);
    PlanNode root = root_node(belief);
    const detail::PairKernel kernel(*root.prev.vals, *root.impr.vals, gamma,
                                    params, false);
    return kernel.expand(root.prev.w, root.impr.w).p_yes;
}

double value_ballot(const BeliefState& belief, const CostModel& costs,
                    double gamma_est, const ModelParams& params) {
    check_belief(belief);
    check_gamma_est(gamma_est);
    PlanNode root = root_node(belief);
    const detail::PairKernel kernel(*root.prev.vals, *root.impr.vals,
                                    gamma_est, params, false);
    const auto expansion = kernel.expand(root.prev.w, root.impr.w);
    const double p_yes = std::clamp(expansion.p_yes, 0.0, 1.0);
    double acc = 0.0;
    if (p_yes > 0.0) {
        const auto child = vote_child(root, expansion, true);
        acc += p_yes * (child ? node_submit_value(*child, params)
                              : node_submit_value(root, params));
    }
    if (p_yes < 1.0) {
        const auto child = vote_child(root, expansion, false);
        acc += (1.0 - p_yes) * (child ? node_submit_value(*child, params)
                                      : node_submit_value(root, params));
    }
    return acc - costs.ballot_cost;
}

ActionValues evaluate_actions(const BeliefState& belief,
                              const CostModel& costs, double gamma_est,
                              int depth, const ModelParams& params,
                              RandomStream& rng) {
    check_belief(belief);
    check_gamma_est(gamma_est);
    if (depth < 1) {
        throw std::invalid_argument("lookahead depth must be at least 1");
    }
    // All lookahead randomness comes from a fork, so the caller's stream
    // advances by exactly one draw no matter how deep the search goes.
    RandomStream plan_rng = rng.fork();
    PlanContext ctx{gamma_est, params, costs, plan_rng};
    const PlanNode root = root_node(belief);

    ActionValues values;
    values.submit = node_submit_value(root, params);
    values.improve_available = costs.affordable(costs.improve_cost);
    values.ballot_available = costs.affordable(costs.ballot_cost);
    values.improve = values.improve_available
                         ? improve_branch_value(root, costs.remaining(), depth,
                                                ctx)
                         : kNegInf;
    values.ballot = values.ballot_available
                        ? ballot_branch_value(root, costs.remaining(), depth,
                                              ctx, nullptr)
                        : kNegInf;
    return values;
}

Action choose_action(const BeliefState& belief, const CostModel& costs,
                     double gamma_est, int depth, const ModelParams& params,
                     RandomStream& rng) {
    return evaluate_actions(belief, costs, gamma_est, depth, params, rng)
        .best();
}

BeliefState incorporate_improvement(const BeliefState& belief,
                                    double gamma_est,
                                    const ModelParams& params,
                                    RandomStream& rng) {
    check_belief(belief);
    check_gamma_est(gamma_est);
    const double mean_prev = mean_quality(belief.prev);
    const double mean_impr = mean_quality(belief.improved);
    const ParticleFilter& better =
        (mean_prev < mean_impr) ? belief.improved : belief.prev;
    BeliefState next;
    next.prev = better;
    next.improved = predict(better, gamma_est, params, rng);
    next.ballot_history.clear(); // votes compared versions that no longer exist
    return next;
}

BeliefState incorporate_ballot(const BeliefState& belief, bool vote_yes,
                               double gamma_est, const ModelParams& params,
                               RandomStream& rng) {
    check_belief(belief);
    check_gamma_est(gamma_est);
    // Both weight vectors are computed against the pre-update snapshot
    // before either filter is resampled.
    const WeightVector w_prev = ballot_weights(belief.prev, belief.improved,
                                               vote_yes, false, gamma_est,
                                               params);
    const WeightVector w_impr = ballot_weights(belief.improved, belief.prev,
                                               vote_yes, true, gamma_est,
                                               params);
    BeliefState next;
    next.prev = resample(belief.prev, w_prev, rng);
    next.improved = resample(belief.improved, w_impr, rng);
    next.ballot_history = belief.ballot_history;
    next.ballot_history.push_back(vote_yes);
    return next;
}

WorkerEstimate update_worker_gamma(const WorkerEstimate& estimate,
                                   bool vote_yes,
                                   const BeliefState& snapshot,
                                   const ModelParams& params) {
    check_belief(snapshot);
    if (estimate.gamma_grid.empty() ||
        estimate.gamma_grid.size() != estimate.posterior.size()) {
        throw std::invalid_argument("worker estimate grid is malformed");
    }
    const auto& prev = snapshot.prev.particles();
    const auto& impr = snapshot.improved.particles();
    const std::vector<double> w_prev(prev.size(),
                                     1.0 / static_cast<double>(prev.size()));
    const std::vector<double> w_impr(impr.size(),
                                     1.0 / static_cast<double>(impr.size()));
    const std::vector<double> p_yes = detail::grid_yes_probs(
        prev, impr, w_prev, w_impr, estimate.gamma_grid, params);

    WorkerEstimate next = estimate;
    double sum = 0.0;
    for (std::size_t k = 0; k < p_yes.size(); ++k) {
        const double like =
            std::max(vote_yes ? p_yes[k] : 1.0 - p_yes[k], 0.0);
        next.posterior[k] = estimate.posterior[k] * like;
        sum += next.posterior[k];
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw std::runtime_error(
            "gamma update degenerate: vote has zero probability on the grid");
    }
    double mean = 0.0;
    for (std::size_t k = 0; k < next.posterior.size(); ++k) {
        next.posterior[k] /= sum;
        mean += next.gamma_grid[k] * next.posterior[k];
    }
    next.gamma_estimate = mean;
    next.updates = estimate.updates + 1;
    return next;
}

} // namespace turkpf
