#include "turkpf/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pair_kernel.hpp"

namespace turkpf {

namespace {

double clamp_mean(double mu, const ModelParams& params) {
    return std::clamp(mu, params.clamp_epsilon, 1.0 - params.clamp_epsilon);
}

} // namespace

ParticleFilter::ParticleFilter(std::vector<double> particles)
    : particles_(std::move(particles)) {
    for (double q : particles_) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::invalid_argument("particles must lie in [0, 1]");
        }
    }
}

ParticleFilter init_filter(std::size_t n, double prior_a, double prior_b,
                           RandomStream& rng) {
    if (n == 0) {
        throw std::invalid_argument("filter needs at least one particle");
    }
    if (!(prior_a > 0.0) || !(prior_b > 0.0)) {
        throw std::invalid_argument("prior shapes must be positive");
    }
    std::vector<double> particles(n);
    for (double& q : particles) {
        q = rng.beta(prior_a, prior_b);
    }
    return ParticleFilter(std::move(particles));
}

ParticleFilter predict(const ParticleFilter& filter, double gamma,
                       const ModelParams& params, RandomStream& rng) {
    if (filter.empty()) {
        throw std::invalid_argument("cannot predict from an empty filter");
    }
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("gamma must be non-negative");
    }
    std::vector<double> next(filter.size());
    const auto& src = filter.particles();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double mu = clamp_mean(improvement_mean(src[i], gamma, params), params);
        next[i] = rng.beta(10.0 * mu, 10.0 * (1.0 - mu));
    }
    return ParticleFilter(std::move(next));
}

WeightVector ballot_weights(const ParticleFilter& target,
                            const ParticleFilter& other, bool vote_yes,
                            bool target_is_improved, double gamma,
                            const ModelParams& params) {
    if (target.empty() || other.empty()) {
        throw std::invalid_argument("ballot weights need non-empty filters");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be positive");
    }
    const auto& t = target.particles();
    const auto& o = other.particles();
    // Sum over the partner cloud of P(vote | pair). With g the signed
    // kernel, P(yes | prev, impr) = 1/2 + 1/2 * g(impr - prev), so each
    // raw weight is |other|/2 + s/2 * sum_j g(t_i - o_j) where s flips
    // with the vote and with which side the target is. Equal-valued
    // particles share one kernel row, so both clouds are merged first.
    const double s = (vote_yes == target_is_improved) ? 0.5 : -0.5;
    const auto merged_t = detail::merge_cloud(t);
    const auto merged_o = detail::merge_cloud(o);
    const auto count_o = detail::fold_counts(merged_o.slot,
                                             merged_o.values.size());
    const auto count_t = detail::fold_counts(merged_t.slot,
                                             merged_t.values.size());
    std::vector<double> row(merged_o.values.size());
    std::vector<double> raw_atom(merged_t.values.size());
    const double c = gamma * params.difficulty_exponent;
    double total = 0.0;
    for (std::size_t u = 0; u < merged_t.values.size(); ++u) {
        detail::signed_power_gap(merged_t.values[u], merged_o.values, c,
                                 row.data());
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            acc += count_o[j] * row[j];
        }
        raw_atom[u] = 0.5 * static_cast<double>(o.size()) + s * acc;
        total += count_t[u] * raw_atom[u];
    }
    WeightVector result;
    result.weights.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        result.weights[i] = raw_atom[merged_t.slot[i]];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::runtime_error(
            "ballot weights degenerate: observed vote has zero probability "
            "under the current belief");
    }
    for (double& w : result.weights) {
        w /= total;
    }
    return result;
}

ParticleFilter resample(const ParticleFilter& filter,
                        const WeightVector& weights, RandomStream& rng) {
    if (filter.empty()) {
        throw std::invalid_argument("cannot resample an empty filter");
    }
    if (weights.weights.size() != filter.size()) {
        throw std::invalid_argument("weight count does not match filter");
    }
    std::vector<double> cumulative(weights.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.weights.size(); ++i) {
        const double w = weights.weights[i];
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("weights must be finite and non-negative");
        }
        acc += w;
        cumulative[i] = acc;
    }
    if (!(acc > 0.0)) {
        throw std::invalid_argument("weights must not all be zero");
    }
    const auto& src = filter.particles();
    std::vector<double> out(src.size());
    for (double& q : out) {
        const double u = rng.uniform() * acc;
        const auto it =
            std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative.begin()), src.size() - 1);
        q = src[idx];
    }
    return ParticleFilter(std::move(out));
}

double mean_quality(const ParticleFilter& filter) {
    if (filter.empty()) {
        throw std::invalid_argument("mean of an empty filter");
    }
    double acc = 0.0;
    for (double q : filter.particles()) {
        acc += q;
    }
    return acc / static_cast<double>(filter.size());
}

double expected_utility(const ParticleFilter& filter, const ModelParams& params) {
    if (filter.empty()) {
        throw std::invalid_argument("expected utility of an empty filter");
    }
    double acc = 0.0;
    for (double q : filter.particles()) {
        acc += utility(q, params);
    }
    return acc / static_cast<double>(filter.size());
}

} // namespace turkpf
