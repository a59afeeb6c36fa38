#pragma once

#include <cstddef>
#include <vector>

#include "turkpf/quality_model.hpp"
#include "turkpf/random.hpp"

namespace turkpf {

// Unweighted particle cloud over artifact quality. Weights only exist
// transiently, between a ballot observation and the resampling step that
// folds them back into an unweighted cloud.
class ParticleFilter {
public:
    ParticleFilter() = default;
    explicit ParticleFilter(std::vector<double> particles);

    const std::vector<double>& particles() const { return particles_; }
    std::size_t size() const { return particles_.size(); }
    bool empty() const { return particles_.empty(); }

private:
    std::vector<double> particles_;
};

// Normalized importance weights over the particles of one filter.
struct WeightVector {
    std::vector<double> weights;
};

// Draws n particles from the Beta(prior_a, prior_b) quality prior.
ParticleFilter init_filter(std::size_t n, double prior_a, double prior_b,
                           RandomStream& rng);

// Pushes every particle through the improvement model of a gamma-worker:
// each particle q is replaced by one draw from
// Beta(10 * mu, 10 * (1 - mu)) with mu = improvement_mean(q, gamma)
// clamped into [clamp_epsilon, 1 - clamp_epsilon]. gamma may be zero
// (a perfect improver); the ballot-side operations require gamma > 0.
ParticleFilter predict(const ParticleFilter& filter, double gamma,
                       const ModelParams& params, RandomStream& rng);

// Importance weights for `target` after observing one ballot vote, with
// the comparison partner marginalized over `other`. target_is_improved
// tells which side of the "is the improved version better?" question the
// target filter represents. Weights are returned normalized.
WeightVector ballot_weights(const ParticleFilter& target,
                            const ParticleFilter& other, bool vote_yes,
                            bool target_is_improved, double gamma,
                            const ModelParams& params);

// Multinomial resampling: draws size() particles with replacement,
// proportional to the given weights.
ParticleFilter resample(const ParticleFilter& filter,
                        const WeightVector& weights, RandomStream& rng);

double mean_quality(const ParticleFilter& filter);

// Monte Carlo expectation of utility() under the filter.
double expected_utility(const ParticleFilter& filter, const ModelParams& params);

} // namespace turkpf
