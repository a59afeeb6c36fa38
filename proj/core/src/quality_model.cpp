#include "turkpf/quality_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace turkpf {

namespace {

void check_unit(double q, const char* what) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be positive");
    }
}

} // namespace

void ModelParams::validate() const {
    if (!(difficulty_exponent > 0.0)) {
        throw std::invalid_argument("difficulty_exponent must be positive");
    }
    if (!(utility_max > 0.0)) {
        throw std::invalid_argument("utility_max must be positive");
    }
    if (!(improvement_rate >= 0.0 && improvement_rate <= 1.0)) {
        throw std::invalid_argument("improvement_rate must lie in [0, 1]");
    }
    if (!(clamp_epsilon > 0.0 && clamp_epsilon < 0.5)) {
        throw std::invalid_argument("clamp_epsilon must lie in (0, 0.5)");
    }
    if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) {
        throw std::invalid_argument("prior shapes must be positive");
    }
    if (!(initial_gamma > 0.0)) {
        throw std::invalid_argument("initial_gamma must be positive");
    }
}

double difficulty(double q, double q_prime, const ModelParams& params) {
    check_unit(q, "q");
    check_unit(q_prime, "q_prime");
    return 1.0 - std::pow(std::abs(q - q_prime), params.difficulty_exponent);
}

double ballot_accuracy(double d, double gamma) {
    if (!(d >= 0.0 && d <= 1.0)) {
        throw std::invalid_argument("difficulty must lie in [0, 1]");
    }
    check_gamma(gamma);
    return 0.5 * (1.0 + std::pow(1.0 - d, gamma));
}

double prob_yes(double q, double q_prime, double gamma, const ModelParams& params) {
    const double a = ballot_accuracy(difficulty(q, q_prime, params), gamma);
    // Correct answer is "yes" exactly when the improved version really is
    // better; at a tie both branches collapse to 1/2.
    return q_prime > q ? a : 1.0 - a;
}

double prob_vote(bool vote_yes, double q, double q_prime, double gamma,
                 const ModelParams& params) {
    const double p = prob_yes(q, q_prime, gamma, params);
    return vote_yes ? p : 1.0 - p;
}

double improvement_mean(double q, double gamma, const ModelParams& params) {
    check_unit(q, "q");
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("gamma must be non-negative");
    }
    const double skill = std::max(0.0, 1.0 - gamma / 2.0);
    return q + params.improvement_rate * (1.0 - q) * skill;
}

double utility(double q, const ModelParams& params) {
    check_unit(q, "q");
    return params.utility_max * (std::exp(q) - 1.0) / (std::exp(1.0) - 1.0);
}

double inverse_utility(double u, const ModelParams& params) {
    if (!(u >= 0.0 && u <= params.utility_max)) {
        throw std::invalid_argument("utility out of range");
    }
    return std::log(1.0 + u * (std::exp(1.0) - 1.0) / params.utility_max);
}

} // namespace turkpf
