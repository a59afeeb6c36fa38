#pragma once

namespace turkpf {

// Fixed constants of the generative model shared by belief tracking,
// planning and the simulated environment.
struct ModelParams {
    double difficulty_exponent = 0.5; // exponent M in the difficulty curve
    double utility_max = 1000.0;      // utility of a perfect artifact
    double improvement_rate = 0.4;    // fraction of the remaining gap a
                                      // skilled worker closes on average
    double clamp_epsilon = 1e-3;      // keeps Beta means away from {0, 1}
    double prior_alpha = 1.0;         // initial quality prior Beta(1, 9)
    double prior_beta = 9.0;
    double initial_gamma = 1.0;       // planning gamma before any evidence

    // Throws std::invalid_argument when any field is out of range.
    void validate() const;
};

// Ballot difficulty of comparing artifacts of quality q and q_prime.
// Equal qualities are maximally hard (1); distant ones easy (-> 0).
double difficulty(double q, double q_prime, const ModelParams& params);

// Probability that a worker of error parameter gamma answers a ballot
// question correctly, given its difficulty d. Ranges in (0.5, 1] and
// degrades toward coin-flipping as gamma grows.
double ballot_accuracy(double d, double gamma);

// Probability that a gamma-worker votes "yes, the improved version is
// better" when the true qualities are q (original) and q_prime (improved).
double prob_yes(double q, double q_prime, double gamma, const ModelParams& params);

// Probability of an arbitrary vote; exact complement of prob_yes.
double prob_vote(bool vote_yes, double q, double q_prime, double gamma,
                 const ModelParams& params);

// Mean of the quality distribution produced by asking a gamma-worker to
// improve an artifact of quality q. Workers with gamma >= 2 stop helping.
double improvement_mean(double q, double gamma, const ModelParams& params);

// Requester utility of submitting an artifact of quality q. Convex,
// exponential in q, anchored at utility(0) = 0 and utility(1) = utility_max.
double utility(double q, const ModelParams& params);

// Inverse of utility(); maps a utility value back to quality.
double inverse_utility(double u, const ModelParams& params);

} // namespace turkpf
