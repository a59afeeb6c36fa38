#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "turkpf/quality_model.hpp"

// Internal vectorized primitives behind ballot weighting and planning.
// The whole observation model reduces to the signed kernel
//   g(x) = sign(x) * |x|^(gamma * M),
// with M the difficulty exponent, because expanding accuracy over the
// difficulty curve gives P(yes | q, q') = 1/2 + 1/2 * g(q' - q).
// Everything quadratic in the particle count funnels through the row
// routines here.
//
// Resampled clouds carry many duplicate atoms, and every quantity computed
// here depends on particles only through their values, so each cloud is
// first merged to its unique values. Per-particle weights fold onto the
// merged atoms (a vote likelihood is constant across equal values, so this
// commutes with any reweighting the planner applies) and per-particle
// outputs are scattered back, making the merge exact up to summation order.

namespace turkpf::detail {

// out[j] = sign(x - a[j]) * |x - a[j]|^c for all j. Requires c > 0;
// a zero gap maps to exactly 0.
void signed_power_gap(double x, std::span<const double> a, double c,
                      double* out);

struct MergedCloud {
    std::vector<double> values;     // unique, ascending
    std::vector<std::int32_t> slot; // original index -> position in values
};

MergedCloud merge_cloud(std::span<const double> v);

// Weights of equal-valued particles add; folding in original order keeps
// the accumulation deterministic.
std::vector<double> fold_weights(std::span<const double> w,
                                 const std::vector<std::int32_t>& slot,
                                 std::size_t atoms);

// Multiplicity of each merged atom, as doubles ready for arithmetic.
std::vector<double> fold_counts(const std::vector<std::int32_t>& slot,
                                std::size_t atoms);

struct BallotExpansion {
    // P(yes vote | particle), partner marginalized under its weights.
    std::vector<double> yes_prob_prev;
    std::vector<double> yes_prob_impr;
    double p_yes = 0.5; // predicted probability of a yes vote
};

// Pairwise ballot geometry between the previous-version cloud `a` and the
// improved-version cloud `b` at one worker gamma. With `cache` set, the
// kernel matrix over merged values is stored so that further expansions
// under fresh weights cost only dot products; both modes accumulate in the
// same order and produce bit-identical results.
class PairKernel {
public:
    PairKernel(std::span<const double> a, std::span<const double> b,
               double gamma, const ModelParams& params, bool cache);

    BallotExpansion expand(std::span<const double> w_a,
                           std::span<const double> w_b) const;

private:
    std::vector<double> unique_a_, unique_b_; // ascending merged values
    std::vector<std::int32_t> slot_a_, slot_b_; // particle -> merged atom
    double c_;
    bool cached_;
    std::unique_ptr<double[]> matrix_; // |unique_b_| x |unique_a_| rows
};

// p_yes between the two weighted clouds for every gamma in `gammas`,
// sharing one log|b_i - a_j| pass across the whole grid.
std::vector<double> grid_yes_probs(std::span<const double> a,
                                   std::span<const double> b,
                                   std::span<const double> w_a,
                                   std::span<const double> w_b,
                                   std::span<const double> gammas,
                                   const ModelParams& params);

} // namespace turkpf::detail
