#include "pair_kernel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace turkpf::detail {

namespace {

using ArrayMap = Eigen::Map<Eigen::ArrayXd>;
using ConstArrayMap = Eigen::Map<const Eigen::ArrayXd>;

} // namespace

MergedCloud merge_cloud(std::span<const double> v) {
    std::vector<std::int32_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int32_t x, std::int32_t y) { return v[x] < v[y]; });
    MergedCloud out;
    out.slot.resize(v.size());
    out.values.reserve(v.size());
    for (std::int32_t idx : order) {
        if (out.values.empty() || v[idx] != out.values.back()) {
            out.values.push_back(v[idx]);
        }
        out.slot[idx] = static_cast<std::int32_t>(out.values.size() - 1);
    }
    return out;
}

std::vector<double> fold_weights(std::span<const double> w,
                                 const std::vector<std::int32_t>& slot,
                                 std::size_t atoms) {
    std::vector<double> folded(atoms, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        folded[slot[i]] += w[i];
    }
    return folded;
}

std::vector<double> fold_counts(const std::vector<std::int32_t>& slot,
                                std::size_t atoms) {
    std::vector<double> counts(atoms, 0.0);
    for (std::int32_t s : slot) {
        counts[s] += 1.0;
    }
    return counts;
}

void signed_power_gap(double x, std::span<const double> a, double c,
                      double* out) {
    const auto n = static_cast<Eigen::Index>(a.size());
    ConstArrayMap av(a.data(), n);
    ArrayMap ov(out, n);
    ov = x - av;
    if (c == 1.0) {
        return; // |x|^1 with sign restored is the identity
    }
    if (c == 0.5) {
        ov = ov.sign() * ov.abs().sqrt();
        return;
    }
    // General exponent: exp(c * log|x|) vectorizes far better than pow and
    // log(0) = -inf propagates to exp(-inf) = 0, which is the right value.
    ov = ov.sign() * (ov.abs().log() * c).exp();
}

PairKernel::PairKernel(std::span<const double> a, std::span<const double> b,
                       double gamma, const ModelParams& params, bool cache)
    : c_(gamma * params.difficulty_exponent), cached_(cache) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("pair kernel needs non-empty clouds");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be positive");
    }
    auto merged_a = merge_cloud(a);
    auto merged_b = merge_cloud(b);
    unique_a_ = std::move(merged_a.values);
    slot_a_ = std::move(merged_a.slot);
    unique_b_ = std::move(merged_b.values);
    slot_b_ = std::move(merged_b.slot);
    if (cached_) {
        matrix_.reset(new double[unique_a_.size() * unique_b_.size()]);
        for (std::size_t i = 0; i < unique_b_.size(); ++i) {
            signed_power_gap(unique_b_[i], unique_a_, c_,
                             matrix_.get() + i * unique_a_.size());
        }
    }
}

BallotExpansion PairKernel::expand(std::span<const double> w_a,
                                   std::span<const double> w_b) const {
    if (w_a.size() != slot_a_.size() || w_b.size() != slot_b_.size()) {
        throw std::invalid_argument("weight sizes do not match clouds");
    }
    const auto na = static_cast<Eigen::Index>(unique_a_.size());
    const auto wa_folded = fold_weights(w_a, slot_a_, unique_a_.size());
    const auto wb_folded = fold_weights(w_b, slot_b_, unique_b_.size());
    ConstArrayMap wa(wa_folded.data(), na);

    std::vector<double> yes_atom(unique_b_.size());
    Eigen::ArrayXd prev_acc = Eigen::ArrayXd::Zero(na);
    std::vector<double> row_storage;
    if (!cached_) {
        row_storage.resize(unique_a_.size());
    }
    double p_yes_acc = 0.0;
    for (std::size_t i = 0; i < unique_b_.size(); ++i) {
        const double* row_ptr = cached_ ? matrix_.get() + i * unique_a_.size()
                                        : row_storage.data();
        if (!cached_) {
            signed_power_gap(unique_b_[i], unique_a_, c_, row_storage.data());
        }
        ConstArrayMap row(row_ptr, na);
        const double yes_i = 0.5 + 0.5 * (wa * row).sum();
        yes_atom[i] = yes_i;
        p_yes_acc += wb_folded[i] * yes_i;
        prev_acc += wb_folded[i] * row;
    }
    // prev_acc currently holds sum_i w_b[i] * g(b_i - a_j).
    BallotExpansion out;
    out.p_yes = p_yes_acc;
    out.yes_prob_impr.resize(slot_b_.size());
    for (std::size_t i = 0; i < slot_b_.size(); ++i) {
        out.yes_prob_impr[i] = yes_atom[slot_b_[i]];
    }
    out.yes_prob_prev.resize(slot_a_.size());
    for (std::size_t j = 0; j < slot_a_.size(); ++j) {
        out.yes_prob_prev[j] = 0.5 + 0.5 * prev_acc[slot_a_[j]];
    }
    return out;
}

std::vector<double> grid_yes_probs(std::span<const double> a,
                                   std::span<const double> b,
                                   std::span<const double> w_a,
                                   std::span<const double> w_b,
                                   std::span<const double> gammas,
                                   const ModelParams& params) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("pair kernel needs non-empty clouds");
    }
    if (w_a.size() != a.size() || w_b.size() != b.size()) {
        throw std::invalid_argument("weight sizes do not match clouds");
    }
    const auto merged_a = merge_cloud(a);
    const auto merged_b = merge_cloud(b);
    const auto wa_folded = fold_weights(w_a, merged_a.slot,
                                        merged_a.values.size());
    const auto wb_folded = fold_weights(w_b, merged_b.slot,
                                        merged_b.values.size());
    const auto na = static_cast<Eigen::Index>(merged_a.values.size());
    ConstArrayMap av(merged_a.values.data(), na);
    ConstArrayMap wa(wa_folded.data(), na);

    std::vector<double> acc(gammas.size(), 0.0);
    Eigen::ArrayXd diff(na), log_gap(na), weighted_sign(na), powed(na);
    for (std::size_t i = 0; i < merged_b.values.size(); ++i) {
        diff = merged_b.values[i] - av;
        log_gap = diff.abs().log(); // -inf at zero gaps; exp() maps it to 0
        weighted_sign = wa * diff.sign();
        for (std::size_t k = 0; k < gammas.size(); ++k) {
            const double c = gammas[k] * params.difficulty_exponent;
            powed = (log_gap * c).exp();
            acc[k] += wb_folded[i] * (weighted_sign * powed).sum();
        }
    }
    std::vector<double> p(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        p[k] = 0.5 + 0.5 * acc[k];
    }
    return p;
}

} // namespace turkpf::detail
