// SPDX-License-Identifier: Apache-2.0
#include "wppan/activation.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace wppan {

namespace {

void check_guard(int n, int n_max) {
    if (n < 1) throw std::invalid_argument("subset enumeration needs n >= 1");
    if (n > 31 || n > n_max)
        throw std::invalid_argument(
            "refusing to enumerate 2^" + std::to_string(n) +
            " - 1 antenna subsets (guard is " + std::to_string(n_max) +
            "); the cost grows exponentially in the antenna count");
}

}  // namespace

std::vector<ActivationVector> enumerate_subsets(int n, int n_max) {
    check_guard(n, n_max);
    const std::uint32_t total = (1u << n) - 1u;
    std::vector<ActivationVector> subsets;
    subsets.reserve(total);
    for (std::uint32_t mask = 1; mask <= total; ++mask)
        subsets.push_back(ActivationVector::from_mask(mask, n));
    return subsets;
}

ActivationVector best_activation(const ChannelVector& h, int n_max) {
    const int n = static_cast<int>(h.size());
    check_guard(n, n_max);
    const std::uint32_t total = (1u << n) - 1u;
    double best_gain = -1.0;
    int best_count = n + 1;
    std::uint32_t best_mask = 1;
    for (std::uint32_t mask = 1; mask <= total; ++mask) {
        std::complex<double> sum{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sum += h.entries[static_cast<std::size_t>(i)];
        const int count = std::popcount(mask);
        const double gain = std::norm(sum) / static_cast<double>(count);
        // Ties keep the sparsest pattern; masks ascend, so the lowest mask
        // wins automatically among equal-count ties.
        if (gain > best_gain || (gain == best_gain && count < best_count)) {
            best_gain = gain;
            best_count = count;
            best_mask = mask;
        }
    }
    return ActivationVector::from_mask(best_mask, n);
}

ActivationVector best_one_hot(const ChannelVector& h) {
    if (h.size() == 0) throw std::invalid_argument("best_one_hot: empty channel");
    std::size_t best = 0;
    double best_mag = std::abs(h.entries[0]);
    for (std::size_t n = 1; n < h.size(); ++n) {
        const double mag = std::abs(h.entries[n]);
        if (mag > best_mag) {
            best_mag = mag;
            best = n;
        }
    }
    return ActivationVector::one_hot(static_cast<int>(best), static_cast<int>(h.size()));
}

ActivationPlan build_plan(PlanMode mode, std::span<const ChannelVector> channels, int n_max,
                          std::span<const ChannelVector> one_hot_scan) {
    if (channels.empty()) throw std::invalid_argument("build_plan: no users");
    const int n = static_cast<int>(channels.front().size());
    if (one_hot_scan.empty()) one_hot_scan = channels;
    if (one_hot_scan.size() != channels.size())
        throw std::invalid_argument("build_plan: scan channel count mismatch");

    ActivationPlan plan;
    plan.mode = mode;
    switch (mode) {
        case PlanMode::Search:
            plan.downlink_slots = enumerate_subsets(n, n_max);
            for (const auto& h : channels)
                plan.uplink_vectors.push_back(best_activation(h, n_max));
            break;
        case PlanMode::Greedy:
            for (const auto& h : channels) {
                auto b = best_activation(h, n_max);
                plan.downlink_slots.push_back(b);
                plan.uplink_vectors.push_back(std::move(b));
            }
            break;
        case PlanMode::Naive:
            for (const auto& h : one_hot_scan) {
                auto b = best_one_hot(h);
                plan.downlink_slots.push_back(b);
                plan.uplink_vectors.push_back(std::move(b));
            }
            break;
    }
    return plan;
}

}  // namespace wppan
