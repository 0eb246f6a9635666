// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "wppan/channel.hpp"

namespace wppan {

enum class PlanMode { Search, Greedy, Naive };

/// Downlink slot activations plus per-user uplink activations chosen by one
/// of the three strategies.
struct ActivationPlan {
    PlanMode mode = PlanMode::Search;
    std::vector<ActivationVector> downlink_slots;   // |Q|
    std::vector<ActivationVector> uplink_vectors;   // M

    std::size_t slot_count() const { return downlink_slots.size(); }
};

/// All 2^n - 1 non-empty activation patterns in binary-counting order
/// (mask 1, 2, 3, ...; bit k = antenna k). Guarded against exponential n.
std::vector<ActivationVector> enumerate_subsets(int n, int n_max = 16);

/// Exhaustive argmax of |effective_gain(h, b)|^2 over non-empty activations.
/// Ties broken by fewest active antennas, then lowest mask.
ActivationVector best_activation(const ChannelVector& h, int n_max = 16);

/// One-hot at the entry of largest magnitude; ties go to the lowest index.
ActivationVector best_one_hot(const ChannelVector& h);

/// Assemble the full plan for M users.
///   Search: downlink = every non-empty subset, uplink = per-user argmax.
///   Greedy: uplink = per-user argmax, downlink slot m copies uplink m.
///   Naive:  both one-hot per user, selected by scanning `one_hot_scan`
///           (defaults to `channels`).
ActivationPlan build_plan(PlanMode mode, std::span<const ChannelVector> channels,
                          int n_max = 16,
                          std::span<const ChannelVector> one_hot_scan = {});

}  // namespace wppan
