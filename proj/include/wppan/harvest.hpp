// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wppan/activation.hpp"
#include "wppan/channel.hpp"
#include "wppan/config.hpp"

namespace wppan {

/// M x |Q| matrix of harvested powers (watts), one row per user, one column
/// per downlink slot.
struct HarvestMatrix {
    std::size_t users = 0;
    std::size_t slots = 0;
    std::vector<double> values;  // row-major

    HarvestMatrix() = default;
    HarvestMatrix(std::size_t m, std::size_t q) : users(m), slots(q), values(m * q, 0.0) {}

    double& at(std::size_t m, std::size_t q) { return values[m * slots + q]; }
    double at(std::size_t m, std::size_t q) const { return values[m * slots + q]; }
};

/// RF power collected by a user under a given activation: |g|^2 * P0.
double received_power(const ChannelVector& h, const ActivationVector& b, double p0_w);

/// Non-linear harvester transfer curve,
/// p_max * (1 - exp(-a P)) / (1 + exp(-a (P - b))). Rejects negative input.
double harvested_power(double p_in_w, const EhParams& params);

/// Harvested power per (user, downlink slot) for a whole activation plan.
HarvestMatrix harvest_matrix(std::span<const ChannelVector> channels,
                             const ActivationPlan& plan, double p0_w,
                             const EhParams& params);

}  // namespace wppan
