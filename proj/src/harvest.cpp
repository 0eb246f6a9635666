// SPDX-License-Identifier: Apache-2.0
#include "wppan/harvest.hpp"

#include <cmath>
#include <stdexcept>

namespace wppan {

double received_power(const ChannelVector& h, const ActivationVector& b, double p0_w) {
    const auto g = effective_gain(h, b);
    return std::norm(g) * p0_w;
}

double harvested_power(double p_in_w, const EhParams& params) {
    if (p_in_w < 0.0)
        throw std::invalid_argument("harvested_power: negative input power");
    const double num = 1.0 - std::exp(-params.a_per_w * p_in_w);
    const double den = 1.0 + std::exp(-params.a_per_w * (p_in_w - params.b_w));
    return params.p_max_w * num / den;
}

HarvestMatrix harvest_matrix(std::span<const ChannelVector> channels,
                             const ActivationPlan& plan, double p0_w,
                             const EhParams& params) {
    if (plan.downlink_slots.empty())
        throw std::invalid_argument("harvest_matrix: plan has no downlink slots");
    HarvestMatrix phi(channels.size(), plan.downlink_slots.size());
    for (std::size_t m = 0; m < channels.size(); ++m)
        for (std::size_t q = 0; q < plan.downlink_slots.size(); ++q)
            phi.at(m, q) =
                harvested_power(received_power(channels[m], plan.downlink_slots[q], p0_w),
                                params);
    return phi;
}

}  // namespace wppan
