// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wppan/channel.hpp"
#include "wppan/config.hpp"
#include "wppan/geometry.hpp"

namespace wppan {

/// One Monte Carlo draw: user drops plus the channel vectors they induce.
struct ScenarioRealization {
    std::vector<Position> user_positions;       // z = 0
    std::vector<Position> antenna_positions;    // y = 0, z = height
    Position feed_position;                     // (-D_x/2, 0, height)
    ChannelVector waveguide;                    // shared in-guide channel
    std::vector<ChannelVector> device_channels; // faded free-space links, per user
    std::vector<ChannelVector> channels;        // combined, per user
};

/// Uniformly spaced radiating elements on the segment y=0, z=height with
/// inclusive endpoints at +-D_x/2; a single element sits at the center.
std::vector<Position> antenna_positions(const SystemConfig& config);

/// Draw one scenario. All randomness derives from (config.rng_seed, trial);
/// the same pair reproduces the realization bit for bit.
ScenarioRealization sample_scenario(const SystemConfig& config, std::uint64_t trial);

}  // namespace wppan
