// SPDX-License-Identifier: Apache-2.0
#include "wppan/scenario.hpp"

namespace wppan {

std::vector<Position> antenna_positions(const SystemConfig& config) {
    const int n = config.num_antennas;
    const double half = config.room_x / 2.0;
    std::vector<Position> positions;
    positions.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        positions.push_back({0.0, 0.0, config.height});
        return positions;
    }
    const double step = config.room_x / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i)
        positions.push_back({-half + step * static_cast<double>(i), 0.0, config.height});
    positions.back().x = half;  // exact endpoint regardless of rounding
    return positions;
}

ScenarioRealization sample_scenario(const SystemConfig& config, std::uint64_t trial) {
    config.validate();
    ScenarioRealization s;
    s.antenna_positions = antenna_positions(config);
    s.feed_position = {-config.room_x / 2.0, 0.0, config.height};
    s.waveguide = waveguide_channel(s.feed_position, s.antenna_positions,
                                    config.waveguide_loss_db_per_m, config.carrier_freq_hz,
                                    config.refractive_index);

    const auto m_users = static_cast<std::size_t>(config.num_users);
    s.user_positions.reserve(m_users);
    s.device_channels.reserve(m_users);
    s.channels.reserve(m_users);
    for (std::size_t m = 0; m < m_users; ++m) {
        Substream pos(config.rng_seed, trial, Stream::UserPosition,
                      static_cast<std::uint32_t>(m));
        Position user{pos.uniform(-config.room_x / 2.0, config.room_x / 2.0),
                      pos.uniform(-config.room_y / 2.0, config.room_y / 2.0), 0.0};
        s.user_positions.push_back(user);

        Substream fading(config.rng_seed, trial, Stream::DeviceFading,
                         static_cast<std::uint32_t>(m));
        auto los = device_channel(user, s.antenna_positions, config.carrier_freq_hz);
        auto dev = apply_rician(los, config.rician_k, fading);
        s.channels.push_back(combined_channel(dev, s.waveguide));
        s.device_channels.push_back(std::move(dev));
    }
    return s;
}

}  // namespace wppan
