// SPDX-License-Identifier: Apache-2.0
#include "wppan/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wppan {

int ActivationVector::count_active() const {
    int n = 0;
    for (auto b : bits) n += (b != 0);
    return n;
}

std::uint32_t ActivationVector::mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) m |= (1u << i);
    return m;
}

ActivationVector ActivationVector::one_hot(int index, int n) {
    ActivationVector v;
    v.bits.assign(static_cast<std::size_t>(n), 0);
    v.bits.at(static_cast<std::size_t>(index)) = 1;
    return v;
}

ActivationVector ActivationVector::from_mask(std::uint32_t mask, int n) {
    ActivationVector v;
    v.bits.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) v.bits[static_cast<std::size_t>(i)] = 1;
    return v;
}

ChannelVector device_channel(const Position& user, std::span<const Position> antennas,
                             double f_c) {
    const double eta = path_gain_constant(f_c);
    const double k_wave = 2.0 * std::numbers::pi / wavelength(f_c);
    ChannelVector h;
    h.kind = ChannelKind::Device;
    h.entries.reserve(antennas.size());
    for (const auto& a : antennas) {
        const double dist = distance(user, a);
        if (dist <= 0.0)
            throw std::invalid_argument("device_channel: user coincides with an antenna");
        h.entries.push_back(std::polar(eta / dist, -k_wave * dist));
    }
    return h;
}

ChannelVector waveguide_channel(const Position& feed, std::span<const Position> antennas,
                                double kappa_db_per_m, double f_c, double n_eff) {
    const double lambda_g = wavelength(f_c) / n_eff;
    const double k_guided = 2.0 * std::numbers::pi / lambda_g;
    ChannelVector h;
    h.kind = ChannelKind::Waveguide;
    h.entries.reserve(antennas.size());
    for (const auto& a : antennas) {
        const double len = distance(feed, a);
        const double amp = std::pow(10.0, -kappa_db_per_m * len / 20.0);
        h.entries.push_back(std::polar(amp, -k_guided * len));
    }
    return h;
}

ChannelVector apply_rician(const ChannelVector& los, double k_factor, Substream& stream) {
    if (los.kind != ChannelKind::Device)
        throw std::invalid_argument("apply_rician: fading applies to the radiated link only");
    if (!std::isfinite(k_factor)) return los;  // pure-LoS limit
    const double los_scale = std::sqrt(k_factor / (k_factor + 1.0));
    const double scatter_scale = std::sqrt(1.0 / (k_factor + 1.0));
    ChannelVector out;
    out.kind = los.kind;
    out.entries.reserve(los.size());
    for (const auto& e : los.entries) {
        const auto xi = stream.complex_normal();
        out.entries.push_back(los_scale * e + scatter_scale * std::abs(e) * xi);
    }
    return out;
}

ChannelVector combined_channel(const ChannelVector& device, const ChannelVector& waveguide) {
    if (device.size() != waveguide.size())
        throw std::invalid_argument("combined_channel: length mismatch");
    ChannelVector h;
    h.kind = ChannelKind::Combined;
    h.entries.reserve(device.size());
    for (std::size_t n = 0; n < device.size(); ++n)
        h.entries.push_back(device.entries[n] * waveguide.entries[n]);
    return h;
}

std::complex<double> effective_gain(const ChannelVector& h, const ActivationVector& b) {
    if (h.size() != b.bits.size())
        throw std::invalid_argument("effective_gain: length mismatch");
    std::complex<double> sum{0.0, 0.0};
    int active = 0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        if (b.bits[n]) {
            sum += h.entries[n];
            ++active;
        }
    }
    if (active == 0)
        throw std::invalid_argument("effective_gain: all-zero activation");
    return sum / std::sqrt(static_cast<double>(active));
}

}  // namespace wppan
