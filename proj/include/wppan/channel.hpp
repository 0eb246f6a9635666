// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "wppan/geometry.hpp"
#include "wppan/rng.hpp"

namespace wppan {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

enum class ChannelKind { Device, Waveguide, Combined };

/// Per-antenna complex channel coefficients for one user (or the shared
/// in-waveguide channel).
struct ChannelVector {
    std::vector<std::complex<double>> entries;
    ChannelKind kind = ChannelKind::Device;

    std::size_t size() const { return entries.size(); }
};

/// Binary on/off pattern over the antennas of one timeslot.
struct ActivationVector {
    std::vector<std::uint8_t> bits;

    int count_active() const;
    bool any() const { return count_active() > 0; }
    std::uint32_t mask() const;

    static ActivationVector one_hot(int index, int n);
    static ActivationVector from_mask(std::uint32_t mask, int n);
};

inline double wavelength(double f_c) { return kSpeedOfLight / f_c; }

/// Free-space amplitude constant: c / (4 pi f_c).
inline double path_gain_constant(double f_c) {
    return kSpeedOfLight / (4.0 * std::numbers::pi * f_c);
}

/// Line-of-sight channel from a user to each radiating element:
/// eta * exp(-j 2pi/lambda * dist) / dist.
ChannelVector device_channel(const Position& user, std::span<const Position> antennas,
                             double f_c);

/// In-guide channel from the feed to each element: amplitude 10^(-kappa L/20),
/// phase accumulated with the guided wavelength lambda/n_eff.
ChannelVector waveguide_channel(const Position& feed, std::span<const Position> antennas,
                                double kappa_db_per_m, double f_c, double n_eff);

/// Per-antenna Rician small-scale fading around a LoS channel. The scattered
/// part is scaled by |los| so the expected entry power stays |los|^2.
/// An infinite K factor returns the LoS channel unchanged.
ChannelVector apply_rician(const ChannelVector& los, double k_factor, Substream& stream);

/// Elementwise (Hadamard) product of the device and waveguide channels.
ChannelVector combined_channel(const ChannelVector& device, const ChannelVector& waveguide);

/// Coherent sum over active antennas, normalized by sqrt(#active):
/// g = sum_n b_n h_n / sqrt(sum_n b_n). Rejects all-zero activations.
std::complex<double> effective_gain(const ChannelVector& h, const ActivationVector& b);

}  // namespace wppan
