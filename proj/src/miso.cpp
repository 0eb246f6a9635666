// SPDX-License-Identifier: Apache-2.0
#include "wppan/miso.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wppan/channel.hpp"
#include "wppan/scenario.hpp"

namespace wppan {

namespace {

double norm_sq(const std::vector<std::complex<double>>& v) {
    double acc = 0.0;
    for (const auto& e : v) acc += std::norm(e);
    return acc;
}

std::complex<double> inner(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

// Dominant eigenvector of sum_m h_m h_m^H by power iteration.
std::vector<std::complex<double>> dominant_beam(
    const std::vector<std::vector<std::complex<double>>>& channels) {
    const std::size_t n = channels.front().size();
    std::vector<std::complex<double>> beam(n, {1.0, 0.0});
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<std::complex<double>> next(n, {0.0, 0.0});
        for (const auto& h : channels) {
            const auto coeff = inner(h, beam);
            for (std::size_t i = 0; i < n; ++i) next[i] += h[i] * coeff;
        }
        const double scale = std::sqrt(norm_sq(next));
        if (scale <= 0.0) break;
        for (auto& e : next) e /= scale;
        beam = std::move(next);
    }
    return beam;
}

}  // namespace

std::vector<std::complex<double>> miso_channel(const Position& user, const Position& bs,
                                               int n_antennas, double f_c, double k_factor,
                                               Substream& stream) {
    const double dist = distance(user, bs);
    if (dist <= 0.0) throw std::invalid_argument("miso_channel: user coincides with the BS");
    const double amp = path_gain_constant(f_c) / dist;
    const double phase = -2.0 * std::numbers::pi * dist / wavelength(f_c);
    const auto los = std::polar(amp, phase);

    std::vector<std::complex<double>> h(static_cast<std::size_t>(n_antennas));
    if (!std::isfinite(k_factor)) {
        for (auto& e : h) e = los;
        return h;
    }
    const double los_scale = std::sqrt(k_factor / (k_factor + 1.0));
    const double scatter_scale = std::sqrt(1.0 / (k_factor + 1.0));
    for (auto& e : h) e = los_scale * los + scatter_scale * amp * stream.complex_normal();
    return h;
}

HarvestMatrix miso_harvest_matrix(const std::vector<std::vector<std::complex<double>>>& channels,
                                  const SystemConfig& config) {
    const std::size_t m_users = channels.size();
    if (m_users == 0) throw std::invalid_argument("miso_harvest_matrix: no users");

    if (config.miso_eigen_beam) {
        const auto beam = dominant_beam(channels);
        HarvestMatrix phi(m_users, 1);
        for (std::size_t m = 0; m < m_users; ++m) {
            const double p_rx = config.transmit_power_w * std::norm(inner(channels[m], beam));
            phi.at(m, 0) = harvested_power(p_rx, config.eh);
        }
        return phi;
    }

    // One MRT slot per user: slot q radiates h_q / ||h_q||.
    HarvestMatrix phi(m_users, m_users);
    for (std::size_t q = 0; q < m_users; ++q) {
        const double hq_norm2 = norm_sq(channels[q]);
        for (std::size_t m = 0; m < m_users; ++m) {
            const double p_rx =
                hq_norm2 > 0.0
                    ? config.transmit_power_w * std::norm(inner(channels[q], channels[m])) /
                          hq_norm2
                    : 0.0;
            phi.at(m, q) = harvested_power(p_rx, config.eh);
        }
    }
    return phi;
}

Schedule solve_miso(const std::vector<std::vector<std::complex<double>>>& channels,
                    const SystemConfig& config) {
    AllocationProblem problem;
    problem.harvest = miso_harvest_matrix(channels, config);
    problem.frame_duration = config.frame_duration_s;
    problem.uplink_gains.reserve(channels.size());
    // The benchmark is granted N transmit antennas; uplink reception runs
    // through one output port unless MRC is switched on explicitly.
    for (const auto& h : channels) {
        const double gain = config.miso_mrc_uplink ? norm_sq(h) : std::norm(h.front());
        problem.uplink_gains.push_back(gain / config.noise_power_w);
    }
    return solve(problem, config.solver);
}

}  // namespace wppan
