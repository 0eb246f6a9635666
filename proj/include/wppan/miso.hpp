// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wppan/allocator.hpp"
#include "wppan/config.hpp"
#include "wppan/geometry.hpp"
#include "wppan/rng.hpp"

namespace wppan {

/// Rician channel from an N-element co-located array to one user. All
/// elements share the free-space path gain eta/dist and the LoS phase
/// -2 pi dist / lambda; scattering is i.i.d. per element.
std::vector<std::complex<double>> miso_channel(const Position& user, const Position& bs,
                                               int n_antennas, double f_c, double k_factor,
                                               Substream& stream);

/// Fixed-antenna benchmark: BS at the feed location, M maximum-ratio
/// transmission downlink slots (slot q beams at user q), uplink received on
/// a single output port (N-antenna MRC behind config.miso_mrc_uplink).
/// Reuses the timeslot allocator.
Schedule solve_miso(const std::vector<std::vector<std::complex<double>>>& channels,
                    const SystemConfig& config);

/// Harvest matrix of the benchmark: entry (m, q) applies the harvester curve
/// to P0 |h_m^H h_q|^2 / ||h_q||^2 (or to the dominant-eigenvector beam when
/// config.miso_eigen_beam is set, giving a single slot).
HarvestMatrix miso_harvest_matrix(const std::vector<std::vector<std::complex<double>>>& channels,
                                  const SystemConfig& config);

}  // namespace wppan
