// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wppan {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-linear energy-harvesting circuit parameters.
struct EhParams {
    double p_max_w = 0.024;  // saturation power of the harvester
    double a_per_w = 1500.0; // hardware steepness
    double b_w = 0.0022;     // hardware turn-on offset
};

struct SolverConfig {
    double rel_tol = 1e-4;
    long max_iters = 50000;
    int window = 200;           // stall window for the stopping rule
    double projection_tol = 1e-12;
};

/// All physical and algorithmic parameters of one system instance.
/// Defaults reproduce the reference simulation setup.
struct SystemConfig {
    int num_antennas = 4;
    int num_users = 3;
    double room_x = 10.0;   // D_x, meters
    double room_y = 10.0;   // D_y, meters
    double height = 3.0;    // waveguide height, meters

    double carrier_freq_hz = 28e9;
    double refractive_index = 1.4;          // n_eff of the waveguide
    double waveguide_loss_db_per_m = 0.0;   // kappa

    double transmit_power_w = 10.0;         // 40 dBm
    double noise_power_w = 3.1622776601683794e-13;  // -95 dBm

    EhParams eh{};
    double frame_duration_s = 1.0;
    double rician_k = 10.0;                 // linear factor
    std::uint64_t rng_seed = 1;

    SolverConfig solver{};

    int max_enumeration_antennas = 16;      // subset-enumeration guard
    bool naive_freespace_scan = false;      // scan |h_dev| instead of |h_dev*h_wg|
    bool miso_eigen_beam = false;           // single dominant-eigenvector slot
    bool miso_mrc_uplink = false;           // N-antenna MRC instead of one output port

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

/// Parse a JSON config document. Every field is optional and falls back to
/// the defaults above. Power may be given as `transmit_power_w`/`noise_power_w`
/// or as `p0_dbm`/`noise_dbm`; unknown keys are rejected.
SystemConfig parse_config(const std::string& json_text);

/// Load and parse a JSON config file.
SystemConfig load_config(const std::string& path);

}  // namespace wppan
