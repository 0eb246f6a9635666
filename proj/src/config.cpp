// SPDX-License-Identifier: Apache-2.0
#include "wppan/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wppan {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

void SystemConfig::validate() const {
    require(num_antennas >= 1, "num_antennas must be >= 1");
    require(num_users >= 1, "num_users must be >= 1");
    require(room_x > 0 && room_y > 0, "room dimensions must be positive");
    require(height > 0, "height must be positive");
    require(carrier_freq_hz > 0, "carrier_freq_hz must be positive");
    require(refractive_index >= 1, "refractive_index must be >= 1");
    require(waveguide_loss_db_per_m >= 0, "waveguide_loss_db_per_m must be >= 0");
    require(transmit_power_w > 0, "transmit power must be positive");
    require(noise_power_w > 0, "noise power must be positive");
    require(frame_duration_s > 0, "frame_duration_s must be positive");
    require(rician_k >= 0, "rician_k must be >= 0");
    require(eh.p_max_w > 0 && eh.a_per_w > 0 && eh.b_w > 0,
            "energy-harvesting parameters must be strictly positive");
    require(solver.rel_tol > 0, "solver.rel_tol must be positive");
    require(solver.max_iters > 0, "solver.max_iters must be positive");
    require(solver.window > 0, "solver.window must be positive");
    require(max_enumeration_antennas >= 1, "max_enumeration_antennas must be >= 1");
}

SystemConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "top-level document must be an object");

    static const std::set<std::string> known = {
        "num_antennas", "num_users", "room_x", "room_y", "height",
        "carrier_freq_hz", "refractive_index", "waveguide_loss_db_per_m",
        "transmit_power_w", "noise_power_w", "p0_dbm", "noise_dbm",
        "eh", "frame_duration_s", "rician_k", "rng_seed", "solver",
        "max_enumeration_antennas", "naive_freespace_scan", "miso_eigen_beam",
        "miso_mrc_uplink"};
    for (const auto& [key, _] : j.items())
        require(known.count(key) > 0, "unknown key '" + key + "'");

    SystemConfig cfg;
    read(j, "num_antennas", cfg.num_antennas);
    read(j, "num_users", cfg.num_users);
    read(j, "room_x", cfg.room_x);
    read(j, "room_y", cfg.room_y);
    read(j, "height", cfg.height);
    read(j, "carrier_freq_hz", cfg.carrier_freq_hz);
    read(j, "refractive_index", cfg.refractive_index);
    read(j, "waveguide_loss_db_per_m", cfg.waveguide_loss_db_per_m);

    require(!(j.contains("transmit_power_w") && j.contains("p0_dbm")),
            "give transmit_power_w or p0_dbm, not both");
    require(!(j.contains("noise_power_w") && j.contains("noise_dbm")),
            "give noise_power_w or noise_dbm, not both");
    read(j, "transmit_power_w", cfg.transmit_power_w);
    read(j, "noise_power_w", cfg.noise_power_w);
    if (j.contains("p0_dbm")) cfg.transmit_power_w = dbm_to_watts(j["p0_dbm"].get<double>());
    if (j.contains("noise_dbm")) cfg.noise_power_w = dbm_to_watts(j["noise_dbm"].get<double>());

    if (j.contains("eh")) {
        const auto& e = j["eh"];
        require(e.is_object(), "'eh' must be an object");
        for (const auto& [key, _] : e.items())
            require(key == "p_max_w" || key == "a_per_w" || key == "b_w",
                    "unknown key 'eh." + key + "'");
        read(e, "p_max_w", cfg.eh.p_max_w);
        read(e, "a_per_w", cfg.eh.a_per_w);
        read(e, "b_w", cfg.eh.b_w);
    }
    read(j, "frame_duration_s", cfg.frame_duration_s);
    read(j, "rician_k", cfg.rician_k);
    read(j, "rng_seed", cfg.rng_seed);

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        require(s.is_object(), "'solver' must be an object");
        for (const auto& [key, _] : s.items())
            require(key == "rel_tol" || key == "max_iters" || key == "window" ||
                        key == "projection_tol",
                    "unknown key 'solver." + key + "'");
        read(s, "rel_tol", cfg.solver.rel_tol);
        read(s, "max_iters", cfg.solver.max_iters);
        read(s, "window", cfg.solver.window);
        read(s, "projection_tol", cfg.solver.projection_tol);
    }
    read(j, "max_enumeration_antennas", cfg.max_enumeration_antennas);
    read(j, "naive_freespace_scan", cfg.naive_freespace_scan);
    read(j, "miso_eigen_beam", cfg.miso_eigen_beam);
    read(j, "miso_mrc_uplink", cfg.miso_mrc_uplink);

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace wppan
