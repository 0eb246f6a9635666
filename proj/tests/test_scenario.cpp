// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "wppan/config.hpp"
#include "wppan/scenario.hpp"

using namespace wppan;

namespace {

SystemConfig defaults() {
    SystemConfig cfg;
    cfg.validate();
    return cfg;
}

}  // namespace

TEST_CASE("antenna placement: single element sits at the center") {
    SystemConfig cfg = defaults();
    cfg.num_antennas = 1;
    const auto pos = antenna_positions(cfg);
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].x == 0.0);
    CHECK(pos[0].y == 0.0);
    CHECK(pos[0].z == 3.0);
}

TEST_CASE("antenna placement: inclusive endpoints") {
    SystemConfig cfg = defaults();
    cfg.num_antennas = 2;
    const auto pos = antenna_positions(cfg);
    REQUIRE(pos.size() == 2);
    CHECK(pos[0].x == -5.0);
    CHECK(pos[1].x == 5.0);
    CHECK(pos[0].z == 3.0);
}

TEST_CASE("antenna placement: N=4 uniform grid") {
    SystemConfig cfg = defaults();
    cfg.num_antennas = 4;
    const auto pos = antenna_positions(cfg);
    REQUIRE(pos.size() == 4);
    CHECK(pos[0].x == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(pos[1].x == doctest::Approx(-5.0 / 3.0).epsilon(1e-14));
    CHECK(pos[2].x == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(pos[3].x == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("antenna x-coordinates strictly increase") {
    SystemConfig cfg = defaults();
    for (int n : {2, 3, 5, 9, 16}) {
        cfg.num_antennas = n;
        const auto pos = antenna_positions(cfg);
        for (std::size_t i = 1; i < pos.size(); ++i) CHECK(pos[i].x > pos[i - 1].x);
        for (const auto& p : pos) {
            CHECK(p.y == 0.0);
            CHECK(p.z == cfg.height);
        }
    }
}

TEST_CASE("scenario sampling is deterministic per (seed, trial)") {
    const SystemConfig cfg = defaults();
    const auto a = sample_scenario(cfg, 7);
    const auto b = sample_scenario(cfg, 7);
    REQUIRE(a.user_positions.size() == b.user_positions.size());
    for (std::size_t m = 0; m < a.user_positions.size(); ++m) {
        CHECK(a.user_positions[m].x == b.user_positions[m].x);
        CHECK(a.user_positions[m].y == b.user_positions[m].y);
        for (std::size_t n = 0; n < a.channels[m].size(); ++n)
            CHECK(a.channels[m].entries[n] == b.channels[m].entries[n]);
    }
    const auto c = sample_scenario(cfg, 8);
    CHECK(a.user_positions[0].x != c.user_positions[0].x);
}

TEST_CASE("scenario geometry invariants hold across seeds") {
    SystemConfig cfg = defaults();
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const auto s = sample_scenario(cfg, trial);
        CHECK(s.feed_position.x == -cfg.room_x / 2.0);
        CHECK(s.feed_position.y == 0.0);
        CHECK(s.feed_position.z == cfg.height);
        for (const auto& u : s.user_positions) {
            CHECK(std::abs(u.x) <= cfg.room_x / 2.0);
            CHECK(std::abs(u.y) <= cfg.room_y / 2.0);
            CHECK(u.z == 0.0);
        }
        for (const auto& h : s.channels) CHECK(h.size() == static_cast<std::size_t>(cfg.num_antennas));
    }
}

TEST_CASE("user position mean matches the uniform law") {
    SystemConfig cfg = defaults();
    cfg.num_users = 1000;
    const auto s = sample_scenario(cfg, 0);
    double mean_x = 0.0;
    for (const auto& u : s.user_positions) mean_x += u.x;
    mean_x /= static_cast<double>(s.user_positions.size());
    // 3 sigma / sqrt(n) with sigma = D_x / sqrt(12)
    const double bound = 3.0 * (cfg.room_x / std::sqrt(12.0)) / std::sqrt(1000.0);
    CHECK(std::abs(mean_x) <= bound);
}

TEST_CASE("adding users does not perturb earlier users' draws") {
    SystemConfig small = defaults();
    small.num_users = 2;
    SystemConfig large = defaults();
    large.num_users = 6;
    const auto a = sample_scenario(small, 3);
    const auto b = sample_scenario(large, 3);
    for (std::size_t m = 0; m < 2; ++m) {
        CHECK(a.user_positions[m].x == b.user_positions[m].x);
        CHECK(a.user_positions[m].y == b.user_positions[m].y);
        for (std::size_t n = 0; n < a.channels[m].size(); ++n)
            CHECK(a.channels[m].entries[n] == b.channels[m].entries[n]);
    }
}

TEST_CASE("config validation rejects bad parameters") {
    SystemConfig cfg = defaults();
    cfg.num_antennas = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = defaults();
    cfg.noise_power_w = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = defaults();
    cfg.eh.b_w = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = defaults();
    cfg.rician_k = -0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config JSON parsing and dBm conversion") {
    const auto cfg = parse_config(R"({
        "num_antennas": 6, "num_users": 4,
        "p0_dbm": 40.0, "noise_dbm": -95.0,
        "eh": {"p_max_w": 0.02, "a_per_w": 1200.0, "b_w": 0.003},
        "solver": {"rel_tol": 1e-5}
    })");
    CHECK(cfg.num_antennas == 6);
    CHECK(cfg.num_users == 4);
    CHECK(cfg.transmit_power_w == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(cfg.noise_power_w == doctest::Approx(3.1622776601683794e-13).epsilon(1e-12));
    CHECK(cfg.eh.p_max_w == 0.02);
    CHECK(cfg.solver.rel_tol == 1e-5);
    CHECK(cfg.solver.max_iters == 50000);  // untouched default

    CHECK_THROWS_AS(parse_config("{\"frequency\": 1}"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"p0_dbm": 40, "transmit_power_w": 10})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"num_users": 0})"), ConfigError);
}

TEST_CASE("dbm round trip") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watts_to_dbm(dbm_to_watts(-95.0)) == doctest::Approx(-95.0).epsilon(1e-12));
}

TEST_CASE("config loads from disk") {
    const std::string path = "/tmp/wppan_test_cfg.json";
    {
        std::ofstream out(path);
        out << R"({"num_antennas": 5, "p0_dbm": 35.0})";
    }
    const auto cfg = load_config(path);
    CHECK(cfg.num_antennas == 5);
    CHECK(cfg.transmit_power_w == doctest::Approx(dbm_to_watts(35.0)).epsilon(1e-12));
    CHECK_THROWS_AS(load_config("/tmp/definitely_missing_wppan.json"), ConfigError);
}
