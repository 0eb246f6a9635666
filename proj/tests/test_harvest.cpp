// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "wppan/activation.hpp"
#include "wppan/harvest.hpp"
#include "wppan/rng.hpp"

using namespace wppan;

namespace {
const EhParams kEh{0.024, 1500.0, 0.0022};
}

TEST_CASE("harvester curve point checks") {
    CHECK(harvested_power(0.0, kEh) == 0.0);

    // saturation: at 1 W the curve must sit within 0.1% of the ceiling
    CHECK(harvested_power(1.0, kEh) > 0.999 * kEh.p_max_w);

    // closed form at the turn-on offset: p_max (1 - exp(-a b)) / 2
    const double expected = kEh.p_max_w * (1.0 - std::exp(-kEh.a_per_w * kEh.b_w)) / 2.0;
    CHECK(harvested_power(kEh.b_w, kEh) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.4816 * kEh.p_max_w).epsilon(1e-3));

    CHECK_THROWS_AS(harvested_power(-1e-9, kEh), std::invalid_argument);
}

TEST_CASE("harvester curve is strictly increasing and bounded") {
    // The fine grid covers the operating range where the curve is far from
    // both fp-saturated ends.
    const int n = 1000;
    double prev = harvested_power(0.0, kEh);
    for (int i = 1; i <= n; ++i) {
        const double p = 0.01 * i / n;
        const double phi = harvested_power(p, kEh);
        CHECK(phi > prev);
        CHECK(phi < kEh.p_max_w);
        prev = phi;
    }
    for (double p : {0.05, 0.3, 2.0, 100.0}) CHECK(harvested_power(p, kEh) <= kEh.p_max_w);
}

TEST_CASE("received power") {
    ChannelVector h;
    h.kind = ChannelKind::Combined;
    h.entries = {{3e-4, 4e-4}, {-2e-4, 1e-4}, {1e-4, 1e-4}};

    ActivationVector one = ActivationVector::one_hot(0, 3);
    CHECK(received_power(h, one, 0.0) == 0.0);
    CHECK(received_power(h, one, 10.0) ==
          doctest::Approx(std::norm(h.entries[0]) * 10.0).epsilon(1e-12));

    ActivationVector all;
    all.bits = {1, 1, 1};
    const auto total = h.entries[0] + h.entries[1] + h.entries[2];
    CHECK(received_power(h, all, 10.0) ==
          doctest::Approx(std::norm(total) / 3.0 * 10.0).epsilon(1e-12));

    ActivationVector none;
    none.bits = {0, 0, 0};
    CHECK_THROWS_AS(received_power(h, none, 10.0), std::invalid_argument);
}

TEST_CASE("harvest matrix composition and symmetry") {
    Substream rng(12, 0, Stream::Generic, 0);
    ChannelVector h;
    h.kind = ChannelKind::Combined;
    for (int n = 0; n < 4; ++n) h.entries.push_back(1e-4 * rng.complex_normal());

    ActivationPlan plan;
    plan.mode = PlanMode::Search;
    plan.downlink_slots = enumerate_subsets(4);
    plan.downlink_slots.resize(3);
    plan.uplink_vectors = {ActivationVector::one_hot(0, 4), ActivationVector::one_hot(1, 4)};

    std::vector<ChannelVector> channels{h, h};  // co-located users
    const auto phi = harvest_matrix(channels, plan, 10.0, kEh);
    REQUIRE(phi.users == 2);
    REQUIRE(phi.slots == 3);
    for (std::size_t q = 0; q < 3; ++q) CHECK(phi.at(0, q) == phi.at(1, q));

    // independent entrywise recomputation
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t q = 0; q < 3; ++q) {
            const double p_rx = received_power(channels[m], plan.downlink_slots[q], 10.0);
            CHECK(phi.at(m, q) == harvested_power(p_rx, kEh));
        }

    // single slot, single user agrees with the two underlying operations
    ActivationPlan single;
    single.downlink_slots = {ActivationVector::one_hot(2, 4)};
    single.uplink_vectors = {ActivationVector::one_hot(2, 4)};
    std::vector<ChannelVector> one_user{h};
    const auto phi1 = harvest_matrix(one_user, single, 10.0, kEh);
    REQUIRE(phi1.values.size() == 1);
    CHECK(phi1.at(0, 0) ==
          harvested_power(received_power(h, single.downlink_slots[0], 10.0), kEh));

    ActivationPlan empty;
    CHECK_THROWS_AS(harvest_matrix(one_user, empty, 10.0, kEh), std::invalid_argument);
}

TEST_CASE("harvest never decreases when transmit power grows") {
    Substream rng(13, 0, Stream::Generic, 0);
    for (int rep = 0; rep < 20; ++rep) {
        ChannelVector h;
        for (int n = 0; n < 4; ++n) h.entries.push_back(1e-4 * rng.complex_normal());
        ActivationPlan plan;
        plan.downlink_slots = enumerate_subsets(4);
        plan.uplink_vectors = {ActivationVector::one_hot(0, 4)};
        std::vector<ChannelVector> channels{h};
        const auto lo = harvest_matrix(channels, plan, 5.0, kEh);
        const auto hi = harvest_matrix(channels, plan, 10.0, kEh);
        for (std::size_t i = 0; i < lo.values.size(); ++i)
            CHECK(hi.values[i] >= lo.values[i]);
    }
}
