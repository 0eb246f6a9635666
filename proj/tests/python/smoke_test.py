# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python bindings; run with PYTHONPATH pointing at the
built package directory."""

import math

import wppan


def test_config_roundtrip():
    cfg = wppan.SystemConfig()
    cfg.validate()
    assert cfg.num_antennas == 4 and cfg.num_users == 3
    parsed = wppan.parse_config('{"p0_dbm": 30.0, "num_users": 2}')
    assert abs(parsed.transmit_power_w - 1.0) < 1e-12
    assert parsed.num_users == 2
    try:
        wppan.parse_config('{"bogus_key": 1}')
    except RuntimeError:
        pass
    else:
        raise AssertionError("unknown key should be rejected")


def test_geometry():
    cfg = wppan.SystemConfig()
    cfg.num_antennas = 2
    pos = wppan.antenna_positions(cfg)
    assert pos[0].x == -5.0 and pos[1].x == 5.0 and pos[0].z == 3.0


def test_harvester_points():
    eh = wppan.EhParams()
    assert wppan.harvested_power(0.0, eh) == 0.0
    expected = eh.p_max_w * (1.0 - math.exp(-eh.a_per_w * eh.b_w)) / 2.0
    assert abs(wppan.harvested_power(eh.b_w, eh) - expected) <= 1e-12 * expected


def test_plan_and_gain():
    cfg = wppan.SystemConfig()
    scenario = wppan.sample_scenario(cfg, 0)
    plan = wppan.build_plan(wppan.PlanMode.Search, scenario.channels)
    assert plan.slot_count() == 2**cfg.num_antennas - 1
    g = wppan.effective_gain(scenario.channels[0], plan.uplink_vectors[0])
    assert abs(g) > 0.0


def test_solver_against_oracle():
    harvest = [[0.8]]
    gains = [1.3]
    schedule = wppan.solve_allocation(harvest, gains)
    oracle = wppan.grid_oracle(harvest, gains, 1.0, 1e-3)
    assert schedule.stats.converged
    assert abs(schedule.min_rate - oracle) <= max(1e-3, 1e-3 * schedule.min_rate)


def test_trial_determinism_and_nesting():
    cfg = wppan.SystemConfig()
    a = wppan.run_trial(cfg, 1, "search")
    b = wppan.run_trial(cfg, 1, "search")
    assert a.min_rate == b.min_rate and a.rates == b.rates
    greedy = wppan.run_trial(cfg, 1, "greedy")
    naive = wppan.run_trial(cfg, 1, "naive")
    slack = 1e-4 * a.min_rate + 1e-12
    assert a.min_rate >= greedy.min_rate - slack
    assert a.min_rate >= naive.min_rate - slack


def test_sweep_table():
    cfg = wppan.SystemConfig()
    cfg.num_antennas = 3
    table = wppan.sweep(cfg, "p0_dbm", [35.0, 40.0], ["greedy", "miso"], 2)
    assert table.modes == ["greedy", "miso"]
    assert len(table.mean) == 2 and len(table.mean[0]) == 2
    assert table.to_csv().startswith("p0_dbm,mode,mean_min_rate")


def main():
    tests = [
        test_config_roundtrip,
        test_geometry,
        test_harvester_points,
        test_plan_and_gain,
        test_solver_against_oracle,
        test_trial_determinism_and_nesting,
        test_sweep_table,
    ]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
