# SPDX-License-Identifier: Apache-2.0
"""Wireless powered pinching-antenna network simulation and optimization."""

from ._core import (  # noqa: F401
    ActivationPlan,
    ActivationVector,
    ChannelKind,
    ChannelVector,
    EhParams,
    PlanMode,
    Position,
    ScenarioRealization,
    Schedule,
    SolverConfig,
    SolverStats,
    SweepTable,
    SystemConfig,
    TrialResult,
    antenna_positions,
    antenna_histogram,
    best_activation,
    best_one_hot,
    build_plan,
    combined_channel,
    dbm_to_watts,
    device_channel,
    distance,
    effective_gain,
    enumerate_subsets,
    grid_oracle,
    harvested_power,
    load_config,
    miso_harvest,
    parse_config,
    received_power,
    run_trial,
    run_trials,
    sample_scenario,
    solve_allocation,
    solve_miso,
    sweep,
    user_rate,
    waveguide_channel,
    watts_to_dbm,
)

__version__ = "0.1.0"
