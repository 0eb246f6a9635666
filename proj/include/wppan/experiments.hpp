// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wppan/allocator.hpp"
#include "wppan/config.hpp"

namespace wppan {

enum class RunMode { Search, Greedy, Naive, Miso };

std::string to_string(RunMode mode);
RunMode parse_run_mode(const std::string& name);

/// Outcome of one Monte Carlo trial.
struct TrialResult {
    std::uint64_t trial = 0;
    RunMode mode = RunMode::Search;
    double min_rate = 0.0;
    std::vector<double> rates;
    // Active-antenna counts and durations of slots the optimizer actually
    // used (duration > 1e-6 T).
    std::vector<int> downlink_counts;
    std::vector<double> downlink_durations;
    std::vector<int> uplink_counts;
    std::vector<double> uplink_durations;
    SolverStats stats;
    bool failed = false;
};

/// Per-mode mean min-rate with standard error along one parameter axis.
struct SweepTable {
    std::string axis;                        // p0_dbm | users | kappa
    std::vector<double> grid;
    std::vector<RunMode> modes;
    std::vector<std::vector<double>> mean;       // [grid][mode]
    std::vector<std::vector<double>> std_error;  // [grid][mode]
    std::vector<std::vector<long>> failures;     // [grid][mode]
    long trials = 0;
};

/// Scenario -> plan (or benchmark beams) -> allocator, for one (trial, mode).
/// All modes sharing (seed, trial) see the same user drop and fading.
/// Solver failures are flagged on the result, not thrown.
TrialResult run_trial(const SystemConfig& config, std::uint64_t trial, RunMode mode);

/// Run trials 0..n-1, in parallel when hardware allows (capped by the
/// WPPAN_THREADS environment variable), returned in trial order. A positive
/// `workers` value overrides the automatic pool size.
std::vector<TrialResult> run_trials(const SystemConfig& config, long n_trials, RunMode mode,
                                    unsigned workers = 0);

/// Monte Carlo sweep of `axis` over `grid` for each mode; trials are paired
/// across modes and grid points through the shared (seed, trial) stream.
SweepTable sweep(const SystemConfig& config, const std::string& axis,
                 std::span<const double> grid, std::span<const RunMode> modes,
                 long num_trials);

/// Normalized distribution of the number of active antennas over used slots,
/// for one link direction. Optionally weighted by slot duration.
std::vector<double> antenna_histogram(std::span<const TrialResult> results, bool uplink,
                                      int n_antennas, bool duration_weighted = false);

/// Write a sweep table as CSV (all modes, one row per grid point and mode).
void emit_csv(const SweepTable& table, std::ostream& out);

/// Write a sweep table as whitespace .dat (axis value, mean rate) for one mode.
void emit_dat(const SweepTable& table, RunMode mode, std::ostream& out);

/// Per-trial CSV used by the `run` subcommand; byte-stable for a fixed
/// (config, seed).
void write_trials_csv(std::span<const TrialResult> results, std::ostream& out);

/// 9-significant-digit float formatting used in all emitted files.
std::string format_g9(double value);

}  // namespace wppan
