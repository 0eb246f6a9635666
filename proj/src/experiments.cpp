// SPDX-License-Identifier: Apache-2.0
#include "wppan/experiments.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "wppan/activation.hpp"
#include "wppan/miso.hpp"
#include "wppan/scenario.hpp"

namespace wppan {

namespace {

constexpr double kUsedSlotFraction = 1e-6;

unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("WPPAN_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

void collect_used(const std::vector<double>& taus, const std::vector<ActivationVector>& slots,
                  double frame, std::vector<int>& counts, std::vector<double>& durations) {
    for (std::size_t q = 0; q < taus.size(); ++q) {
        if (taus[q] > kUsedSlotFraction * frame) {
            counts.push_back(slots[q].count_active());
            durations.push_back(taus[q]);
        }
    }
}

SystemConfig apply_axis(const SystemConfig& base, const std::string& axis, double value) {
    SystemConfig cfg = base;
    if (axis == "p0_dbm") {
        cfg.transmit_power_w = dbm_to_watts(value);
    } else if (axis == "users") {
        cfg.num_users = static_cast<int>(std::llround(value));
    } else if (axis == "kappa") {
        cfg.waveguide_loss_db_per_m = value;
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
    cfg.validate();
    return cfg;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Search: return "search";
        case RunMode::Greedy: return "greedy";
        case RunMode::Naive: return "naive";
        case RunMode::Miso: return "miso";
    }
    return "?";
}

RunMode parse_run_mode(const std::string& name) {
    if (name == "search") return RunMode::Search;
    if (name == "greedy") return RunMode::Greedy;
    if (name == "naive") return RunMode::Naive;
    if (name == "miso") return RunMode::Miso;
    throw ConfigError("unknown mode '" + name + "' (expected search|greedy|naive|miso)");
}

TrialResult run_trial(const SystemConfig& config, std::uint64_t trial, RunMode mode) {
    config.validate();
    TrialResult result;
    result.trial = trial;
    result.mode = mode;

    const double frame = config.frame_duration_s;
    Schedule schedule;
    std::vector<ActivationVector> downlink_slots;
    std::vector<ActivationVector> uplink_vectors;
    try {
        if (mode == RunMode::Miso) {
            const auto scenario = sample_scenario(config, trial);
            std::vector<std::vector<std::complex<double>>> channels;
            channels.reserve(scenario.user_positions.size());
            for (std::size_t m = 0; m < scenario.user_positions.size(); ++m) {
                Substream fading(config.rng_seed, trial, Stream::MisoFading,
                                 static_cast<std::uint32_t>(m));
                channels.push_back(miso_channel(scenario.user_positions[m],
                                                scenario.feed_position, config.num_antennas,
                                                config.carrier_freq_hz, config.rician_k,
                                                fading));
            }
            schedule = solve_miso(channels, config);
            ActivationVector all_on;
            all_on.bits.assign(static_cast<std::size_t>(config.num_antennas), 1);
            downlink_slots.assign(schedule.tau_downlink.size(), all_on);
            uplink_vectors.assign(channels.size(), all_on);
        } else {
            const auto scenario = sample_scenario(config, trial);
            const PlanMode plan_mode = mode == RunMode::Search  ? PlanMode::Search
                                       : mode == RunMode::Greedy ? PlanMode::Greedy
                                                                 : PlanMode::Naive;
            std::span<const ChannelVector> scan{};
            if (mode == RunMode::Naive && config.naive_freespace_scan)
                scan = scenario.device_channels;
            const auto plan = build_plan(plan_mode, scenario.channels,
                                         config.max_enumeration_antennas, scan);

            AllocationProblem problem;
            problem.harvest = harvest_matrix(scenario.channels, plan,
                                             config.transmit_power_w, config.eh);
            problem.frame_duration = frame;
            problem.uplink_gains.reserve(scenario.channels.size());
            for (std::size_t m = 0; m < scenario.channels.size(); ++m) {
                const auto g = effective_gain(scenario.channels[m], plan.uplink_vectors[m]);
                problem.uplink_gains.push_back(std::norm(g) / config.noise_power_w);
            }
            schedule = solve(problem, config.solver);
            downlink_slots = plan.downlink_slots;
            uplink_vectors = plan.uplink_vectors;
        }
    } catch (const SolverFailure& failure) {
        result.failed = true;
        schedule = failure.best;
    }

    result.min_rate = schedule.min_rate;
    result.rates = schedule.rates;
    result.stats = schedule.stats;
    if (!downlink_slots.empty())
        collect_used(schedule.tau_downlink, downlink_slots, frame, result.downlink_counts,
                     result.downlink_durations);
    if (!uplink_vectors.empty())
        collect_used(schedule.tau_uplink, uplink_vectors, frame, result.uplink_counts,
                     result.uplink_durations);
    return result;
}

std::vector<TrialResult> run_trials(const SystemConfig& config, long n_trials, RunMode mode,
                                    unsigned workers) {
    std::vector<TrialResult> results(static_cast<std::size_t>(n_trials));
    if (workers == 0) workers = worker_count();
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<long>(n_trials, 1)));
    if (workers <= 1) {
        for (long t = 0; t < n_trials; ++t)
            results[static_cast<std::size_t>(t)] =
                run_trial(config, static_cast<std::uint64_t>(t), mode);
        return results;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&]() {
        try {
            for (;;) {
                const long t = next.fetch_add(1);
                if (t >= n_trials) return;
                results[static_cast<std::size_t>(t)] =
                    run_trial(config, static_cast<std::uint64_t>(t), mode);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n_trials);  // drain remaining work
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return results;
}

SweepTable sweep(const SystemConfig& config, const std::string& axis,
                 std::span<const double> grid, std::span<const RunMode> modes,
                 long num_trials) {
    if (grid.empty()) throw ConfigError("sweep: empty grid");
    if (modes.empty()) throw ConfigError("sweep: no modes");
    if (num_trials < 1) throw ConfigError("sweep: need at least one trial");

    SweepTable table;
    table.axis = axis;
    table.grid.assign(grid.begin(), grid.end());
    table.modes.assign(modes.begin(), modes.end());
    table.trials = num_trials;
    table.mean.assign(grid.size(), std::vector<double>(modes.size(), 0.0));
    table.std_error.assign(grid.size(), std::vector<double>(modes.size(), 0.0));
    table.failures.assign(grid.size(), std::vector<long>(modes.size(), 0));

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const SystemConfig cfg = apply_axis(config, axis, grid[gi]);
        for (std::size_t mi = 0; mi < modes.size(); ++mi) {
            const auto results = run_trials(cfg, num_trials, modes[mi]);
            double sum = 0.0, sum_sq = 0.0;
            long ok = 0;
            for (const auto& r : results) {
                if (r.failed) {
                    ++table.failures[gi][mi];
                    continue;
                }
                sum += r.min_rate;
                sum_sq += r.min_rate * r.min_rate;
                ++ok;
            }
            if (ok > 0) {
                const double mean = sum / static_cast<double>(ok);
                table.mean[gi][mi] = mean;
                if (ok > 1) {
                    const double var =
                        std::max(0.0, (sum_sq - static_cast<double>(ok) * mean * mean) /
                                          static_cast<double>(ok - 1));
                    table.std_error[gi][mi] = std::sqrt(var / static_cast<double>(ok));
                }
            }
        }
    }
    return table;
}

std::vector<double> antenna_histogram(std::span<const TrialResult> results, bool uplink,
                                      int n_antennas, bool duration_weighted) {
    if (results.empty()) throw std::invalid_argument("antenna_histogram: no results");
    std::vector<double> hist(static_cast<std::size_t>(n_antennas), 0.0);
    double total = 0.0;
    for (const auto& r : results) {
        const auto& counts = uplink ? r.uplink_counts : r.downlink_counts;
        const auto& durations = uplink ? r.uplink_durations : r.downlink_durations;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const int c = counts[i];
            if (c < 1 || c > n_antennas)
                throw std::invalid_argument("antenna_histogram: count out of range");
            const double weight = duration_weighted ? durations[i] : 1.0;
            hist[static_cast<std::size_t>(c - 1)] += weight;
            total += weight;
        }
    }
    if (total > 0.0)
        for (auto& v : hist) v /= total;
    return hist;
}

std::string format_g9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void emit_csv(const SweepTable& table, std::ostream& out) {
    if (table.grid.empty()) throw std::invalid_argument("emit_csv: empty table");
    out << table.axis << ",mode,mean_min_rate,std_error,trials,failures\n";
    for (std::size_t gi = 0; gi < table.grid.size(); ++gi)
        for (std::size_t mi = 0; mi < table.modes.size(); ++mi)
            out << format_g9(table.grid[gi]) << ',' << to_string(table.modes[mi]) << ','
                << format_g9(table.mean[gi][mi]) << ',' << format_g9(table.std_error[gi][mi])
                << ',' << table.trials << ',' << table.failures[gi][mi] << '\n';
}

void emit_dat(const SweepTable& table, RunMode mode, std::ostream& out) {
    if (table.grid.empty()) throw std::invalid_argument("emit_dat: empty table");
    std::size_t mi = table.modes.size();
    for (std::size_t i = 0; i < table.modes.size(); ++i)
        if (table.modes[i] == mode) mi = i;
    if (mi == table.modes.size())
        throw std::invalid_argument("emit_dat: mode not present in table");
    for (std::size_t gi = 0; gi < table.grid.size(); ++gi)
        out << format_g9(table.grid[gi]) << ' ' << format_g9(table.mean[gi][mi]) << '\n';
}

void write_trials_csv(std::span<const TrialResult> results, std::ostream& out) {
    out << "trial,mode,min_rate,rates,uplink_counts,downlink_counts,iterations,converged,"
           "failed\n";
    auto join_d = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += format_g9(v[i]);
        }
        return s;
    };
    auto join_i = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += std::to_string(v[i]);
        }
        return s;
    };
    for (const auto& r : results)
        out << r.trial << ',' << to_string(r.mode) << ',' << format_g9(r.min_rate) << ','
            << join_d(r.rates) << ',' << join_i(r.uplink_counts) << ','
            << join_i(r.downlink_counts) << ',' << r.stats.iterations << ','
            << (r.stats.converged ? 1 : 0) << ',' << (r.failed ? 1 : 0) << '\n';
}

}  // namespace wppan
