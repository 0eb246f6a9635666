// SPDX-License-Identifier: Apache-2.0
#include "wppan/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wppan/activation.hpp"
#include "wppan/allocator.hpp"
#include "wppan/experiments.hpp"
#include "wppan/harvest.hpp"
#include "wppan/miso.hpp"
#include "wppan/rng.hpp"
#include "wppan/scenario.hpp"

namespace wppan {

namespace {

SystemConfig load_or_default(const std::string& path) {
    if (path.empty()) {
        SystemConfig cfg;
        cfg.validate();
        return cfg;
    }
    return load_config(path);
}

void warn_search_cost(const SystemConfig& cfg, std::ostream& err) {
    const double slots = std::pow(2.0, cfg.num_antennas) - 1.0;
    if (slots + cfg.num_users > 1000)
        err << "warning: search mode optimizes " << format_g9(slots + cfg.num_users)
            << " timeslot durations (2^" << cfg.num_antennas << "-1 downlink slots); "
            << "expect long solve times\n";
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    return grid;
}

class OutputTarget {
  public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::ios_base::failure("cannot open output file '" + path + "'");
            use_file_ = true;
        }
    }
    std::ostream& stream() { return use_file_ ? file_ : fallback_; }
    void finish() {
        if (use_file_) {
            file_.flush();
            if (!file_) throw std::ios_base::failure("error while writing output file");
        }
    }

  private:
    std::ofstream file_;
    std::ostream& fallback_;
    bool use_file_ = false;
};

long count_failures(const std::vector<TrialResult>& results) {
    long n = 0;
    for (const auto& r : results) n += r.failed ? 1 : 0;
    return n;
}

int cmd_run(const SystemConfig& cfg, RunMode mode, long trials, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
    if (mode == RunMode::Search) warn_search_cost(cfg, err);
    const auto results = run_trials(cfg, trials, mode);
    OutputTarget target(out_path, out);
    write_trials_csv(results, target.stream());
    target.finish();
    if (count_failures(results) > 0) {
        err << "error: " << count_failures(results) << " of " << trials
            << " trials failed to converge\n";
        return kExitSolverFailure;
    }
    return kExitOk;
}

int cmd_sweep(const SystemConfig& cfg, const std::string& axis, const std::string& grid_csv,
              const std::vector<std::string>& mode_names, long trials,
              const std::string& out_path, const std::string& format, std::ostream& out,
              std::ostream& err) {
    const auto grid = parse_grid(grid_csv);
    if (grid.empty()) throw ConfigError("sweep: --grid is empty");
    std::vector<RunMode> modes;
    for (const auto& name : mode_names) modes.push_back(parse_run_mode(name));
    for (auto m : modes)
        if (m == RunMode::Search) warn_search_cost(cfg, err);

    const auto table = sweep(cfg, axis, grid, modes, trials);

    if (format == "csv") {
        OutputTarget target(out_path, out);
        emit_csv(table, target.stream());
        target.finish();
    } else if (format == "dat") {
        // pgfplots-style: one two-column file per mode.
        if (modes.size() == 1) {
            OutputTarget target(out_path, out);
            emit_dat(table, modes[0], target.stream());
            target.finish();
        } else {
            if (out_path.empty())
                throw ConfigError("dat output with several modes needs --out");
            const auto dot = out_path.rfind('.');
            const std::string stem = dot == std::string::npos ? out_path : out_path.substr(0, dot);
            const std::string ext = dot == std::string::npos ? ".dat" : out_path.substr(dot);
            for (auto m : modes) {
                OutputTarget target(stem + "_" + to_string(m) + ext, out);
                emit_dat(table, m, target.stream());
                target.finish();
            }
        }
    } else {
        throw ConfigError("unknown format '" + format + "' (expected csv|dat)");
    }

    long failures = 0;
    for (const auto& row : table.failures)
        for (long f : row) failures += f;
    if (failures > 0) {
        err << "error: " << failures << " trials failed to converge\n";
        return kExitSolverFailure;
    }
    return kExitOk;
}

int cmd_hist(const SystemConfig& cfg, long trials, const std::string& out_path,
             bool duration_weighted, std::ostream& out, std::ostream& err) {
    warn_search_cost(cfg, err);
    const auto results = run_trials(cfg, trials, RunMode::Search);
    const auto downlink = antenna_histogram(results, false, cfg.num_antennas, duration_weighted);
    const auto uplink = antenna_histogram(results, true, cfg.num_antennas, duration_weighted);
    OutputTarget target(out_path, out);
    auto& os = target.stream();
    os << "active_antennas,downlink_density,uplink_density\n";
    for (int c = 0; c < cfg.num_antennas; ++c)
        os << (c + 1) << ',' << format_g9(downlink[static_cast<std::size_t>(c)]) << ','
           << format_g9(uplink[static_cast<std::size_t>(c)]) << '\n';
    target.finish();
    if (count_failures(results) > 0) {
        err << "error: " << count_failures(results) << " trials failed to converge\n";
        return kExitSolverFailure;
    }
    return kExitOk;
}

// Fast oracle/concavity/nesting spot checks; a condensed version of the
// acceptance suite for field diagnosis.
int cmd_selftest(std::ostream& out) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& label) {
        out << (ok ? "PASS" : "FAIL") << "  " << label << "\n";
        if (!ok) ++failures;
    };

    {  // solver vs grid oracle on small random instances
        bool ok = true;
        for (std::uint32_t i = 0; i < 20 && ok; ++i) {
            Substream rng(7, i, Stream::Generic, 0);
            AllocationProblem p;
            const std::size_t m_users = 1 + (rng.next_u64() % 2);
            const std::size_t q_slots = (m_users == 1) ? 1 + (rng.next_u64() % 2) : 1;
            p.harvest = HarvestMatrix(m_users, q_slots);
            for (auto& v : p.harvest.values) v = std::exp(rng.uniform(-2.0, 0.5));
            for (std::size_t m = 0; m < m_users; ++m)
                p.uplink_gains.push_back(std::exp(rng.uniform(-1.0, 1.0)));
            p.frame_duration = 1.0;
            const double solved = solve(p).min_rate;
            const double oracle = grid_oracle(p, 1e-3);
            ok = std::abs(solved - oracle) <= std::max(2e-3, 1e-3 * solved);
        }
        check(ok, "allocator matches brute-force grid oracle");
    }
    {  // concavity probe
        Substream rng(11, 0, Stream::Generic, 0);
        bool ok = true;
        for (int i = 0; i < 100 && ok; ++i) {
            const double psi = std::exp(rng.uniform(-2.0, 2.0));
            ConcavitySample s{std::exp(rng.uniform(-2.0, 2.0)),
                              std::exp(rng.uniform(-2.0, 2.0))};
            const auto report = concavity_probe(psi, std::span(&s, 1));
            ok = report.max_eigenvalue <= 1e-6 && report.max_rel_dev_closed_form <= 1e-4;
        }
        check(ok, "rate surface is concave (Hessian probe)");
    }
    {  // strategy nesting on a few trials
        SystemConfig cfg;
        cfg.validate();
        bool ok = true;
        for (std::uint64_t t = 0; t < 10 && ok; ++t) {
            const double vs = run_trial(cfg, t, RunMode::Search).min_rate;
            const double vg = run_trial(cfg, t, RunMode::Greedy).min_rate;
            const double vn = run_trial(cfg, t, RunMode::Naive).min_rate;
            const double slack = 1e-3 * vs + 1e-12;
            ok = vs >= vg - slack && vs >= vn - slack;
        }
        check(ok, "search >= greedy and search >= naive per trial");
    }
    return failures == 0 ? kExitOk : kExitSolverFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"wppan - wireless powered pinching-antenna network simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, axis, grid_csv, format = "csv", mode_name = "search";
    std::vector<std::string> mode_names;
    long trials = 100;
    std::int64_t seed = -1;
    bool duration_weighted = false;

    auto* run_cmd = app.add_subcommand("run", "run Monte Carlo trials for one mode");
    run_cmd->add_option("--config", config_path, "JSON config file");
    run_cmd->add_option("--mode", mode_name, "search|greedy|naive|miso");
    run_cmd->add_option("--trials", trials, "number of trials");
    run_cmd->add_option("--seed", seed, "override config rng_seed");
    run_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one axis and tabulate mean rates");
    sweep_cmd->add_option("--config", config_path, "JSON config file");
    sweep_cmd->add_option("--axis", axis, "p0_dbm|users|kappa")->required();
    sweep_cmd->add_option("--grid", grid_csv, "comma-separated grid values")->required();
    sweep_cmd->add_option("--modes", mode_names, "modes to sweep")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--trials", trials, "trials per grid point");
    sweep_cmd->add_option("--seed", seed, "override config rng_seed");
    sweep_cmd->add_option("--out", out_path, "output path");
    sweep_cmd->add_option("--format", format, "csv|dat");

    auto* hist_cmd = app.add_subcommand("hist", "active-antenna histogram (search mode)");
    hist_cmd->add_option("--config", config_path, "JSON config file");
    hist_cmd->add_option("--trials", trials, "number of trials");
    hist_cmd->add_option("--seed", seed, "override config rng_seed");
    hist_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    hist_cmd->add_flag("--duration-weighted", duration_weighted,
                       "weight slots by duration instead of counting them");

    auto* selftest_cmd = app.add_subcommand("selftest", "oracle/concavity/nesting spot checks");

    std::vector<const char*> argv;
    argv.push_back("wppan");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help goes to out; CLI11 renders the message for us.
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        SystemConfig cfg = load_or_default(config_path);
        if (seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(seed);

        if (run_cmd->parsed())
            return cmd_run(cfg, parse_run_mode(mode_name), trials, out_path, out, err);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg, axis, grid_csv, mode_names, trials, out_path, format, out,
                             err);
        if (hist_cmd->parsed())
            return cmd_hist(cfg, trials, out_path, duration_weighted, out, err);
        if (selftest_cmd->parsed()) return cmd_selftest(out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}

}  // namespace wppan
