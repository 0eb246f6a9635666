// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wppan/activation.hpp"
#include "wppan/allocator.hpp"
#include "wppan/channel.hpp"
#include "wppan/config.hpp"
#include "wppan/experiments.hpp"
#include "wppan/harvest.hpp"
#include "wppan/miso.hpp"
#include "wppan/scenario.hpp"

namespace py = pybind11;
using namespace wppan;

namespace {

HarvestMatrix harvest_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("harvest matrix must be non-empty");
    HarvestMatrix phi(rows.size(), rows.front().size());
    for (std::size_t m = 0; m < rows.size(); ++m) {
        if (rows[m].size() != phi.slots)
            throw std::invalid_argument("harvest matrix rows must have equal length");
        for (std::size_t q = 0; q < phi.slots; ++q) phi.at(m, q) = rows[m][q];
    }
    return phi;
}

std::vector<std::vector<double>> harvest_rows(const HarvestMatrix& phi) {
    std::vector<std::vector<double>> rows(phi.users, std::vector<double>(phi.slots));
    for (std::size_t m = 0; m < phi.users; ++m)
        for (std::size_t q = 0; q < phi.slots; ++q) rows[m][q] = phi.at(m, q);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation and optimization engine for wireless powered "
              "pinching-antenna networks";

    py::class_<Position>(m, "Position")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
             py::arg("z") = 0.0)
        .def_readwrite("x", &Position::x)
        .def_readwrite("y", &Position::y)
        .def_readwrite("z", &Position::z)
        .def("__repr__", [](const Position& p) {
            std::ostringstream s;
            s << "Position(" << p.x << ", " << p.y << ", " << p.z << ")";
            return s.str();
        });
    m.def("distance", &distance);

    py::class_<EhParams>(m, "EhParams")
        .def(py::init<>())
        .def_readwrite("p_max_w", &EhParams::p_max_w)
        .def_readwrite("a_per_w", &EhParams::a_per_w)
        .def_readwrite("b_w", &EhParams::b_w);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &SolverConfig::rel_tol)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("window", &SolverConfig::window)
        .def_readwrite("projection_tol", &SolverConfig::projection_tol);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("num_antennas", &SystemConfig::num_antennas)
        .def_readwrite("num_users", &SystemConfig::num_users)
        .def_readwrite("room_x", &SystemConfig::room_x)
        .def_readwrite("room_y", &SystemConfig::room_y)
        .def_readwrite("height", &SystemConfig::height)
        .def_readwrite("carrier_freq_hz", &SystemConfig::carrier_freq_hz)
        .def_readwrite("refractive_index", &SystemConfig::refractive_index)
        .def_readwrite("waveguide_loss_db_per_m", &SystemConfig::waveguide_loss_db_per_m)
        .def_readwrite("transmit_power_w", &SystemConfig::transmit_power_w)
        .def_readwrite("noise_power_w", &SystemConfig::noise_power_w)
        .def_readwrite("eh", &SystemConfig::eh)
        .def_readwrite("frame_duration_s", &SystemConfig::frame_duration_s)
        .def_readwrite("rician_k", &SystemConfig::rician_k)
        .def_readwrite("rng_seed", &SystemConfig::rng_seed)
        .def_readwrite("solver", &SystemConfig::solver)
        .def_readwrite("max_enumeration_antennas", &SystemConfig::max_enumeration_antennas)
        .def_readwrite("naive_freespace_scan", &SystemConfig::naive_freespace_scan)
        .def_readwrite("miso_eigen_beam", &SystemConfig::miso_eigen_beam)
        .def_readwrite("miso_mrc_uplink", &SystemConfig::miso_mrc_uplink)
        .def("validate", &SystemConfig::validate);

    m.def("parse_config", &parse_config, py::arg("json_text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("dbm_to_watts", &dbm_to_watts);
    m.def("watts_to_dbm", &watts_to_dbm);

    py::enum_<ChannelKind>(m, "ChannelKind")
        .value("Device", ChannelKind::Device)
        .value("Waveguide", ChannelKind::Waveguide)
        .value("Combined", ChannelKind::Combined);

    py::class_<ChannelVector>(m, "ChannelVector")
        .def(py::init([](std::vector<std::complex<double>> entries, ChannelKind kind) {
                 return ChannelVector{std::move(entries), kind};
             }),
             py::arg("entries"), py::arg("kind") = ChannelKind::Combined)
        .def_readwrite("entries", &ChannelVector::entries)
        .def_readwrite("kind", &ChannelVector::kind)
        .def("__len__", &ChannelVector::size);

    py::class_<ActivationVector>(m, "ActivationVector")
        .def(py::init([](std::vector<std::uint8_t> bits) {
                 return ActivationVector{std::move(bits)};
             }),
             py::arg("bits"))
        .def_readwrite("bits", &ActivationVector::bits)
        .def("count_active", &ActivationVector::count_active)
        .def("mask", &ActivationVector::mask)
        .def_static("one_hot", &ActivationVector::one_hot)
        .def_static("from_mask", &ActivationVector::from_mask);

    py::class_<ScenarioRealization>(m, "ScenarioRealization")
        .def_readonly("user_positions", &ScenarioRealization::user_positions)
        .def_readonly("antenna_positions", &ScenarioRealization::antenna_positions)
        .def_readonly("feed_position", &ScenarioRealization::feed_position)
        .def_readonly("waveguide", &ScenarioRealization::waveguide)
        .def_readonly("device_channels", &ScenarioRealization::device_channels)
        .def_readonly("channels", &ScenarioRealization::channels);

    m.def("antenna_positions", &antenna_positions, py::arg("config"));
    m.def("sample_scenario", &sample_scenario, py::arg("config"), py::arg("trial"));

    m.def(
        "device_channel",
        [](const Position& user, const std::vector<Position>& antennas, double f_c) {
            return device_channel(user, antennas, f_c);
        },
        py::arg("user"), py::arg("antennas"), py::arg("f_c"));
    m.def(
        "waveguide_channel",
        [](const Position& feed, const std::vector<Position>& antennas, double kappa,
           double f_c, double n_eff) {
            return waveguide_channel(feed, antennas, kappa, f_c, n_eff);
        },
        py::arg("feed"), py::arg("antennas"), py::arg("kappa_db_per_m"), py::arg("f_c"),
        py::arg("n_eff"));
    m.def("combined_channel", &combined_channel, py::arg("device"), py::arg("waveguide"));
    m.def("effective_gain", &effective_gain, py::arg("channel"), py::arg("activation"));

    m.def("received_power", &received_power, py::arg("channel"), py::arg("activation"),
          py::arg("p0_w"));
    m.def("harvested_power", &harvested_power, py::arg("p_in_w"), py::arg("params"));

    py::enum_<PlanMode>(m, "PlanMode")
        .value("Search", PlanMode::Search)
        .value("Greedy", PlanMode::Greedy)
        .value("Naive", PlanMode::Naive);

    py::class_<ActivationPlan>(m, "ActivationPlan")
        .def_readonly("mode", &ActivationPlan::mode)
        .def_readonly("downlink_slots", &ActivationPlan::downlink_slots)
        .def_readonly("uplink_vectors", &ActivationPlan::uplink_vectors)
        .def("slot_count", &ActivationPlan::slot_count);

    m.def("enumerate_subsets", &enumerate_subsets, py::arg("n"), py::arg("n_max") = 16);
    m.def("best_activation", &best_activation, py::arg("channel"), py::arg("n_max") = 16);
    m.def("best_one_hot", &best_one_hot, py::arg("channel"));
    m.def(
        "build_plan",
        [](PlanMode mode, const std::vector<ChannelVector>& channels, int n_max) {
            return build_plan(mode, channels, n_max);
        },
        py::arg("mode"), py::arg("channels"), py::arg("n_max") = 16);

    py::class_<SolverStats>(m, "SolverStats")
        .def_readonly("iterations", &SolverStats::iterations)
        .def_readonly("level_gap", &SolverStats::level_gap)
        .def_readonly("feasibility_residual", &SolverStats::feasibility_residual)
        .def_readonly("converged", &SolverStats::converged);

    py::class_<Schedule>(m, "Schedule")
        .def_readonly("tau_downlink", &Schedule::tau_downlink)
        .def_readonly("tau_uplink", &Schedule::tau_uplink)
        .def_readonly("rates", &Schedule::rates)
        .def_readonly("min_rate", &Schedule::min_rate)
        .def_readonly("stats", &Schedule::stats);

    m.def("user_rate", &user_rate, py::arg("tau_u"), py::arg("psi"), py::arg("energy_sum"));
    m.def(
        "solve_allocation",
        [](const std::vector<std::vector<double>>& harvest,
           const std::vector<double>& uplink_gains, double frame_duration,
           const SolverConfig& cfg) {
            AllocationProblem p;
            p.harvest = harvest_from_rows(harvest);
            p.uplink_gains = uplink_gains;
            p.frame_duration = frame_duration;
            return solve(p, cfg);
        },
        py::arg("harvest"), py::arg("uplink_gains"), py::arg("frame_duration") = 1.0,
        py::arg("solver") = SolverConfig{});
    m.def(
        "grid_oracle",
        [](const std::vector<std::vector<double>>& harvest,
           const std::vector<double>& uplink_gains, double frame_duration,
           double resolution) {
            AllocationProblem p;
            p.harvest = harvest_from_rows(harvest);
            p.uplink_gains = uplink_gains;
            p.frame_duration = frame_duration;
            return grid_oracle(p, resolution);
        },
        py::arg("harvest"), py::arg("uplink_gains"), py::arg("frame_duration"),
        py::arg("resolution"));

    m.def(
        "miso_harvest",
        [](const std::vector<std::vector<std::complex<double>>>& channels,
           const SystemConfig& cfg) { return harvest_rows(miso_harvest_matrix(channels, cfg)); },
        py::arg("channels"), py::arg("config"));
    m.def("solve_miso", &solve_miso, py::arg("channels"), py::arg("config"));

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("trial", &TrialResult::trial)
        .def_property_readonly("mode",
                               [](const TrialResult& r) { return to_string(r.mode); })
        .def_readonly("min_rate", &TrialResult::min_rate)
        .def_readonly("rates", &TrialResult::rates)
        .def_readonly("downlink_counts", &TrialResult::downlink_counts)
        .def_readonly("downlink_durations", &TrialResult::downlink_durations)
        .def_readonly("uplink_counts", &TrialResult::uplink_counts)
        .def_readonly("uplink_durations", &TrialResult::uplink_durations)
        .def_readonly("stats", &TrialResult::stats)
        .def_readonly("failed", &TrialResult::failed);

    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("axis", &SweepTable::axis)
        .def_readonly("grid", &SweepTable::grid)
        .def_property_readonly("modes",
                               [](const SweepTable& t) {
                                   std::vector<std::string> names;
                                   for (auto mode : t.modes) names.push_back(to_string(mode));
                                   return names;
                               })
        .def_readonly("mean", &SweepTable::mean)
        .def_readonly("std_error", &SweepTable::std_error)
        .def_readonly("failures", &SweepTable::failures)
        .def_readonly("trials", &SweepTable::trials)
        .def("to_csv", [](const SweepTable& t) {
            std::ostringstream out;
            emit_csv(t, out);
            return out.str();
        });

    m.def(
        "run_trial",
        [](const SystemConfig& cfg, std::uint64_t trial, const std::string& mode) {
            return run_trial(cfg, trial, parse_run_mode(mode));
        },
        py::arg("config"), py::arg("trial"), py::arg("mode"));
    m.def(
        "run_trials",
        [](const SystemConfig& cfg, long n_trials, const std::string& mode) {
            return run_trials(cfg, n_trials, parse_run_mode(mode));
        },
        py::arg("config"), py::arg("trials"), py::arg("mode"));
    m.def(
        "sweep",
        [](const SystemConfig& cfg, const std::string& axis, const std::vector<double>& grid,
           const std::vector<std::string>& mode_names, long trials) {
            std::vector<RunMode> modes;
            for (const auto& name : mode_names) modes.push_back(parse_run_mode(name));
            return sweep(cfg, axis, grid, modes, trials);
        },
        py::arg("config"), py::arg("axis"), py::arg("grid"), py::arg("modes"),
        py::arg("trials"));
    m.def(
        "antenna_histogram",
        [](const std::vector<TrialResult>& results, bool uplink, int n_antennas,
           bool duration_weighted) {
            return antenna_histogram(results, uplink, n_antennas, duration_weighted);
        },
        py::arg("results"), py::arg("uplink"), py::arg("n_antennas"),
        py::arg("duration_weighted") = false);
}
