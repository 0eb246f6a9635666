// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "wppan/config.hpp"
#include "wppan/harvest.hpp"

namespace wppan {

/// Max-min timeslot allocation instance for a fixed activation plan.
struct AllocationProblem {
    HarvestMatrix harvest;             // M x |Q|, watts
    std::vector<double> uplink_gains;  // Psi_m = |g_m|^2 / sigma^2, per user
    double frame_duration = 1.0;       // T
};

struct SolverStats {
    long iterations = 0;
    double level_gap = 0.0;            // final target-level increment
    double feasibility_residual = 0.0; // max(0, sum tau - T)
    bool converged = false;
};

/// Optimized slot durations and the rates they achieve.
struct Schedule {
    std::vector<double> tau_downlink;  // |Q|
    std::vector<double> tau_uplink;    // M
    std::vector<double> rates;         // R_m
    double min_rate = 0.0;             // v
    SolverStats stats;
};

class SolverFailure : public std::runtime_error {
  public:
    SolverFailure(const std::string& what, Schedule best_iterate)
        : std::runtime_error(what), best(std::move(best_iterate)) {}
    Schedule best;
};

/// Uplink rate of one user: tau * log2(1 + psi * energy_sum / tau), extended
/// by continuity to 0 at tau = 0.
double user_rate(double tau_u, double psi, double energy_sum);

/// Maximize min_m R_m over {tau >= 0, sum tau <= T}. Projected supergradient
/// ascent with an adaptive Polyak level step plus an equalization polish;
/// the returned min_rate is within cfg.rel_tol (relative) of the optimum.
/// Throws SolverFailure (carrying the best iterate) on non-convergence.
Schedule solve(const AllocationProblem& problem, const SolverConfig& cfg = {});

/// Brute-force reference: best min-rate over the uniform grid of step
/// `resolution` (seconds) on the simplex face sum(tau) = T. Always a valid
/// lower bound on the optimum; guarded to M + |Q| <= 4 variables.
double grid_oracle(const AllocationProblem& problem, double resolution);

struct ConcavitySample {
    double energy_sum;  // affine image of the downlink durations
    double tau;         // uplink duration
};

struct ConcavityReport {
    double max_eigenvalue = 0.0;        // largest FD-Hessian eigenvalue seen
    // |lambda_fd - lambda_closed| / (|lambda_closed| + 1e-2), worst case
    double max_rel_dev_closed_form = 0.0;
    std::size_t samples = 0;
};

/// Finite-difference Hessian probe of w(e, tau) = tau log2(1 + e psi / tau)
/// at the given positive samples. Reports the largest eigenvalue observed
/// (<= 0 up to FD noise when the surface is concave) and the worst deviation
/// of the negative eigenvalue from its closed form
/// -psi^2 (e^2 + tau^2) / (tau (psi e + tau)^2 ln 2); the second eigenvalue
/// is identically zero.
ConcavityReport concavity_probe(double psi, std::span<const ConcavitySample> samples,
                                double fd_step_rel = 5e-4);

/// Closed-form nonzero Hessian eigenvalue of the rate surface (see probe).
double rate_hessian_eigenvalue(double psi, double energy_sum, double tau);

}  // namespace wppan
