// SPDX-License-Identifier: Apache-2.0
#include "wppan/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace wppan {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

// w_m = sum_q tau_d[q] * Phi[m][q]
void energy_sums(const AllocationProblem& p, std::span<const double> tau_d,
                 std::vector<double>& w) {
    const std::size_t m_users = p.harvest.users;
    const std::size_t q_slots = p.harvest.slots;
    w.assign(m_users, 0.0);
    for (std::size_t m = 0; m < m_users; ++m) {
        double acc = 0.0;
        const double* row = &p.harvest.values[m * q_slots];
        for (std::size_t q = 0; q < q_slots; ++q) acc += tau_d[q] * row[q];
        w[m] = acc;
    }
}

// Euclidean projection onto {x >= 0, sum x <= budget}.
void project_simplex(std::vector<double>& x, double budget, std::vector<double>& scratch) {
    double pos_sum = 0.0;
    for (double v : x)
        if (v > 0.0) pos_sum += v;
    if (pos_sum <= budget) {
        for (double& v : x) v = std::max(v, 0.0);
        return;
    }
    // Project onto {x >= 0, sum x = budget} (threshold rule, sorted scan).
    scratch.assign(x.begin(), x.end());
    std::sort(scratch.begin(), scratch.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        cumulative += scratch[i];
        const double t = (cumulative - budget) / static_cast<double>(i + 1);
        if (scratch[i] - t > 0.0) theta = t;
    }
    for (double& v : x) v = std::max(v - theta, 0.0);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    constexpr double inv_phi = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Single-user ceiling: whole frame plus the user's best slot. Valid upper
// bound on the max-min value because every rate grows in both time shares.
double single_user_bound(const AllocationProblem& p, std::size_t m) {
    const std::size_t q_slots = p.harvest.slots;
    double phi_max = 0.0;
    for (std::size_t q = 0; q < q_slots; ++q)
        phi_max = std::max(phi_max, p.harvest.at(m, q));
    const double psi = p.uplink_gains[m];
    const double t_total = p.frame_duration;
    if (phi_max <= 0.0 || psi <= 0.0) return 0.0;
    auto rate_at = [&](double tau0) {
        return user_rate(t_total - tau0, psi, phi_max * tau0);
    };
    const double tau0 = golden_max(rate_at, 0.0, t_total, 90);
    return rate_at(tau0);
}

// Smallest uplink duration reaching rate v against composite gain c = psi*w.
// The rate is concave increasing in tau, so Newton lands left of the root
// after one step and then climbs monotonically, from any positive start.
double required_uplink(double v, double c, double hi, double warm) {
    if (v <= 0.0) return 0.0;
    double tau = (warm > 0.0 && warm <= hi) ? warm : hi;
    for (int i = 0; i < 60; ++i) {
        const double u = c / tau;
        const double g = tau * std::log1p(u) / kLn2 - v;
        const double dg = (std::log1p(u) - u / (1.0 + u)) / kLn2;
        if (dg <= 0.0) break;
        const double next = tau - g / dg;
        if (!(next > 0.0)) {
            tau *= 0.5;
            continue;
        }
        const bool done = std::abs(next - tau) <= 1e-14 * tau;
        tau = next;
        if (done) break;
    }
    return std::clamp(tau, 0.0, hi);
}

// Marginal rate dR/dtau at the point where rate v is met.
double rate_slope(double c, double tau) {
    const double z = c / tau;
    return (std::log1p(z) - z / (1.0 + z)) / kLn2;
}

// Value of the downlink duration vector after maximizing over the uplink
// shares: with every rate increasing in its own share, the inner optimum
// spends the whole remaining time and equalizes the user rates.
struct ReducedEval {
    double value = 0.0;
    std::vector<double> w;      // per-user energy sums
    std::vector<double> tau_u;  // equalized uplink shares (sum <= T_u)
};

ReducedEval reduced_evaluate(const AllocationProblem& p, std::span<const double> tau_d,
                             double t_up, double v_warm = 0.0) {
    const std::size_t m_users = p.harvest.users;
    ReducedEval ev;
    ev.tau_u.assign(m_users, 0.0);
    energy_sums(p, tau_d, ev.w);
    if (t_up <= 0.0) return ev;
    double v_hi = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < m_users; ++m)
        v_hi = std::min(v_hi, user_rate(t_up, p.uplink_gains[m], ev.w[m]));
    if (!(v_hi > 0.0)) return ev;

    // Safeguarded Newton on G(v) = sum_m tau_req_m(v) - T_u, which is convex
    // increasing with G(0) < 0 <= G(v_hi); bisection backs up any step that
    // leaves the bracket.
    double v_lo = 0.0;
    double v = (v_warm > 0.0 && v_warm < v_hi) ? v_warm : 0.5 * v_hi;
    double last_gap = -t_up;
    auto& tau = ev.tau_u;
    for (std::size_t m = 0; m < m_users; ++m) tau[m] = t_up;
    for (int iter = 0; iter < 60; ++iter) {
        double used = 0.0;
        double slope_sum = 0.0;
        for (std::size_t m = 0; m < m_users; ++m) {
            const double c = p.uplink_gains[m] * ev.w[m];
            tau[m] = required_uplink(v, c, t_up, tau[m]);
            used += tau[m];
            slope_sum += 1.0 / std::max(rate_slope(c, std::max(tau[m], 1e-300)), 1e-300);
        }
        last_gap = used - t_up;
        if (std::abs(last_gap) <= 1e-12 * t_up) break;  // tight from either side
        if (last_gap > 0.0)
            v_hi = v;
        else
            v_lo = v;
        double next = v - last_gap / slope_sum;
        if (!(next > v_lo) || !(next < v_hi)) next = 0.5 * (v_lo + v_hi);
        if (std::abs(next - v) <= 1e-15 * v) {
            v = next;
            break;
        }
        v = next;
    }

    // Rebuild at the converged level (fall back to the feasible bracket end
    // if Newton somehow finished wide), then make the budget exact: scale
    // down on overshoot, spread slack evenly otherwise.
    const double v_final = std::abs(last_gap) <= 1e-9 * t_up ? v : v_lo;
    double used = 0.0;
    for (std::size_t m = 0; m < m_users; ++m) {
        tau[m] = required_uplink(v_final, p.uplink_gains[m] * ev.w[m], t_up, tau[m]);
        used += tau[m];
    }
    if (used > t_up) {
        const double shrink = t_up / used;
        for (std::size_t m = 0; m < m_users; ++m) tau[m] *= shrink;
    } else {
        const double leftover = (t_up - used) / static_cast<double>(m_users);
        for (std::size_t m = 0; m < m_users; ++m) tau[m] += leftover;
    }
    double value = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < m_users; ++m)
        value = std::min(value, user_rate(tau[m], p.uplink_gains[m], ev.w[m]));
    ev.value = value;
    return ev;
}

// Supergradient of the reduced value function via implicit differentiation
// of the equal-rate conditions: with a_m = dR/dtau and b_m = dR/dw at the
// equalized point, dv/dtau_q = (sum_m (b_m/a_m) Phi[m][q] - 1) / sum_m 1/a_m.
void reduced_supergradient(const AllocationProblem& p, const ReducedEval& ev, double t_up,
                           std::vector<double>& g) {
    const std::size_t m_users = p.harvest.users;
    const std::size_t q_slots = p.harvest.slots;
    g.assign(q_slots, 0.0);

    if (t_up <= 0.0) {
        // Boundary: all frame time downlink. Freeing any downlink time helps.
        g.assign(q_slots, -1.0);
        return;
    }
    if (!(ev.value > 0.0)) {
        // Some user is starved; climb toward whatever feeds the starved set.
        for (std::size_t m = 0; m < m_users; ++m) {
            if (p.uplink_gains[m] * ev.w[m] > 0.0) continue;
            for (std::size_t q = 0; q < q_slots; ++q) g[q] += p.harvest.at(m, q);
        }
        return;
    }

    double denom = 0.0;
    std::vector<double> weight(m_users, 0.0);  // b_m / a_m
    for (std::size_t m = 0; m < m_users; ++m) {
        const double tau = std::max(ev.tau_u[m], 1e-300);
        const double z = p.uplink_gains[m] * ev.w[m] / tau;
        const double log_term = std::log1p(z) / kLn2;
        const double a = log_term - z / (kLn2 * (1.0 + z));
        const double b = p.uplink_gains[m] / (kLn2 * (1.0 + z));
        const double a_safe = std::max(a, 1e-300);
        denom += 1.0 / a_safe;
        weight[m] = b / a_safe;
    }
    for (std::size_t q = 0; q < q_slots; ++q) {
        double acc = -1.0;
        for (std::size_t m = 0; m < m_users; ++m) acc += weight[m] * p.harvest.at(m, q);
        g[q] = acc / denom;
    }
}

struct PolishResult {
    double value = 0.0;
    std::vector<double> tau_d;
    std::vector<double> tau_u;
};

// Exact optimization along the ray tau_d = tau0 * profile: golden section
// over tau0 with the uplink equalized at every point.
PolishResult polish_profile(const AllocationProblem& p, std::span<const double> profile) {
    const std::size_t q_slots = p.harvest.slots;
    const double t_total = p.frame_duration;

    PolishResult out;
    out.tau_d.assign(q_slots, 0.0);
    out.tau_u.assign(p.harvest.users, 0.0);

    std::vector<double> tau_d(q_slots);
    double v_warm = 0.0;
    auto eval_at = [&](double tau0) {
        for (std::size_t q = 0; q < q_slots; ++q) tau_d[q] = profile[q] * tau0;
        return reduced_evaluate(p, tau_d, t_total - tau0, v_warm);
    };
    const double tau0 = golden_max(
        [&](double t) {
            const double v = eval_at(t).value;
            if (v > 0.0) v_warm = v;
            return v;
        },
        0.0, t_total, 70);
    ReducedEval ev = eval_at(tau0);
    if (!(ev.value > 0.0)) return out;
    out.value = ev.value;
    out.tau_d = tau_d;
    out.tau_u = std::move(ev.tau_u);
    return out;
}

Schedule make_schedule(const AllocationProblem& p, std::span<const double> tau_d,
                       std::span<const double> tau_u) {
    Schedule s;
    s.tau_downlink.assign(tau_d.begin(), tau_d.end());
    s.tau_uplink.assign(tau_u.begin(), tau_u.end());
    std::vector<double> w;
    energy_sums(p, tau_d, w);
    s.rates.resize(p.harvest.users);
    s.min_rate = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < p.harvest.users; ++m) {
        s.rates[m] = user_rate(tau_u[m], p.uplink_gains[m], w[m]);
        s.min_rate = std::min(s.min_rate, s.rates[m]);
    }
    const double total = std::accumulate(tau_d.begin(), tau_d.end(), 0.0) +
                         std::accumulate(tau_u.begin(), tau_u.end(), 0.0);
    s.stats.feasibility_residual = std::max(0.0, total - p.frame_duration);
    return s;
}

void validate_problem(const AllocationProblem& p) {
    if (p.harvest.users == 0 || p.harvest.slots == 0)
        throw std::invalid_argument("solve: empty harvest matrix");
    if (p.harvest.values.size() != p.harvest.users * p.harvest.slots)
        throw std::invalid_argument("solve: harvest matrix shape mismatch");
    if (p.uplink_gains.size() != p.harvest.users)
        throw std::invalid_argument("solve: uplink gain count mismatch");
    if (!(p.frame_duration > 0.0))
        throw std::invalid_argument("solve: frame duration must be positive");
    for (double psi : p.uplink_gains)
        if (psi < 0.0) throw std::invalid_argument("solve: negative uplink gain");
    for (double phi : p.harvest.values)
        if (phi < 0.0) throw std::invalid_argument("solve: negative harvest entry");
}

}  // namespace

double user_rate(double tau_u, double psi, double energy_sum) {
    if (!(tau_u > 0.0) || !(psi > 0.0) || !(energy_sum > 0.0)) return 0.0;
    return tau_u * std::log1p(psi * energy_sum / tau_u) / kLn2;
}

namespace {

// Level-controlled projected supergradient ascent on the reduced value
// function over the downlink durations.
Schedule solve_direct(const AllocationProblem& problem, const SolverConfig& cfg) {
    const std::size_t q_slots = problem.harvest.slots;
    const std::size_t m_users = problem.harvest.users;
    const double t_total = problem.frame_duration;

    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < m_users; ++m)
        upper = std::min(upper, single_user_bound(problem, m));

    double f_best = 0.0;
    std::vector<double> x_best(q_slots, 0.0);
    auto consider_polish = [&](const PolishResult& pr) {
        if (pr.value > f_best) {
            f_best = pr.value;
            x_best = pr.tau_d;
            return true;
        }
        return false;
    };

    // Starting candidates: the uniform profile and the mixture of each
    // user's own best slot.
    {
        std::vector<double> profile(q_slots, 1.0 / static_cast<double>(q_slots));
        consider_polish(polish_profile(problem, profile));
        profile.assign(q_slots, 0.0);
        for (std::size_t m = 0; m < m_users; ++m) {
            std::size_t best_q = 0;
            for (std::size_t q = 1; q < q_slots; ++q)
                if (problem.harvest.at(m, q) > problem.harvest.at(m, best_q)) best_q = q;
            profile[best_q] += 1.0 / static_cast<double>(m_users);
        }
        consider_polish(polish_profile(problem, profile));
    }

    const double rtol = cfg.rel_tol;
    auto scale = [&]() { return std::max(f_best, 1e-12 * std::max(upper, 1.0)); };

    auto polish_incumbent = [&]() {
        double dl_total = 0.0;
        for (double v : x_best) dl_total += v;
        if (dl_total <= 0.0) return false;
        std::vector<double> profile(q_slots);
        for (std::size_t q = 0; q < q_slots; ++q) profile[q] = x_best[q] / dl_total;
        return consider_polish(polish_profile(problem, profile));
    };

    std::vector<double> x = x_best;
    std::vector<double> g, scratch;
    double delta = std::max(upper - f_best, rtol * scale());
    double path = 0.0;
    const double path_budget = 2.0 * t_total;
    double f_record = f_best;
    // Progress marks: a window without a rtol/8-sized gain counts as a stall
    // at the current target level.
    double mark_value = f_best;
    long mark_iter = 0;
    bool converged = false;

    double v_warm = f_best;
    long k = 0;
    for (; k < cfg.max_iters; ++k) {
        if (upper - f_best <= 0.25 * rtol * scale()) {
            converged = true;  // certified against the single-user ceiling
            break;
        }
        double dl_total = 0.0;
        for (double v : x) dl_total += v;
        const ReducedEval ev = reduced_evaluate(problem, x, t_total - dl_total, v_warm);
        if (ev.value > 0.0) v_warm = ev.value;
        if (ev.value > f_best) {
            f_best = ev.value;
            x_best = x;
        }
        reduced_supergradient(problem, ev, t_total - dl_total, g);
        double g_norm2 = 0.0;
        for (double v : g) g_norm2 += v * v;
        if (g_norm2 <= 0.0) {
            converged = true;
            break;
        }
        const double level = std::min(f_best + delta, upper);
        double step = (level - ev.value) / g_norm2;
        const double g_norm = std::sqrt(g_norm2);
        step = std::clamp(step, 0.0, t_total / g_norm);
        for (std::size_t q = 0; q < q_slots; ++q) x[q] += step * g[q];
        project_simplex(x, t_total, scratch);
        path += step * g_norm;

        if (f_best - f_record >= 0.5 * delta) {
            f_record = f_best;
            path = 0.0;
        } else if (path >= path_budget) {
            delta *= 0.5;
            f_record = f_best;
            path = 0.0;
        }

        if (f_best >= mark_value + 0.125 * rtol * scale()) {
            mark_value = f_best;
            mark_iter = k;
        } else if (k - mark_iter >= cfg.window) {
            // Stalled: let the ray polish try the incumbent profile, then
            // either call the target level met or aim lower.
            if (polish_incumbent()) x = x_best;
            if (f_best >= mark_value + 0.125 * rtol * scale()) {
                mark_value = f_best;
                mark_iter = k;
                f_record = f_best;
                path = 0.0;
            } else if (delta <= 0.25 * rtol * scale()) {
                converged = true;  // whole window at the final level, no gain
                break;
            } else {
                delta *= 0.25;
                mark_iter = k;
                f_record = f_best;
                path = 0.0;
            }
        }
    }

    polish_incumbent();
    if (upper - f_best <= 0.25 * rtol * scale()) converged = true;

    // Snap numerically-zero slot durations before the final equalization.
    for (double& v : x_best)
        if (v < cfg.projection_tol * t_total) v = 0.0;
    double dl_total = 0.0;
    for (double v : x_best) dl_total += v;
    const ReducedEval final_ev = reduced_evaluate(problem, x_best, t_total - dl_total);
    Schedule s = make_schedule(problem, x_best, final_ev.tau_u);
    s.stats.iterations = k;
    s.stats.level_gap = delta;
    s.stats.converged = converged;
    if (!converged)
        throw SolverFailure("timeslot solver did not reach the requested tolerance in " +
                                std::to_string(cfg.max_iters) + " iterations",
                            s);
    return s;
}

// Simplicial decomposition for wide harvest matrices: the optimum needs at
// most a handful of downlink slots, the reduced gradient is linear in the
// harvest column, and a slot prices into the working set only if its
// gradient component is positive at the restricted optimum.
Schedule solve_columns(const AllocationProblem& problem, const SolverConfig& cfg) {
    const std::size_t q_slots = problem.harvest.slots;
    const std::size_t m_users = problem.harvest.users;
    const double t_total = problem.frame_duration;

    std::vector<std::size_t> working;
    auto add_column = [&](std::size_t q) {
        for (std::size_t s : working)
            if (s == q) return false;
        working.push_back(q);
        return true;
    };
    for (std::size_t m = 0; m < m_users; ++m) {
        std::size_t best_q = 0;
        for (std::size_t q = 1; q < q_slots; ++q)
            if (problem.harvest.at(m, q) > problem.harvest.at(m, best_q)) best_q = q;
        add_column(best_q);
    }

    Schedule sub_schedule;
    long total_iterations = 0;
    bool sub_converged = true;
    const std::size_t max_rounds = 8 * m_users + 16;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        AllocationProblem sub;
        sub.uplink_gains = problem.uplink_gains;
        sub.frame_duration = t_total;
        sub.harvest = HarvestMatrix(m_users, working.size());
        for (std::size_t m = 0; m < m_users; ++m)
            for (std::size_t i = 0; i < working.size(); ++i)
                sub.harvest.at(m, i) = problem.harvest.at(m, working[i]);

        sub_converged = true;
        try {
            sub_schedule = solve_direct(sub, cfg);
        } catch (const SolverFailure& failure) {
            sub_schedule = failure.best;
            sub_converged = false;
        }
        total_iterations += sub_schedule.stats.iterations;

        // Price all columns at the restricted optimum: with a_m = dR/dtau and
        // b_m = dR/dw, a slot improves the value only if
        // sum_m (b_m/a_m) Phi[m][q] > 1.
        std::vector<double> w(m_users, 0.0);
        for (std::size_t m = 0; m < m_users; ++m)
            for (std::size_t i = 0; i < working.size(); ++i)
                w[m] += sub_schedule.tau_downlink[i] * sub.harvest.at(m, i);
        std::vector<double> weight(m_users, 0.0);
        bool value_positive = sub_schedule.min_rate > 0.0;
        for (std::size_t m = 0; m < m_users && value_positive; ++m) {
            const double tau = sub_schedule.tau_uplink[m];
            if (!(tau > 0.0)) {
                value_positive = false;
                break;
            }
            const double z = problem.uplink_gains[m] * w[m] / tau;
            const double a = (std::log1p(z) - z / (1.0 + z)) / kLn2;
            const double b = problem.uplink_gains[m] / (kLn2 * (1.0 + z));
            weight[m] = b / std::max(a, 1e-300);
        }
        if (!value_positive) break;  // degenerate restricted optimum

        std::size_t best_q = q_slots;
        double best_score = 1.0 + 0.1 * cfg.rel_tol;
        for (std::size_t q = 0; q < q_slots; ++q) {
            double score = 0.0;
            for (std::size_t m = 0; m < m_users; ++m)
                score += weight[m] * problem.harvest.at(m, q);
            if (score > best_score) {
                best_score = score;
                best_q = q;
            }
        }
        if (best_q == q_slots || !add_column(best_q)) break;  // priced out
    }

    Schedule s;
    s.tau_downlink.assign(q_slots, 0.0);
    for (std::size_t i = 0; i < working.size(); ++i)
        s.tau_downlink[working[i]] = sub_schedule.tau_downlink[i];
    s.tau_uplink = sub_schedule.tau_uplink;
    s.rates = sub_schedule.rates;
    s.min_rate = sub_schedule.min_rate;
    s.stats = sub_schedule.stats;
    s.stats.iterations = total_iterations;
    s.stats.converged = sub_converged;
    if (!sub_converged)
        throw SolverFailure("timeslot solver did not converge on the working slot set", s);
    return s;
}

}  // namespace

Schedule solve(const AllocationProblem& problem, const SolverConfig& cfg) {
    validate_problem(problem);
    const std::size_t q_slots = problem.harvest.slots;
    const std::size_t m_users = problem.harvest.users;

    // A user with no uplink gain or no reachable harvest pins the optimum at
    // zero; the canonical answer is the all-zero schedule.
    bool degenerate = false;
    for (std::size_t m = 0; m < m_users; ++m) {
        double phi_max = 0.0;
        for (std::size_t q = 0; q < q_slots; ++q)
            phi_max = std::max(phi_max, problem.harvest.at(m, q));
        if (problem.uplink_gains[m] <= 0.0 || phi_max <= 0.0) degenerate = true;
    }
    if (degenerate) {
        std::vector<double> zero_d(q_slots, 0.0), zero_u(m_users, 0.0);
        Schedule s = make_schedule(problem, zero_d, zero_u);
        s.stats.converged = true;
        return s;
    }

    if (q_slots > m_users + 2) return solve_columns(problem, cfg);
    return solve_direct(problem, cfg);
}

double grid_oracle(const AllocationProblem& problem, double resolution) {
    validate_problem(problem);
    const std::size_t q_slots = problem.harvest.slots;
    const std::size_t m_users = problem.harvest.users;
    const std::size_t dim = q_slots + m_users;
    if (dim > 4)
        throw std::invalid_argument("grid_oracle handles at most 4 duration variables");
    if (!(resolution > 0.0))
        throw std::invalid_argument("grid_oracle: resolution must be positive");

    const double t_total = problem.frame_duration;
    const long k_steps = std::max<long>(1, std::llround(t_total / resolution));
    // Compositions of k_steps into dim parts; every rate is nondecreasing in
    // every duration, so the optimum sits on the face sum(tau) = T and the
    // grid only needs to cover that face.
    double points = 1.0;
    for (std::size_t i = 1; i < dim; ++i)
        points *= static_cast<double>(k_steps + static_cast<long>(i)) / static_cast<double>(i);
    if (points > 6e7)
        throw std::invalid_argument("grid_oracle: grid of " + std::to_string(points) +
                                    " points exceeds the cost guard");

    const double h = t_total / static_cast<double>(k_steps);
    std::vector<double> tau(dim, 0.0);
    double best = 0.0;

    // Depth-first over coordinates; partial energy sums are carried down so
    // the innermost loop touches each user once.
    std::vector<double> w_partial(m_users, 0.0);
    std::function<void(std::size_t, long, std::vector<double>&)> visit =
        [&](std::size_t coord, long remaining, std::vector<double>& w) {
            if (coord == dim - 1) {
                tau[coord] = static_cast<double>(remaining) * h;
                // The last coordinate is an uplink share (m_users >= 1).
                double v = std::numeric_limits<double>::infinity();
                for (std::size_t m = 0; m + 1 < m_users; ++m)
                    v = std::min(v, user_rate(tau[q_slots + m], problem.uplink_gains[m], w[m]));
                v = std::min(v, user_rate(tau[dim - 1], problem.uplink_gains[m_users - 1],
                                          w[m_users - 1]));
                best = std::max(best, v);
                return;
            }
            for (long steps = 0; steps <= remaining; ++steps) {
                tau[coord] = static_cast<double>(steps) * h;
                if (coord < q_slots) {
                    std::vector<double> w_next = w;
                    for (std::size_t m = 0; m < m_users; ++m)
                        w_next[m] += tau[coord] * problem.harvest.at(m, coord);
                    visit(coord + 1, remaining - steps, w_next);
                } else {
                    visit(coord + 1, remaining - steps, w);
                }
            }
        };
    visit(0, k_steps, w_partial);
    return best;
}

double rate_hessian_eigenvalue(double psi, double energy_sum, double tau) {
    const double denom = tau * (psi * energy_sum + tau) * (psi * energy_sum + tau) * kLn2;
    return -psi * psi * (energy_sum * energy_sum + tau * tau) / denom;
}

ConcavityReport concavity_probe(double psi, std::span<const ConcavitySample> samples,
                                double fd_step_rel) {
    ConcavityReport report;
    report.samples = samples.size();
    report.max_eigenvalue = -std::numeric_limits<double>::infinity();

    auto f = [psi](double e, double t) { return user_rate(t, psi, e); };
    // Fourth-order stencils keep the roundoff/truncation balance well below
    // the 1e-6 eigenvalue budget across several decades of sample magnitude.
    auto d2_axis = [&](double e, double t, bool wrt_tau, double h) {
        auto at = [&](double off) { return wrt_tau ? f(e, t + off) : f(e + off, t); };
        return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) /
               (12 * h * h);
    };
    auto d2_cross = [&](double e, double t, double he, double ht) {
        const double c[4] = {-1.0, 8.0, -8.0, 1.0};
        const double off[4] = {2.0, 1.0, -1.0, -2.0};
        double acc = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                acc += c[i] * c[j] * f(e + off[i] * he, t + off[j] * ht);
        return acc / (144.0 * he * ht);
    };

    for (const auto& s : samples) {
        const double he = fd_step_rel * s.energy_sum;
        const double ht = fd_step_rel * s.tau;
        const double h11 = d2_axis(s.energy_sum, s.tau, false, he);
        const double h22 = d2_axis(s.energy_sum, s.tau, true, ht);
        const double h12 = d2_cross(s.energy_sum, s.tau, he, ht);
        const double mean = 0.5 * (h11 + h22);
        const double radius = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
        const double lambda_max = mean + radius;
        const double lambda_min = mean - radius;
        report.max_eigenvalue = std::max(report.max_eigenvalue, lambda_max);
        const double closed = rate_hessian_eigenvalue(psi, s.energy_sum, s.tau);
        // regularized: tiny closed-form eigenvalues would otherwise turn FD
        // noise into spurious relative error
        const double dev = std::abs(lambda_min - closed) / (std::abs(closed) + 1e-2);
        report.max_rel_dev_closed_form = std::max(report.max_rel_dev_closed_form, dev);
    }
    if (samples.empty()) report.max_eigenvalue = 0.0;
    return report;
}

}  // namespace wppan
