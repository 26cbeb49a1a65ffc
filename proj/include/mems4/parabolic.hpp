#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mems4/model.hpp"
#include "mems4/newton.hpp"
#include "mems4/operators.hpp"
#include "mems4/trajectory.hpp"

namespace mems4 {

struct StepNewtonFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParabolicRunConfig {
    Params params;
    Grid grid;
    Field u0;
    double dt = 1e-3;
    double t_end = 200.0;
    double steady_tol = 1e-8;       // on ||u^{n+1}-u^n|| / dt
    double quench_floor = 1e-3;     // quenched once min u <= -1 + quench_floor
    double dt_min = 1e-8;
    int sample_stride = 10;
    double probe_x = 0.0;
    std::vector<double> snapshot_times;
    const Field* steady_ref = nullptr;  // optional psi for dist_to_steady

    void validate() const {
        params.validate();
        if (!(dt > 0.0)) throw ValidationError("dt must be positive");
        if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
        if (static_cast<int>(u0.size()) != grid.interior_count())
            throw ValidationError("u0 size does not match grid");
        if (min_gap(u0) <= 0.0)
            throw ValidationError("u0 must satisfy min(1+u0) > 0");
    }
};

// One implicit Euler step: solve
//   (u - u_n)/dt + K_op u + lambda/(1+u)^2 = 0
// by damped Newton, warm-started at u_n.
inline Field parabolic_step(const Field& u_n, const ParabolicRunConfig& cfg,
                            const OperatorMatrix& K, double dt) {
    const double lambda = cfg.params.lambda;
    auto residual = [&](const Field& u) {
        Field r = steady_residual(u, cfg.params, K);
        for (std::size_t i = 0; i < u.size(); ++i)
            r[i] += (u[i] - u_n[i]) / dt;
        return r;
    };
    auto jacobian = [&](const Field& u) {
        SymBandMatrix j = K.op;
        Field w = nonlinearity_derivative(u, lambda);
        for (double& v : w) v = 1.0 / dt - v;
        j.add_to_diagonal(w);
        return j;
    };
    NewtonOptions nopt;
    nopt.tol = 1e-10;
    // The residual carries a 1/dt mass term, so its evaluation floor grows
    // as dt shrinks; without this allowance the event refinement loop would
    // read rounding noise as non-convergence.
    nopt.stall_tol = residual_rounding_floor(K) + 1e-16 / dt;
    auto [u, rep] = newton(residual, jacobian, cfg.grid, u_n, nopt);
    if (!rep.converged)
        throw StepNewtonFailed("parabolic step Newton failed: " + rep.failure);
    return u;
}

inline Field parabolic_step(const Field& u_n, const ParabolicRunConfig& cfg,
                            const OperatorMatrix& K) {
    return parabolic_step(u_n, cfg, K, cfg.dt);
}

namespace detail {

inline void record_sample(Trajectory& traj, double t, const Field& u,
                          double l2_ut, double energy,
                          const ParabolicRunConfig& cfg,
                          const OperatorMatrix& K) {
    TrajectorySample s;
    s.t = t;
    s.min_u = u.empty() ? 0.0 : *std::min_element(u.begin(), u.end());
    s.u_probe = u[cfg.grid.nearest_node(cfg.probe_x)];
    s.l2_ut = l2_ut;
    s.energy = energy;
    if (cfg.steady_ref) {
        Field d = u;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= (*cfg.steady_ref)[i];
        s.dist_to_steady = l2_norm(d, cfg.grid);
    }
    traj.samples.push_back(s);
}

}  // namespace detail

// Integrate until quench, stabilization, or t_end.  dt halves after a
// failed Newton step or when a step would jump past the quench floor, so
// the quench time is bracketed to dt_min; it recovers toward cfg.dt after
// a run of accepted steps.
inline std::pair<Trajectory, RunOutcome> parabolic_run(
    const ParabolicRunConfig& cfg) {
    cfg.validate();
    const Grid& g = cfg.grid;
    OperatorMatrix K = assemble_operator(g, cfg.params.B, cfg.params.T);

    Trajectory traj;
    RunOutcome out;
    Field u = cfg.u0;
    double t = 0.0;
    double dt = cfg.dt;
    const double quench_level = -1.0 + cfg.quench_floor;

    double energy = energy_parabolic(u, cfg.params, g, K);
    traj.energy0 = energy;
    detail::record_sample(traj, t, u, 0.0, energy, cfg, K);

    auto snapshot_due = [&](double t0, double t1) {
        for (double ts : cfg.snapshot_times)
            if (ts > t0 && ts <= t1) return true;
        return false;
    };

    long step_count = 0;
    int calm_steps = 0;
    while (t < cfg.t_end - 1e-14) {
        double dt_step = std::min(dt, cfg.t_end - t);
        Field u_next;
        bool ok = true;
        try {
            u_next = parabolic_step(u, cfg, K, dt_step);
        } catch (const StepNewtonFailed&) {
            ok = false;
        }
        double min_next =
            ok ? *std::min_element(u_next.begin(), u_next.end()) : 0.0;

        if (!ok || (min_next <= quench_level && dt_step > cfg.dt_min)) {
            // Refine toward the event instead of accepting the crossing.
            if (dt <= cfg.dt_min) {
                out.kind = OutcomeKind::Quenched;
                out.t_event = t;
                out.certificate = u.empty() ? -1.0
                    : *std::min_element(u.begin(), u.end());
                out.dt_exhausted = !ok;
                traj.final_state = u;
                return {std::move(traj), std::move(out)};
            }
            dt = std::max(dt * 0.5, cfg.dt_min);
            calm_steps = 0;
            continue;
        }

        double t_next = t + dt_step;
        double rate = 0.0;
        {
            Field d = u_next;
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= u[i];
            rate = l2_norm(d, g) / dt_step;
        }
        // Accumulate the energy through pairwise differences: the difference
        // form has rounding error proportional to ||u_next - u||, so the
        // dissipation sign survives even when the steps are tiny.
        double denergy = energy_difference_parabolic(u_next, u, cfg.params, g, K);
        double energy_next = energy + denergy;
        traj.step_t.push_back(t_next);
        traj.step_dt.push_back(dt_step);
        traj.step_energy.push_back(energy_next);
        traj.step_denergy.push_back(denergy);
        traj.step_rate_l2.push_back(rate);

        if (snapshot_due(t, t_next)) traj.snapshots.emplace_back(t_next, u_next);

        ++step_count;
        bool sampled = (step_count % cfg.sample_stride == 0);
        if (sampled)
            detail::record_sample(traj, t_next, u_next, rate, energy_next, cfg, K);

        u = std::move(u_next);
        t = t_next;
        energy = energy_next;

        if (min_next <= quench_level) {
            out.kind = OutcomeKind::Quenched;
            out.t_event = t;
            out.certificate = min_next;
            if (!sampled)
                detail::record_sample(traj, t, u, rate, energy, cfg, K);
            traj.final_state = u;
            return {std::move(traj), std::move(out)};
        }
        if (rate <= cfg.steady_tol) {
            out.kind = OutcomeKind::Stabilized;
            out.t_event = t;
            out.certificate = rate;
            if (!sampled)
                detail::record_sample(traj, t, u, rate, energy, cfg, K);
            traj.final_state = u;
            return {std::move(traj), std::move(out)};
        }
        // Grow dt back after sustained success away from the floor.
        if (++calm_steps >= 5 && dt < cfg.dt) {
            dt = std::min(dt * 2.0, cfg.dt);
            calm_steps = 0;
        }
    }
    out.kind = OutcomeKind::Timeout;
    out.t_event = t;
    if (traj.samples.empty() || traj.samples.back().t < t) {
        double rate = traj.step_rate_l2.empty() ? 0.0 : traj.step_rate_l2.back();
        detail::record_sample(traj, t, u, rate, energy, cfg, K);
    }
    traj.final_state = std::move(u);
    return {std::move(traj), std::move(out)};
}

// First time min u reaches -1 + quench_floor; empty for Stabilized/Timeout.
inline std::optional<double> quench_time(const ParabolicRunConfig& cfg) {
    auto [traj, out] = parabolic_run(cfg);
    if (out.kind != OutcomeKind::Quenched) return std::nullopt;
    return out.t_event;
}

}  // namespace mems4
