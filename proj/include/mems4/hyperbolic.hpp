#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mems4/model.hpp"
#include "mems4/operators.hpp"
#include "mems4/trajectory.hpp"

namespace mems4 {

struct HyperbolicRunConfig {
    Params params;
    Grid grid;
    Field u0;
    Field u1;  // initial velocity
    double dt = 5e-4;
    double t_end = 50.0;
    double steady_tol = 1e-8;    // on ||v||_{L2}
    double residual_tol = 1e-6;  // on ||steady_residual(u)||, joint gate
    double quench_floor = 1e-3;
    double dt_min = 1e-8;
    int sample_stride = 20;
    double probe_x = 0.0;
    std::vector<double> snapshot_times;
    const Field* steady_ref = nullptr;

    void validate() const {
        params.validate();
        if (!(dt > 0.0)) throw ValidationError("dt must be positive");
        if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
        if (static_cast<int>(u0.size()) != grid.interior_count() ||
            u1.size() != u0.size())
            throw ValidationError("u0/u1 size does not match grid");
        if (min_gap(u0) <= 0.0)
            throw ValidationError("u0 must satisfy min(1+u0) > 0");
    }
};

// Two-step scheme for u_tt + u_t + K_op u = -lambda/(1+u)^2:
//   (u+ - 2u0 + u-)/dt^2 + (u+ - u-)/(2dt) + K_op (u+ + u-)/2 = f(u0),
// with the stiff term averaged across the outer levels (unconditionally
// stable, second order) and the source explicit at the middle level.
// The system matrix is constant in dt, so callers factor it once per run.
inline SymBandMatrix wave_matrix(const OperatorMatrix& K, double dt) {
    SymBandMatrix a = K.op.scaled(0.5);
    a.shift_diagonal(1.0 / (dt * dt) + 1.0 / (2.0 * dt));
    return a;
}

inline Field wave_step(const Field& u_n, const Field& u_nm1,
                       const Params& p, const OperatorMatrix& K, double dt,
                       const BandFactor& factor) {
    Field f = nonlinearity(u_n, p.lambda);  // throws TouchdownDomain at the wall
    Field ku = K.op.multiply(u_nm1);
    Field rhs(u_n.size());
    const double idt2 = 1.0 / (dt * dt);
    const double idt = 1.0 / (2.0 * dt);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = (2.0 * u_n[i] - u_nm1[i]) * idt2 + u_nm1[i] * idt -
                 0.5 * ku[i] + f[i];
    // The system matrix is persymmetric on the uniform grid; the
    // equivariant solve keeps symmetric data exactly symmetric.
    return factor.solve_persymmetric(rhs);
}

// Taylor start consistent to second order:
// u_1 = u_0 + dt u1 + dt^2/2 (-u1 - K_op u0 - lambda/(1+u0)^2).
inline Field wave_first_step(const Field& u0, const Field& u1,
                             const Params& p, const OperatorMatrix& K,
                             double dt) {
    Field f = nonlinearity(u0, p.lambda);
    Field ku = K.op.multiply(u0);
    Field u(u0.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = u0[i] + dt * u1[i] + 0.5 * dt * dt * (-u1[i] - ku[i] + f[i]);
    return u;
}

// Exact Lyapunov functional of the lambda = 0 scheme: staggered kinetic
// term plus the average of the stiffness energy at the two levels.
inline double wave_scheme_energy(const Field& u_next, const Field& u_curr,
                                 const Grid& g, const OperatorMatrix& K,
                                 double dt) {
    Field d = u_next;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (d[i] - u_curr[i]) / dt;
    double kin = l2_norm(d, g);
    return 0.5 * kin * kin + 0.25 * (K.quad.quadratic_form(u_next) +
                                     K.quad.quadratic_form(u_curr));
}

// F(u2, u1) - F(u1, u0) for the functional above, assembled from level
// differences so the rounding error scales with the step size instead of
// with the absolute energy.
inline double wave_scheme_energy_difference(const Field& u2, const Field& u1,
                                            const Field& u0, const Grid& g,
                                            const OperatorMatrix& K,
                                            double dt) {
    const std::size_t n = u2.size();
    if (u1.size() != n || u0.size() != n)
        throw SizeMismatch("wave_scheme_energy_difference: level sizes differ");
    double kin = 0.0;
    Field s(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = (u2[i] - u1[i]) / dt;
        double d1 = (u1[i] - u0[i]) / dt;
        kin += (d2 + d1) * (d2 - d1);
        s[i] = u2[i] + u0[i];
        d[i] = u2[i] - u0[i];
    }
    Field ks = K.quad.multiply(s);
    double stiff = 0.0;
    for (std::size_t i = 0; i < n; ++i) stiff += d[i] * ks[i];
    return 0.5 * g.h() * kin + 0.25 * stiff;
}

inline std::pair<Trajectory, RunOutcome> hyperbolic_run(
    const HyperbolicRunConfig& cfg) {
    cfg.validate();
    const Grid& g = cfg.grid;
    OperatorMatrix K = assemble_operator(g, cfg.params.B, cfg.params.T);

    Trajectory traj;
    RunOutcome out;
    const double quench_level = -1.0 + cfg.quench_floor;
    const int probe = g.nearest_node(cfg.probe_x);

    double dt = cfg.dt;
    BandFactor factor = BandFactor::factor_spd(wave_matrix(K, dt));
    double factored_dt = dt;

    Field u_prev = cfg.u0;
    Field u_curr = wave_first_step(cfg.u0, cfg.u1, cfg.params, K, dt);
    double t = dt;

    traj.energy0 = energy_hyperbolic(cfg.u0, cfg.u1, cfg.params, g, K);
    // State behind the pairwise energy accumulation (see parabolic_run).
    Field e_prev_u = cfg.u0;
    Field e_prev_v = cfg.u1;
    double energy = traj.energy0;
    double scheme_energy = 0.0;
    bool scheme_chain = false;  // whether scheme_energy continues a chain

    auto record = [&](double tt, const Field& u, const Field& v) {
        TrajectorySample s;
        s.t = tt;
        s.min_u = *std::min_element(u.begin(), u.end());
        s.u_probe = u[probe];
        s.l2_v = l2_norm(v, g);
        s.l2_ut = s.l2_v;
        s.energy = energy_hyperbolic(u, v, cfg.params, g, K);
        if (cfg.steady_ref) {
            Field d = u;
            for (std::size_t i = 0; i < d.size(); ++i)
                d[i] -= (*cfg.steady_ref)[i];
            s.dist_to_steady = l2_norm(d, g);
        }
        traj.samples.push_back(s);
    };
    record(0.0, cfg.u0, cfg.u1);

    auto snapshot_due = [&](double t0, double t1) {
        for (double ts : cfg.snapshot_times)
            if (ts > t0 && ts <= t1) return true;
        return false;
    };

    long step_count = 0;
    int calm_steps = 0;
    while (t < cfg.t_end - 1e-14) {
        if (dt != factored_dt) {
            factor = BandFactor::factor_spd(wave_matrix(K, dt));
            factored_dt = dt;
        }
        Field u_next;
        bool ok = true;
        try {
            u_next = wave_step(u_curr, u_prev, cfg.params, K, dt, factor);
        } catch (const TouchdownDomain&) {
            ok = false;
        }
        double min_next =
            ok ? *std::min_element(u_next.begin(), u_next.end()) : -1.0;

        if (!ok || (min_next <= quench_level && dt > cfg.dt_min)) {
            if (dt <= cfg.dt_min) {
                out.kind = OutcomeKind::Quenched;
                out.t_event = t;
                out.certificate =
                    *std::min_element(u_curr.begin(), u_curr.end());
                out.dt_exhausted = !ok;
                traj.final_state = u_curr;
                return {std::move(traj), std::move(out)};
            }
            // Restart the two-step window at the smaller dt from (u_curr, v).
            Field v(u_curr.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = (u_curr[i] - u_prev[i]) / dt;
            dt = std::max(dt * 0.5, cfg.dt_min);
            u_prev = u_curr;
            u_curr = wave_first_step(u_prev, v, cfg.params, K, dt);
            t += dt;
            calm_steps = 0;
            scheme_chain = false;
            // The Taylor restart is unchecked; if even the short first step
            // crosses the floor, the event is resolved.
            double min_restart =
                *std::min_element(u_curr.begin(), u_curr.end());
            if (min_restart <= quench_level) {
                out.kind = OutcomeKind::Quenched;
                out.t_event = t;
                out.certificate = min_restart;
                traj.final_state = u_curr;
                return {std::move(traj), std::move(out)};
            }
            continue;
        }

        double t_next = t + dt;
        // Centered velocity at the middle level.
        Field v(u_curr.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (u_next[i] - u_prev[i]) / (2.0 * dt);
        double vnorm = l2_norm(v, g);

        Field dmid(u_curr.size());
        for (std::size_t i = 0; i < dmid.size(); ++i)
            dmid[i] = (u_next[i] - u_curr[i]) / dt;
        double denergy = energy_difference_hyperbolic(u_curr, v, e_prev_u,
                                                      e_prev_v, cfg.params, g, K);
        energy += denergy;
        e_prev_u = u_curr;
        e_prev_v = v;
        traj.step_t.push_back(t);
        traj.step_dt.push_back(dt);
        traj.step_energy.push_back(energy);
        traj.step_denergy.push_back(denergy);
        traj.step_rate_l2.push_back(l2_norm(dmid, g));
        if (scheme_chain) {
            double dscheme =
                wave_scheme_energy_difference(u_next, u_curr, u_prev, g, K, dt);
            scheme_energy += dscheme;
            // Rate form of the staggered energy identity: the kinetic,
            // stiffness, and damping terms cancel exactly by construction,
            // so only the potential quadrature error survives.
            if (min_next > -1.0) {
                double dpot = 0.0;
                for (std::size_t i = 0; i < u_next.size(); ++i)
                    dpot += (u_next[i] - u_prev[i]) /
                            ((1.0 + u_next[i]) * (1.0 + u_prev[i]));
                dpot *= 0.5 * cfg.params.lambda * g.h();
                traj.step_identity_residual.push_back(
                    std::abs(dscheme + dpot + dt * vnorm * vnorm) / dt);
            }
        } else {
            scheme_energy = wave_scheme_energy(u_next, u_curr, g, K, dt);
            scheme_chain = true;
        }
        traj.step_scheme_energy.push_back(scheme_energy);

        ++step_count;
        bool sampled = (step_count % cfg.sample_stride == 0);
        if (sampled) record(t, u_curr, v);
        if (snapshot_due(t - dt, t)) traj.snapshots.emplace_back(t, u_curr);

        if (min_next <= quench_level) {
            out.kind = OutcomeKind::Quenched;
            out.t_event = t_next;
            out.certificate = min_next;
            if (!sampled) record(t, u_curr, v);
            traj.final_state = u_next;
            return {std::move(traj), std::move(out)};
        }
        if (vnorm <= cfg.steady_tol) {
            double rnorm =
                l2_norm(steady_residual(u_curr, cfg.params, K), g);
            if (rnorm <= cfg.residual_tol) {
                out.kind = OutcomeKind::Stabilized;
                out.t_event = t;
                out.certificate = vnorm;
                if (!sampled) record(t, u_curr, v);
                traj.final_state = u_curr;
                return {std::move(traj), std::move(out)};
            }
        }

        u_prev = std::move(u_curr);
        u_curr = std::move(u_next);
        t = t_next;
        if (++calm_steps >= 5 && dt < cfg.dt) {
            // Grow dt back by restarting the two-step window from the
            // current level with a backward-difference velocity.
            Field vest(u_curr.size());
            for (std::size_t i = 0; i < vest.size(); ++i)
                vest[i] = (u_curr[i] - u_prev[i]) / dt;
            dt = std::min(dt * 2.0, cfg.dt);
            u_prev = u_curr;
            u_curr = wave_first_step(u_prev, vest, cfg.params, K, dt);
            t += dt;
            calm_steps = 0;
            scheme_chain = false;
        }
    }
    out.kind = OutcomeKind::Timeout;
    out.t_event = t;
    traj.final_state = std::move(u_curr);
    return {std::move(traj), std::move(out)};
}

// Max over steps of |(E_{n+1/2} - E_{n-1/2})/dt + ||u_t||^2| in the
// staggered energy; second order in dt for this scheme.
inline double energy_identity_residual(const Trajectory& traj) {
    double worst = 0.0;
    for (double r : traj.step_identity_residual) worst = std::max(worst, r);
    return worst;
}

}  // namespace mems4
