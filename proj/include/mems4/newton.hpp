#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mems4/banded.hpp"
#include "mems4/grid.hpp"
#include "mems4/operators.hpp"

namespace mems4 {

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double final_residual_norm = std::numeric_limits<double>::infinity();
    std::vector<double> step_damping_history;
    std::vector<double> residual_history;  // L2 norm after each iteration
    std::string failure;                   // empty when converged
};

struct NewtonOptions {
    double tol = 1e-10;      // absolute, L2 norm of the residual
    int max_iter = 50;
    double barrier_floor = 1e-6;  // enforce min(1 + u) > this
    bool enforce_barrier = true;
    // Residual level treated as converged when the line search can no
    // longer descend.  The stiffness rows are O(B/h^4), so the residual of
    // the exact discrete root evaluates to ~eps * max_diag * ||u|| in
    // floating point; at N = 256 that floor exceeds 1e-10.
    double stall_tol = 0.0;
};

// Damped Newton for F(u) = 0 with a banded symmetric Jacobian.  The step
// is halved while the residual norm fails to decrease or while the
// barrier min(1 + u) > barrier_floor is violated; at most 30 halvings.
// Failures are reported, never thrown.
inline std::pair<Field, NewtonReport> newton(
    const std::function<Field(const Field&)>& residual,
    const std::function<SymBandMatrix(const Field&)>& jacobian,
    const Grid& grid, Field u0, const NewtonOptions& opt = {}) {
    NewtonReport rep;
    Field u = std::move(u0);
    Field r = residual(u);
    double rnorm = l2_norm(r, grid);
    rep.residual_history.push_back(rnorm);

    for (int it = 0; it < opt.max_iter; ++it) {
        if (rnorm <= opt.tol) {
            rep.converged = true;
            break;
        }
        BandFactor f;
        try {
            f = BandFactor::factor_spd(jacobian(u));
        } catch (const NonPositivePivot&) {
            rep.failure = "JacobianSingular";
            break;
        }
        Field du = f.solve(r);

        double alpha = 1.0;
        Field trial(u.size());
        Field rt;
        double rtnorm = 0.0;
        bool accepted = false;
        for (int half = 0; half <= 30; ++half) {
            double floor = 1.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                trial[i] = u[i] - alpha * du[i];
                floor = std::min(floor, 1.0 + trial[i]);
            }
            if (opt.enforce_barrier && floor <= opt.barrier_floor) {
                alpha *= 0.5;
                continue;
            }
            rt = residual(trial);
            rtnorm = l2_norm(rt, grid);
            if (rtnorm < rnorm) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (rnorm <= std::max(opt.tol, opt.stall_tol)) {
                rep.converged = true;
                break;
            }
            rep.failure = rep.failure.empty() ? "BarrierViolation" : rep.failure;
            break;
        }
        u = trial;
        r = rt;
        rnorm = rtnorm;
        rep.step_damping_history.push_back(alpha);
        rep.residual_history.push_back(rnorm);
        ++rep.iterations;
    }
    if (!rep.converged && rnorm <= std::max(opt.tol, opt.stall_tol))
        rep.converged = true;
    rep.final_residual_norm = rnorm;
    return {std::move(u), std::move(rep)};
}

}  // namespace mems4
