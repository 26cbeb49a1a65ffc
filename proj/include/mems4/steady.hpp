#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "mems4/eig.hpp"
#include "mems4/model.hpp"
#include "mems4/newton.hpp"
#include "mems4/operators.hpp"

namespace mems4 {

struct SteadySolution {
    Field psi;
    double lambda = 0.0;
    double residual_norm = 0.0;
    double min_value = 0.0;
    std::optional<double> smallest_eig;
    NewtonReport newton;
};

struct Branch {
    std::vector<SteadySolution> points;  // lambda strictly increasing
    std::optional<double> fold_estimate;
};

inline SymBandMatrix steady_jacobian(const Field& u, const Params& p,
                                     const OperatorMatrix& K) {
    SymBandMatrix j = K.op;
    Field w = nonlinearity_derivative(u, p.lambda);
    for (double& v : w) v = -v;
    j.add_to_diagonal(w);
    return j;
}

// Smallest eigenvalue of the linearized operator
// L = K_op - diag(2 lambda / (1+psi)^3), positive iff the state is
// linearly stable; it crosses zero at the fold.
inline EigResult linearized_stability(const SteadySolution& sol,
                                      const Params& p, const Grid& g,
                                      const OperatorMatrix& K) {
    SymBandMatrix l = steady_jacobian(sol.psi, p, K);
    std::vector<double> mass(l.size(), 1.0);
    return smallest_eig(l, mass);
}

struct SteadyOptions {
    double tol = 1e-10;
    int max_iter = 50;
    bool compute_stability = false;
};

// Damped Newton on the stationary equation from u_init (minimal branch
// when started at 0 below the fold).  Non-convergence is reported through
// newton.converged, as expected above the fold.
inline SteadySolution solve_steady(const Params& p, const Grid& g,
                                   const OperatorMatrix& K, Field u_init,
                                   const SteadyOptions& opt = {}) {
    NewtonOptions nopt;
    nopt.tol = opt.tol;
    nopt.max_iter = opt.max_iter;
    nopt.stall_tol = residual_rounding_floor(K);
    auto residual = [&](const Field& u) { return steady_residual(u, p, K); };
    auto jacobian = [&](const Field& u) { return steady_jacobian(u, p, K); };
    auto [psi, rep] = newton(residual, jacobian, g, std::move(u_init), nopt);

    SteadySolution sol;
    sol.lambda = p.lambda;
    sol.residual_norm = rep.final_residual_norm;
    sol.newton = std::move(rep);
    if (sol.newton.converged) {
        sol.min_value = psi.empty() ? 0.0 : *std::min_element(psi.begin(), psi.end());
        sol.psi = std::move(psi);
        if (opt.compute_stability) {
            Params pc = p;
            SteadySolution tmp;
            tmp.psi = sol.psi;
            sol.smallest_eig = linearized_stability(tmp, pc, g, K).value;
        }
    }
    return sol;
}

struct ContinuationOptions {
    double lambda_max = 1.0;
    double dlambda = 0.01;
    double fold_rel_tol = 1e-6;  // bisection width relative to lambda
    bool compute_stability = false;
};

// March lambda upward with warm starts; on Newton failure bisect the last
// interval to localize the fold of the minimal branch.
inline Branch continuation_sweep(Params p, const Grid& g,
                                 const OperatorMatrix& K,
                                 const ContinuationOptions& opt) {
    Branch br;
    Field warm(g.interior_count(), 0.0);
    SteadyOptions sopt;
    sopt.compute_stability = opt.compute_stability;

    auto attempt = [&](double lambda, const Field& start) {
        Params q = p;
        q.lambda = lambda;
        return solve_steady(q, g, K, start, sopt);
    };

    double lam = 0.0;
    // lambda = 0 root is exactly zero; include it as the branch anchor.
    br.points.push_back(attempt(0.0, warm));
    warm = br.points.back().psi;

    while (lam + opt.dlambda <= opt.lambda_max + 1e-15) {
        double next = lam + opt.dlambda;
        SteadySolution sol = attempt(next, warm);
        if (!sol.newton.converged) {
            // Fold inside (lam, next): bisect down to the requested width.
            double lo = lam, hi = next;
            while (hi - lo > opt.fold_rel_tol * std::max(lo, 1e-12)) {
                double mid = 0.5 * (lo + hi);
                SteadySolution s = attempt(mid, warm);
                if (s.newton.converged) {
                    lo = mid;
                    warm = s.psi;
                    br.points.push_back(std::move(s));
                } else {
                    hi = mid;
                }
            }
            br.fold_estimate = 0.5 * (lo + hi);
            return br;
        }
        warm = sol.psi;
        br.points.push_back(std::move(sol));
        lam = next;
    }
    return br;
}

}  // namespace mems4
