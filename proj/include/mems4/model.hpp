#pragma once

#include <cmath>
#include <string>

#include "mems4/banded.hpp"
#include "mems4/errors.hpp"
#include "mems4/grid.hpp"
#include "mems4/operators.hpp"

namespace mems4 {

struct Params {
    double B = 0.01;   // bending coefficient, > 0
    double T = 1.0;    // stretching coefficient, >= 0
    double lambda = 0.0;
    double kappa = 0.5;  // gap parameter in (0,1)

    void validate() const {
        if (!(B > 0.0)) throw ValidationError("B must be positive");
        if (T < 0.0) throw ValidationError("T must be nonnegative");
        if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
        if (!(kappa > 0.0 && kappa < 1.0))
            throw ValidationError("kappa must lie in (0,1)");
    }
};

struct HyperState {
    Field u;
    Field v;  // velocity u_t
    double t = 0.0;
};

inline double min_gap(const Field& u) {
    double m = 1.0;
    for (double x : u) m = std::min(m, 1.0 + x);
    return m;
}

inline void require_admissible_gap(const Field& u, const char* where) {
    if (min_gap(u) <= 0.0)
        throw TouchdownDomain(std::string(where) + ": 1 + u <= 0 at a node");
}

// Electrostatic source -lambda/(1+u)^2, nodewise.
inline Field nonlinearity(const Field& u, double lambda) {
    require_admissible_gap(u, "nonlinearity");
    Field f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g = 1.0 + u[i];
        f[i] = -lambda / (g * g);
    }
    return f;
}

// d/du of the source: +2*lambda/(1+u)^3.
inline Field nonlinearity_derivative(const Field& u, double lambda) {
    require_admissible_gap(u, "nonlinearity_derivative");
    Field f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g = 1.0 + u[i];
        f[i] = 2.0 * lambda / (g * g * g);
    }
    return f;
}

// E(u) = 1/2 u^T K u - lambda * h * sum 1/(1+u_j), K = h*K_op.
// The potential term uses lumped interior quadrature, so E(0) carries an
// O(h) offset against -lambda*|Omega|; all identity tests compare energy
// differences, which the offset cancels from.
inline double energy_parabolic(const Field& u, const Params& p, const Grid& g,
                               const OperatorMatrix& K) {
    require_admissible_gap(u, "energy_parabolic");
    double pot = 0.0;
    for (double x : u) pot += 1.0 / (1.0 + x);
    return 0.5 * K.quad.quadratic_form(u) - p.lambda * g.h() * pot;
}

// E(a) - E(b) evaluated pairwise:
//   1/2 (a+b)^T K (a-b) + lambda h sum (a-b) / ((1+a)(1+b)).
// Subtracting independently evaluated energies loses ~eps*||K||*||u||^2 to
// cancellation; this form keeps the error proportional to ||a-b||, which
// the dissipation and Lojasiewicz tests need near a steady state.
inline double energy_difference_parabolic(const Field& a, const Field& b,
                                          const Params& p, const Grid& g,
                                          const OperatorMatrix& K) {
    require_admissible_gap(a, "energy_difference_parabolic");
    require_admissible_gap(b, "energy_difference_parabolic");
    Field sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
    Field ks = K.quad.multiply(sum);
    double quad = 0.0, pot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        quad += d * ks[i];
        pot += d / ((1.0 + a[i]) * (1.0 + b[i]));
    }
    return 0.5 * quad + p.lambda * g.h() * pot;
}

inline double energy_hyperbolic(const Field& u, const Field& v,
                                const Params& p, const Grid& g,
                                const OperatorMatrix& K) {
    double kin = 0.0;
    for (double x : v) kin += x * x;
    return energy_parabolic(u, p, g, K) + 0.5 * g.h() * kin;
}

inline double energy_difference_hyperbolic(const Field& ua, const Field& va,
                                           const Field& ub, const Field& vb,
                                           const Params& p, const Grid& g,
                                           const OperatorMatrix& K) {
    double kin = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i)
        kin += (va[i] + vb[i]) * (va[i] - vb[i]);
    return energy_difference_parabolic(ua, ub, p, g, K) + 0.5 * g.h() * kin;
}

// Residual of the stationary equation: K_op u + lambda/(1+u)^2, nodewise.
// Its L2 norm is the gradient norm entering the Lojasiewicz estimates.
inline Field steady_residual(const Field& u, const Params& p,
                             const OperatorMatrix& K) {
    require_admissible_gap(u, "steady_residual");
    Field r = K.op.multiply(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g = 1.0 + u[i];
        r[i] += p.lambda / (g * g);
    }
    return r;
}

// Sharp discrete embedding constant: ||u||_inf <= C0h ||u||_K, attained by
// the K-Riesz representer of point evaluation, C0h = max_j sqrt(e_j^T K^-1 e_j).
inline double embedding_constant(const Grid& g, const OperatorMatrix& K) {
    const int n = g.interior_count();
    BandFactor f = BandFactor::factor_spd(K.quad);
    double c2 = 0.0;
    Field e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        Field z = f.solve(e);
        c2 = std::max(c2, z[j]);
        e[j] = 0.0;
    }
    return std::sqrt(c2);
}

// Theorem-style sufficient bound kappa^2 (8 - 3 kappa) / (128 C0^2 |Omega|).
// Reported as a diagnostic only; practically relevant lambdas exceed it.
inline double lambda_bound(double kappa, double c0, double omega_measure) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ValidationError("lambda_bound: kappa must lie in (0,1)");
    if (!(c0 > 0.0) || !(omega_measure > 0.0))
        throw ValidationError("lambda_bound: C0 and |Omega| must be positive");
    return kappa * kappa * (8.0 - 3.0 * kappa) /
           (128.0 * c0 * c0 * omega_measure);
}

// Membership in X(kappa): ||u||^2_{H2D} <= (1-kappa)^2 / C0h^2 (inclusive).
inline bool check_admissible_parabolic(const Field& u0, const Params& p,
                                       const OperatorMatrix& K, double c0h) {
    double q = K.quad.quadratic_form(u0);
    double lim = (1.0 - p.kappa) * (1.0 - p.kappa) / (c0h * c0h);
    return q <= lim;
}

// Membership in Z(kappa), read as the pair norm of (u, u_t):
// ||u||^2_{H2D} + ||v||^2_{L2} <= (1-kappa)^2 / C0h^2.
inline bool check_admissible_hyperbolic(const HyperState& s, const Params& p,
                                        const Grid& g, const OperatorMatrix& K,
                                        double c0h) {
    double q = K.quad.quadratic_form(s.u);
    double vn = l2_norm(s.v, g);
    double lim = (1.0 - p.kappa) * (1.0 - p.kappa) / (c0h * c0h);
    return q + vn * vn <= lim;
}

}  // namespace mems4
