#pragma once

#include <cmath>

#include "mems4/banded.hpp"
#include "mems4/errors.hpp"
#include "mems4/grid.hpp"

namespace mems4 {

// Discrete spatial operator K_op = B*D4 - T*D2 on interior nodes, where
// D4 is the clamped biharmonic (ghost elimination u_{-1} = u_1, mirrored
// on the right) and D2 the Dirichlet Laplacian.  Also carries the
// quadrature-weighted form K = h*K_op used by the energy norm; the lumped
// mass matrix is h*I.
struct OperatorMatrix {
    SymBandMatrix op;    // K_op, operator form
    SymBandMatrix quad;  // K = h * K_op, quadrature-weighted form
    double h = 0.0;
};

inline OperatorMatrix assemble_operator(const Grid& g, double B, double T) {
    if (!(B > 0.0))
        throw InvalidCoefficient("assemble_operator: require B > 0");
    if (T < 0.0)
        throw InvalidCoefficient("assemble_operator: require T >= 0");
    const int n = g.interior_count();
    const double h = g.h();
    const double h2 = h * h;
    const double h4 = h2 * h2;

    SymBandMatrix k(n, 2);
    for (int i = 0; i < n; ++i) {
        // [1, -4, 6, -4, 1]/h^4 with diagonal 7/h^4 next to each clamp.
        double d4 = (i == 0 || i == n - 1) ? 7.0 / h4 : 6.0 / h4;
        k.at(i, 0) = B * d4 + T * 2.0 / h2;
        if (i + 1 < n) k.at(i, 1) = B * (-4.0 / h4) - T / h2;
        if (i + 2 < n) k.at(i, 2) = B * (1.0 / h4);
    }
    return OperatorMatrix{k, k.scaled(h), h};
}

// Rounding floor for residuals built from K_op: the exact discrete root
// evaluates to about eps * max_diag * ||u||_inf, with ||u||_inf < 1 here.
inline double residual_rounding_floor(const OperatorMatrix& K) {
    double maxdiag = 0.0;
    for (double d : K.op.band(0)) maxdiag = std::max(maxdiag, std::abs(d));
    return 1e-16 * maxdiag;
}

inline double l2_norm(const Field& u, const Grid& g) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(g.h() * s);
}

inline double l2_inner(const Field& u, const Field& v, const Grid& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return g.h() * s;
}

inline double linf_norm(const Field& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

// Energy norm ||u||_{H^2_D} = sqrt(u^T K u), K = h*K_op.  Defined directly
// through the stiffness matrix so the semi-discrete parabolic system is an
// exact gradient flow of the discrete energy.
inline double h2d_norm(const Field& u, const OperatorMatrix& K) {
    double q = K.quad.quadratic_form(u);
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

// Dual norm ||w||_{V'} induced by A = I + B*D4 - T*D2: solve
// (M + K) z = M w with M = h*I and return sqrt(w^T M z).
inline double dual_norm(const Field& w, const Grid& g,
                        const OperatorMatrix& K) {
    SymBandMatrix a = K.quad;
    a.shift_diagonal(g.h());
    BandFactor f = BandFactor::factor_spd(a);
    Field mw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mw[i] = g.h() * w[i];
    Field z = f.solve(mw);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * g.h() * z[i];
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

}  // namespace mems4
