#pragma once

#include <cmath>
#include <vector>

#include "mems4/banded.hpp"
#include "mems4/grid.hpp"

namespace mems4 {

struct EigResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

// Number of eigenvalues of A strictly below sigma, via the inertia of the
// LDL^T pivots of A - sigma*I (Sylvester's law).  Returns -1 when a pivot
// vanishes, i.e. sigma is (numerically) an eigenvalue.
inline int eigs_below(const SymBandMatrix& a, double sigma) {
    const int n = a.size();
    const int p = a.bandwidth();
    SymBandMatrix l = a;
    l.shift_diagonal(-sigma);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(l.at(i, 0)));
    int negatives = 0;
    for (int j = 0; j < n; ++j) {
        double d = l.at(j, 0);
        for (int k = 1; k <= p && j - k >= 0; ++k) {
            double lv = l.at(j - k, k);
            d -= lv * lv * l.at(j - k, 0);
        }
        if (std::abs(d) <= 1e-300 * scale + 1e-300) return -1;
        if (d < 0.0) ++negatives;
        l.at(j, 0) = d;
        for (int k = 1; k <= p && j + k < n; ++k) {
            const int i = j + k;
            double s = l.at(j, k);
            for (int c = std::max(0, i - p); c < j; ++c)
                s -= l.at(c, i - c) * l.at(c, j - c) * l.at(c, 0);
            l.at(j, k) = s / d;
        }
    }
    return negatives;
}

}  // namespace detail

// Smallest eigenvalue of the pencil K z = mu M z with M positive diagonal.
// Works on the symmetrized standard problem A = M^{-1/2} K M^{-1/2} and
// bisects on the LDL^T inertia count, which is robust regardless of the
// spectral range (the clamped biharmonic spans ~9 decades at N = 256).
inline EigResult smallest_eig(const SymBandMatrix& k,
                              const std::vector<double>& mass,
                              double rel_tol = 1e-8, int max_iter = 200) {
    const int n = k.size();
    const int p = k.bandwidth();
    std::vector<double> ms(n);
    for (int i = 0; i < n; ++i) ms[i] = std::sqrt(mass[i]);

    SymBandMatrix a(n, p);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c <= p && i + c < n; ++c)
            a.at(i, c) = k.at(i, c) / (ms[i] * ms[i + c]);

    double scale = 0.0;
    double min_diag = a.at(0, 0);
    for (int i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(a.at(i, 0)));
        min_diag = std::min(min_diag, a.at(i, 0));
    }
    const double pad = 1e-8 * scale + 1e-300;
    double lo = a.gershgorin_min() - pad;  // no eigenvalues below
    double hi = min_diag + pad;            // at least one below (mu_1 <= min a_ii)

    EigResult res;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        double mid = 0.5 * (lo + hi);
        int below = detail::eigs_below(a, mid);
        if (below < 0) {
            // mid is numerically an eigenvalue, so some eigenvalue <= mid.
            hi = mid;
        } else if (below == 0) {
            lo = mid;
        } else {
            hi = mid;
        }
        double width = hi - lo;
        double ref = std::max(std::abs(lo), std::abs(hi));
        if (width <= rel_tol * ref || width <= 1e-14 * scale) {
            res.value = 0.5 * (lo + hi);
            res.converged = true;
            return res;
        }
    }
    res.value = 0.5 * (lo + hi);
    return res;
}

}  // namespace mems4
