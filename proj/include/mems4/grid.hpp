#pragma once

#include <vector>

#include "mems4/errors.hpp"

namespace mems4 {

// Interior nodal values of a clamped scalar field; boundary nodes carry
// u = 0 and are never stored.
using Field = std::vector<double>;

// Uniform mesh of (a, b) with N cells.  Interior nodes are
// x_j = a + j*h, j = 1..N-1; both boundary nodes are clamped
// (u = 0 and u' = 0) and handled by ghost elimination in the stencils.
struct Grid {
    double a = -1.0;
    double b = 1.0;
    int n_cells = 0;

    double h() const { return (b - a) / n_cells; }
    int interior_count() const { return n_cells - 1; }
    double measure() const { return b - a; }

    // Coordinate of interior node i (0-based: i = 0 is x = a + h).
    double node(int i) const { return a + (i + 1) * h(); }

    // Index of the interior node nearest to coordinate x.
    int nearest_node(double x) const {
        int i = static_cast<int>((x - a) / h() + 0.5) - 1;
        if (i < 0) i = 0;
        if (i > n_cells - 2) i = n_cells - 2;
        return i;
    }
};

inline Grid build_grid(double a, double b, int n_cells) {
    if (!(b > a)) throw DegenerateGrid("build_grid: require b > a");
    if (n_cells < 8)
        throw DegenerateGrid("build_grid: require N >= 8 (stencil margin)");
    return Grid{a, b, n_cells};
}

// Samples a callable at the interior nodes.
template <class F>
Field sample(const Grid& g, F&& f) {
    Field u(g.interior_count());
    for (int i = 0; i < g.interior_count(); ++i) u[i] = f(g.node(i));
    return u;
}

}  // namespace mems4
