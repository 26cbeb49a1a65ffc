#include <catch2/catch_amalgamated.hpp>

#include "mems4/eig.hpp"
#include "mems4/grid.hpp"
#include "mems4/operators.hpp"
#include "oracles.hpp"

using namespace mems4;

namespace {
double bump(double x) { double w = 1.0 - x * x; return w * w; }
double bump_dxxxx() { return 24.0; }
double bump_dxx(double x) { return 12.0 * x * x - 4.0; }
}  // namespace

TEST_CASE("build_grid basics", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 8);
    CHECK(g.h() == Catch::Approx(0.25));
    CHECK(g.interior_count() == 7);
    CHECK(g.measure() == Catch::Approx(2.0));

    Grid g2 = build_grid(-1.0, 1.0, 256);
    CHECK(g2.h() == Catch::Approx(0.0078125));

    Grid g3 = build_grid(0.0, 2.0, 100);
    CHECK(g3.h() == Catch::Approx(0.02));
    CHECK(g3.node(0) == Catch::Approx(0.02));

    CHECK_THROWS_AS(build_grid(-1.0, 1.0, 4), DegenerateGrid);
    CHECK_THROWS_AS(build_grid(1.0, -1.0, 64), DegenerateGrid);
}

TEST_CASE("assemble_operator rejects bad coefficients", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 16);
    CHECK_THROWS_AS(assemble_operator(g, 0.0, 1.0), InvalidCoefficient);
    CHECK_THROWS_AS(assemble_operator(g, -1.0, 0.0), InvalidCoefficient);
    CHECK_THROWS_AS(assemble_operator(g, 1.0, -0.5), InvalidCoefficient);
}

TEST_CASE("operator on manufactured solution (1-x^2)^2", "[mesh_ops]") {
    // w satisfies the clamped conditions exactly; w'''' = 24, w'' = 12x^2-4.
    // The ghost-affected rows (j = 1, N-1) carry an O(1/h) truncation term
    // (exactly -8/h for this w), so pointwise consistency is checked over
    // the ghost-free rows only; global accuracy is checked at solve level.
    for (double T : {0.0, 1.0}) {
        Grid g = build_grid(-1.0, 1.0, 128);
        OperatorMatrix K = assemble_operator(g, 1.0, T);
        Field w = sample(g, bump);
        Field kw = K.op.multiply(w);
        double err = 0.0;
        for (int i = 1; i + 1 < g.interior_count(); ++i) {
            double exact = bump_dxxxx() - T * bump_dxx(g.node(i));
            err = std::max(err, std::abs(kw[i] - exact));
        }
        CHECK(err < 0.01);
    }
}

TEST_CASE("operator error is second order in h away from the clamp rows", "[mesh_ops]") {
    double errors[3];
    int idx = 0;
    for (int n : {64, 128, 256}) {
        Grid g = build_grid(-1.0, 1.0, n);
        OperatorMatrix K = assemble_operator(g, 1.0, 1.0);
        Field w = sample(g, bump);
        Field kw = K.op.multiply(w);
        double err = 0.0;
        for (int i = 1; i + 1 < g.interior_count(); ++i)
            err = std::max(err,
                           std::abs(kw[i] - (24.0 - bump_dxx(g.node(i)))));
        errors[idx++] = err;
    }
    CHECK(errors[0] / errors[1] == Catch::Approx(4.0).margin(0.6));
    CHECK(errors[1] / errors[2] == Catch::Approx(4.0).margin(0.6));
}

TEST_CASE("solution-level manufactured convergence is second order", "[mesh_ops]") {
    // Solve K u = w'''' with B=1, T=0 and compare against w itself; the
    // boundary-row truncation is absorbed by elliptic stability.
    double errors[3];
    int idx = 0;
    for (int n : {64, 128, 256}) {
        Grid g = build_grid(-1.0, 1.0, n);
        OperatorMatrix K = assemble_operator(g, 1.0, 0.0);
        Field f(g.interior_count(), 24.0);
        Field u = BandFactor::factor_spd(K.op).solve(f);
        Field w = sample(g, bump);
        double err = 0.0;
        for (int i = 0; i < g.interior_count(); ++i)
            err = std::max(err, std::abs(u[i] - w[i]));
        errors[idx++] = err;
    }
    CHECK(errors[0] / errors[1] == Catch::Approx(4.0).margin(0.8));
    CHECK(errors[1] / errors[2] == Catch::Approx(4.0).margin(0.8));
}

TEST_CASE("operator is symmetric and SPD", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 32);
    for (double T : {0.0, 0.5, 4.0}) {
        OperatorMatrix K = assemble_operator(g, 0.3, T);
        // Band storage is shared between (i,j) and (j,i): symmetry is
        // structural; verify via the dense image and an SPD factorization.
        auto d = oracles::to_dense(K.op);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                CHECK(d[i][j] == d[j][i]);
        CHECK_NOTHROW(BandFactor::factor_spd(K.op));
    }
}

TEST_CASE("operator applied to zero field is zero", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 32);
    OperatorMatrix K = assemble_operator(g, 1.0, 1.0);
    Field z(g.interior_count(), 0.0);
    for (double v : K.op.multiply(z)) CHECK(v == 0.0);
}

TEST_CASE("l2 norm", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 8);
    Field zero(g.interior_count(), 0.0);
    CHECK(l2_norm(zero, g) == 0.0);
    Field one(g.interior_count(), 1.0);
    CHECK(l2_norm(one, g) == Catch::Approx(std::sqrt(1.75)));

    // Samples of sin(pi (x+1)/2): integral of the square is 1.
    for (int n : {64, 256}) {
        Grid gg = build_grid(-1.0, 1.0, n);
        Field s = sample(gg, [](double x) {
            return std::sin(M_PI * (x + 1.0) / 2.0);
        });
        CHECK(l2_norm(s, gg) == Catch::Approx(1.0).margin(2.0 / n));
    }
}

TEST_CASE("linf norm", "[mesh_ops]") {
    CHECK(linf_norm(Field{0.0, 0.0}) == 0.0);
    CHECK(linf_norm(Field{0.1, -0.7, 0.3}) == Catch::Approx(0.7));
    Grid g = build_grid(-1.0, 1.0, 64);  // even N: node at x = 0
    CHECK(linf_norm(sample(g, bump)) == Catch::Approx(1.0));
}

TEST_CASE("h2d norm matches the continuum integral for the bump", "[mesh_ops]") {
    // ||w||^2 -> integral of (w'')^2 = 128/5 = 25.6 for B=1, T=0.
    Grid g = build_grid(-1.0, 1.0, 512);
    OperatorMatrix K = assemble_operator(g, 1.0, 0.0);
    Field w = sample(g, bump);
    double v = h2d_norm(w, K);
    CHECK(v * v == Catch::Approx(25.6).epsilon(1e-3));

    Field zero(g.interior_count(), 0.0);
    CHECK(h2d_norm(zero, K) == 0.0);

    oracles::Rng rng(7);
    Field r = rng.field(g.interior_count());
    CHECK(h2d_norm(r, K) > 0.0);
}

TEST_CASE("dual norm: zero, bound, dense oracle", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 32);
    OperatorMatrix K = assemble_operator(g, 1.0, 1.0);
    Field zero(g.interior_count(), 0.0);
    CHECK(dual_norm(zero, g, K) == 0.0);

    oracles::Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        Field w = rng.field(g.interior_count());
        CHECK(dual_norm(w, g, K) <= l2_norm(w, g) + 1e-14);
    }

    // Dense-inverse oracle at fixed seed.
    Field w = oracles::Rng(2024).field(g.interior_count());
    SymBandMatrix a = K.quad;
    a.shift_diagonal(g.h());
    auto ad = oracles::to_dense(a);
    std::vector<double> mw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) mw[i] = g.h() * w[i];
    auto z = oracles::dense_solve(ad, mw);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * g.h() * z[i];
    CHECK(dual_norm(w, g, K) == Catch::Approx(std::sqrt(s)).margin(1e-10));
}

TEST_CASE("discrete Poincare inequality with computed constant", "[mesh_ops]") {
    Grid g = build_grid(-1.0, 1.0, 64);
    OperatorMatrix K = assemble_operator(g, 1.0, 1.0);
    std::vector<double> mass(g.interior_count(), g.h());
    EigResult mu = smallest_eig(K.quad, mass);
    REQUIRE(mu.converged);
    REQUIRE(mu.value > 0.0);
    double alpha2 = 1.0 / std::sqrt(mu.value);
    oracles::Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        Field u = rng.field(g.interior_count());
        CHECK(l2_norm(u, g) <= alpha2 * h2d_norm(u, K) * (1.0 + 1e-10));
    }
}
