#include <catch2/catch_amalgamated.hpp>

#include "mems4/mems4.hpp"
#include "oracles.hpp"

using namespace mems4;
using Catch::Approx;

TEST_CASE("unloaded membrane is flat", "[steady]") {
    Grid g = build_grid(-1.0, 1.0, 64);
    OperatorMatrix K = assemble_operator(g, 0.01, 1.0);
    Params p;  // lambda = 0
    Field start = sample(g, [](double x) {
        double w = 1.0 - x * x;
        return -0.1 * w * w;
    });
    SteadySolution s = solve_steady(p, g, K, start);
    REQUIRE(s.newton.converged);
    CHECK(linf_norm(s.psi) < 1e-12);
    CHECK(s.min_value == Approx(0.0).margin(1e-12));
}

TEST_CASE("small-lambda deflection follows the beam profile", "[steady]") {
    // For B = 1, T = 0 the leading-order response to the flat load is
    // -(lambda/24)(1-x^2)^2, so min psi / lambda -> -1/24 as lambda -> 0.
    Grid g = build_grid(-1.0, 1.0, 256);
    OperatorMatrix K = assemble_operator(g, 1.0, 0.0);
    double v1 = 0.0, v2 = 0.0;
    {
        SteadySolution s = solve_steady(Params{1.0, 0.0, 1e-3, 0.5}, g, K,
                                        Field(g.interior_count(), 0.0));
        REQUIRE(s.newton.converged);
        v1 = s.min_value / 1e-3;
    }
    {
        SteadySolution s = solve_steady(Params{1.0, 0.0, 5e-4, 0.5}, g, K,
                                        Field(g.interior_count(), 0.0));
        REQUIRE(s.newton.converged);
        v2 = s.min_value / 5e-4;
    }
    // Error is O(lambda); one Richardson step cancels the linear term.
    double extrap = 2.0 * v2 - v1;
    CHECK(std::abs(extrap + 1.0 / 24.0) < 0.01 / 24.0);
}

TEST_CASE("newton reports failure above the fold", "[steady]") {
    Grid g = build_grid(-1.0, 1.0, 128);
    OperatorMatrix K = assemble_operator(g, 0.01, 1.0);
    SteadySolution s = solve_steady(Params{0.01, 1.0, 0.6, 0.5}, g, K,
                                    Field(g.interior_count(), 0.0));
    CHECK_FALSE(s.newton.converged);
    CHECK_FALSE(s.newton.failure.empty());
}

TEST_CASE("continuation localizes the fold of the minimal branch", "[steady]") {
    Grid g = build_grid(-1.0, 1.0, 128);
    OperatorMatrix K = assemble_operator(g, 0.01, 1.0);
    ContinuationOptions copt;
    copt.lambda_max = 1.0;
    copt.dlambda = 0.02;
    copt.compute_stability = true;
    Branch br = continuation_sweep(Params{0.01, 1.0, 0.0, 0.5}, g, K, copt);

    REQUIRE(br.fold_estimate.has_value());
    CHECK(*br.fold_estimate > 0.40);
    CHECK(*br.fold_estimate < 0.48);
    REQUIRE(br.points.size() >= 10);

    double prev_lambda = -1.0, prev_min = 1.0, prev_eig = 1e300;
    for (const auto& s : br.points) {
        CHECK(s.newton.converged);
        CHECK(s.lambda > prev_lambda);
        CHECK(s.min_value < prev_min + 1e-14);  // deflection deepens
        REQUIRE(s.smallest_eig.has_value());
        CHECK(*s.smallest_eig > 0.0);           // minimal branch is stable
        CHECK(*s.smallest_eig < prev_eig + 1e-12);
        prev_lambda = s.lambda;
        prev_min = s.min_value;
        prev_eig = *s.smallest_eig;
    }
    // Stability margin nearly exhausted at the last computed point.
    CHECK(*br.points.back().smallest_eig < 0.5 * *br.points.front().smallest_eig);
}

TEST_CASE("linearized stability matches the dense eigensolver", "[steady]") {
    Grid g = build_grid(-1.0, 1.0, 32);
    OperatorMatrix K = assemble_operator(g, 1.0, 1.0);
    Params p{1.0, 1.0, 1.5, 0.5};
    SteadySolution s = solve_steady(p, g, K, Field(g.interior_count(), 0.0));
    REQUIRE(s.newton.converged);

    EigResult e = linearized_stability(s, p, g, K);
    REQUIRE(e.converged);

    SymBandMatrix l = steady_jacobian(s.psi, p, K);
    auto dense = oracles::to_dense(l);
    auto evs = oracles::dense_sym_eigenvalues(dense);
    CHECK(e.value == Approx(evs.front()).epsilon(1e-6));
    CHECK(e.value > 0.0);
}

TEST_CASE("stability margin shrinks toward the fold", "[steady]") {
    Grid g = build_grid(-1.0, 1.0, 128);
    OperatorMatrix K = assemble_operator(g, 0.01, 1.0);
    SteadyOptions opt;
    opt.compute_stability = true;
    double prev = 1e300;
    for (double lam : {0.1, 0.25, 0.40}) {
        SteadySolution s = solve_steady(Params{0.01, 1.0, lam, 0.5}, g, K,
                                        Field(g.interior_count(), 0.0), opt);
        REQUIRE(s.newton.converged);
        REQUIRE(s.smallest_eig.has_value());
        CHECK(*s.smallest_eig > 0.0);
        CHECK(*s.smallest_eig < prev);
        prev = *s.smallest_eig;
    }
}
