#include <doctest.h>

#include <cmath>

#include "kgeo/fields.hpp"
#include "kgeo/reduced.hpp"
#include "kgeo/solver.hpp"

using namespace kgeo;

namespace {

SolverConfig oracle_config() {
    SolverConfig cfg;
    cfg.m = 8;
    cfg.eps_target = 1e-4;
    cfg.newton_tol = 1e-9;
    return cfg;
}

} // namespace

TEST_CASE("reduced oracle rejects y-dependent input") {
    GridSpec g = GridSpec::make(16);
    ScalarField ydep = mode_field(g, {0, 1, 0.02, 0.0});
    CHECK_THROWS_AS(reduced_oracle(ScalarField(g), ydep, oracle_config()),
                    admissibility_error);
}

TEST_CASE("reduced oracle on the constant ramp") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = oracle_config();
    const double c = 1.25;
    PathGrid path = reduced_oracle(ScalarField(g), ScalarField(g, c), cfg);
    PathGrid ramp = PathGrid::linear(ScalarField(g), ScalarField(g, c), cfg.m);
    double worst = 0.0;
    for (int j = 0; j <= cfg.m; ++j) {
        ScalarField d = path.slices[j];
        d -= ramp.slices[j];
        worst = std::max(worst, d.max_abs());
    }
    CHECK(worst <= 1e-5); // tau * m * t(1-t) at tau = eps_target
}

TEST_CASE("reduced oracle satisfies the full Monge-Ampere residual") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = oracle_config();
    ScalarField phi0 = mode_field(g, {1, 0, 0.05, 0.0});
    ScalarField phi1 = mode_field(g, {2, 0, 0.012, 1.3});
    phi1 += 0.4;

    PathGrid path = reduced_oracle(phi0, phi1, cfg);
    auto [p0, target] = initial_path(KahlerPotential::certify(phi0),
                                     KahlerPotential::certify(phi1), cfg);
    target.tau = cfg.eps_target;
    CHECK(max_abs_residual(residual(path, target)) <= 10.0 * cfg.newton_tol);
}

TEST_CASE("reduced oracle agrees with solve_geodesic head to head") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = oracle_config();
    ScalarField phi0 = mode_field(g, {1, 0, 0.05, 0.0});
    ScalarField phi1 = mode_field(g, {1, 0, 0.03, 2.0});
    phi1 += 0.6;

    PathGrid oracle = reduced_oracle(phi0, phi1, cfg);
    auto [solved, report] = solve_geodesic(KahlerPotential::certify(phi0),
                                           KahlerPotential::certify(phi1), cfg);
    double worst = 0.0;
    for (int j = 0; j <= cfg.m; ++j) {
        ScalarField d = solved.slices[j];
        d -= oracle.slices[j];
        worst = std::max(worst, d.max_abs());
    }
    CHECK(worst <= 5.0 * (g.h * g.h + cfg.eps_target));
    // both drive the same discrete system to newton_tol, so the true gap
    // is far below the acceptance tolerance
    CHECK(worst <= 1e-5);
}
