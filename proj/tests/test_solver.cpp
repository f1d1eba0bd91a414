#include <doctest.h>

#include <cmath>
#include <complex>

#include "kgeo/fields.hpp"
#include "kgeo/geometry.hpp"
#include "kgeo/solver.hpp"

using namespace kgeo;

namespace {

KahlerPotential zero_potential(GridSpec g) {
    return KahlerPotential::certify(ScalarField(g));
}

KahlerPotential one_mode(GridSpec g, double amp, double phase = 0.0) {
    return KahlerPotential::certify(mode_field(g, {1, 0, amp, phase}));
}

SolverConfig quick_config() {
    SolverConfig cfg;
    cfg.m = 8;
    cfg.eps_target = 1e-3;
    cfg.newton_tol = 1e-9;
    return cfg;
}

double max_diff(const PathGrid& a, const PathGrid& b) {
    double m = 0.0;
    for (int j = 0; j <= a.m; ++j) {
        ScalarField d = a.slices[j];
        d -= b.slices[j];
        m = std::max(m, d.max_abs());
    }
    return m;
}

// brute-force oracle: 4 * det of the bordered 2x2 complex Hessian, built
// from std::complex arithmetic and raw stencils
std::vector<ScalarField> bordered_det_oracle(const PathGrid& p) {
    using cplx = std::complex<double>;
    const int n = p.grid.n, m = p.m;
    std::vector<ScalarField> out;
    for (int j = 1; j < m; ++j) {
        ScalarField q(p.grid);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                auto wrap = [n](int i) { return ((i % n) + n) % n; };
                auto at = [&](int jj, int kk, int ll) {
                    return p.slices[jj].at(wrap(kk), wrap(ll));
                };
                const double h = p.grid.h;
                const double rho =
                    1.0 + (at(j, k + 1, l) + at(j, k - 1, l) + at(j, k, l + 1) +
                           at(j, k, l - 1) - 4.0 * at(j, k, l)) / (4.0 * h * h);
                auto dz_at = [&](int jj) {
                    const double fx = (at(jj, k + 1, l) - at(jj, k - 1, l)) / (2.0 * h);
                    const double fy = (at(jj, k, l + 1) - at(jj, k, l - 1)) / (2.0 * h);
                    return cplx(0.5 * fx, -0.5 * fy);
                };
                // w = t + i s with trivial s-dependence: d^2/dw dwbar = d_tt/4,
                // d^2/dz dwbar = d_t(dz)/2 = (M/4)(dz_{j+1} - dz_{j-1})
                const cplx b = 0.25 * m * (dz_at(j + 1) - dz_at(j - 1));
                const double wtt =
                    0.25 * m * m * (at(j + 1, k, l) - 2.0 * at(j, k, l) + at(j - 1, k, l));
                const cplx det = rho * wtt - b * std::conj(b);
                q.at(k, l) = 4.0 * det.real();
            }
        out.push_back(std::move(q));
    }
    return out;
}

} // namespace

TEST_CASE("ma_density: exact geodesic, convexified constant, oracle") {
    GridSpec g = GridSpec::make(16);
    PathGrid ramp = PathGrid::linear(ScalarField(g), ScalarField(g, 2.0), 8);
    for (const ScalarField& q : ma_density(ramp)) CHECK(q.max_abs() == 0.0);

    const double m = 0.75;
    PathGrid hump = PathGrid::make(g, 8);
    for (int j = 0; j <= 8; ++j) {
        const double t = hump.time(j);
        hump.slices[j] = ScalarField(g, -m * t * (1.0 - t));
    }
    for (const ScalarField& q : ma_density(hump)) {
        CHECK(q.min() == doctest::Approx(2.0 * m).epsilon(1e-13));
        CHECK(q.max() == doctest::Approx(2.0 * m).epsilon(1e-13));
    }

    // random smooth path vs the independent bordered-determinant expansion
    GridSpec g8 = GridSpec::make(8);
    PathGrid p = PathGrid::make(g8, 4);
    Rng rng(61);
    for (int j = 0; j <= 4; ++j) {
        ScalarField s = mode_field(g8, {1, 0, rng.uniform(0.01, 0.04), rng.uniform(0.0, 6.28)});
        s += mode_field(g8, {1, 1, rng.uniform(0.005, 0.02), rng.uniform(0.0, 6.28)});
        p.slices[j] = std::move(s);
    }
    std::vector<ScalarField> q = ma_density(p);
    std::vector<ScalarField> oracle = bordered_det_oracle(p);
    for (std::size_t j = 0; j < q.size(); ++j) {
        ScalarField d = q[j];
        d -= oracle[j];
        CHECK(d.max_abs() <= 1e-11);
    }
}

TEST_CASE("initial_path: constants, shifted pair, generic positivity") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();

    auto [p0, t0] = initial_path(zero_potential(g), zero_potential(g), cfg);
    CHECK(t0.tau == 1.0);
    // slack is exactly 2m for the pure hump; m comes from the doubling search
    const double m_found = -p0.slices[cfg.m / 2].at(0, 0) /
                           (p0.time(cfg.m / 2) * (1.0 - p0.time(cfg.m / 2)));
    CHECK(t0.min_slack() == doctest::Approx(2.0 * m_found).epsilon(1e-12));
    CHECK(t0.max_slack() == doctest::Approx(2.0 * m_found).epsilon(1e-12));
    CHECK(t0.min_slack() >= cfg.m_margin);

    const KahlerPotential base = one_mode(g, 0.03);
    const KahlerPotential shifted = KahlerPotential::certify([&] {
        ScalarField f = base.phi();
        f += 0.8;
        return f;
    }());
    auto [p1, t1] = initial_path(base, shifted, cfg);
    // mixed term vanishes: slack = 2m rho_{phi0}
    double m1 = 0.0;
    {
        const int j = cfg.m / 2;
        const double t = p1.time(j);
        ScalarField lin = base.phi();
        lin *= (1.0 - t);
        axpy(lin, t, shifted.phi());
        ScalarField d = p1.slices[j];
        d -= lin;
        m1 = -d.at(0, 0) / (t * (1.0 - t));
    }
    ScalarField expect = base.rho();
    expect *= 2.0 * m1;
    ScalarField diff = t1.slack[cfg.m / 2 - 1];
    diff -= expect;
    CHECK(diff.max_abs() <= 1e-11);

    Rng rng(67);
    const KahlerPotential a = KahlerPotential::certify(random_potential(g, rng, 3, 0.4));
    const KahlerPotential b = KahlerPotential::certify(random_potential(g, rng, 3, 0.4));
    auto [p2, t2] = initial_path(a, b, cfg);
    CHECK(t2.min_slack() >= cfg.m_margin);
}

TEST_CASE("residual vanishes where it should") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    Rng rng(71);
    const KahlerPotential a = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    const KahlerPotential b = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    auto [p, target] = initial_path(a, b, cfg);
    CHECK(max_abs_residual(residual(p, target)) == 0.0);

    PathGrid ramp = PathGrid::linear(ScalarField(g), ScalarField(g, 1.0), cfg.m);
    MaTarget zero_target;
    zero_target.slack.assign(cfg.m - 1, ScalarField(g, 1.0));
    zero_target.tau = 0.0;
    CHECK(max_abs_residual(residual(ramp, zero_target)) == 0.0);
}

TEST_CASE("jacobian_apply: zero input, central-difference oracle, closed form") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    Rng rng(73);
    const KahlerPotential a = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    const KahlerPotential b = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    auto [p, target] = initial_path(a, b, cfg);

    TangentAlongPath zero_t = TangentAlongPath::zero(p);
    for (const ScalarField& f : jacobian_apply(p, zero_t)) CHECK(f.max_abs() == 0.0);

    TangentAlongPath v = TangentAlongPath::zero(p);
    for (int j = 1; j < p.m; ++j) {
        ScalarField s = mode_field(g, {rng.uniform_int(-2, 2), rng.uniform_int(1, 2),
                                       rng.uniform(0.2, 0.7), rng.uniform(0.0, 6.28)});
        v.slices[j] = std::move(s);
    }
    // q is quadratic in Phi, so the central difference is exact up to rounding
    const double step = 1e-3;
    PathGrid up = p, dn = p;
    for (int j = 1; j < p.m; ++j) {
        axpy(up.slices[j], step, v.slices[j]);
        axpy(dn.slices[j], -step, v.slices[j]);
    }
    std::vector<ScalarField> qup = ma_density(up), qdn = ma_density(dn);
    std::vector<ScalarField> jv = jacobian_apply(p, v);
    for (int j = 0; j < p.m - 1; ++j) {
        double worst = 0.0;
        for (std::size_t i = 0; i < jv[j].size(); ++i) {
            const double fd = (qup[j].data()[i] - qdn[j].data()[i]) / (2.0 * step);
            worst = std::max(worst, std::abs(fd - jv[j].data()[i]));
        }
        CHECK(worst <= 1e-7);
    }

    // at Phi(t) = -m t(1-t): dq = 2m dzzbar(v) + D_tt(v)
    const double mconv = 0.5;
    PathGrid hump = PathGrid::make(g, cfg.m);
    for (int j = 0; j <= cfg.m; ++j)
        hump.slices[j] = ScalarField(g, -mconv * hump.time(j) * (1.0 - hump.time(j)));
    std::vector<ScalarField> jh = jacobian_apply(hump, v);
    const std::vector<ScalarField> dv = time_derivative(v.slices, cfg.m);
    for (int j = 1; j < cfg.m; ++j) {
        ScalarField expect = dzzbar(v.slices[j]);
        expect *= 2.0 * mconv;
        const double m2 = static_cast<double>(cfg.m) * cfg.m;
        ScalarField dtt = v.slices[j + 1];
        dtt += v.slices[j - 1];
        axpy(dtt, -2.0, v.slices[j]);
        dtt *= m2;
        expect += dtt;
        ScalarField d = jh[j - 1];
        d -= expect;
        CHECK(d.max_abs() <= 1e-9);
    }
}

TEST_CASE("newton accepts an exact solution with zero iterations") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    Rng rng(79);
    const KahlerPotential a = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    const KahlerPotential b = KahlerPotential::certify(random_potential(g, rng, 2, 0.4));
    auto [p, target] = initial_path(a, b, cfg);
    PathGrid before = p;
    StageInfo info = newton_solve(p, target, cfg);
    CHECK(info.newton_iters == 0);
    CHECK(max_diff(p, before) == 0.0);
    CHECK(info.min_q > 0.0);
    CHECK(info.min_rho > 0.0);
}

TEST_CASE("solve_geodesic recovers the constant ramp") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    cfg.eps_target = 1e-4;
    for (double c : {0.5, 2.0}) {
        auto [path, report] = solve_geodesic(zero_potential(g), KahlerPotential::certify(ScalarField(g, c)), cfg);
        PathGrid ramp = PathGrid::linear(ScalarField(g), ScalarField(g, c), cfg.m);
        CHECK(max_diff(path, ramp) <= report.effective_eps);
        CHECK(report.stages.back().tau == cfg.eps_target);
        CHECK(report.effective_eps > 0.0);
    }
}

TEST_CASE("solver trace: monotone residuals and fast tail") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    cfg.tau_factor = 0.1; // larger steps leave Newton real work per stage
    Rng rng(83);
    const KahlerPotential a = KahlerPotential::certify(random_potential(g, rng, 3, 0.35));
    const KahlerPotential b = KahlerPotential::certify(random_potential(g, rng, 3, 0.35));
    auto [path, report] = solve_geodesic(a, b, cfg);
    bool saw_multi_step = false;
    for (const StageInfo& st : report.stages) {
        for (std::size_t i = 1; i < st.residual_history.size(); ++i)
            CHECK(st.residual_history[i] < st.residual_history[i - 1]);
        if (st.residual_history.size() >= 3) {
            saw_multi_step = true;
            // once inside the basin the contraction is superlinear
            const auto& h = st.residual_history;
            const double last = h[h.size() - 1], prev = h[h.size() - 2];
            if (prev < 1e-3) CHECK(last <= 0.05 * prev);
        }
    }
    CHECK(saw_multi_step);
}

TEST_CASE("translation equivariance") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    const KahlerPotential a = one_mode(g, 0.03);
    const KahlerPotential b = one_mode(g, 0.05, 1.0);
    auto [pa, ra] = solve_geodesic(a, b, cfg);

    const double c = 0.7;
    auto shift = [&](const KahlerPotential& kp) {
        ScalarField f = kp.phi();
        f += c;
        return KahlerPotential::certify(f);
    };
    auto [pb, rb] = solve_geodesic(shift(a), shift(b), cfg);
    PathGrid expected = pa;
    for (auto& s : expected.slices) s += c;
    CHECK(max_diff(pb, expected) <= 10.0 * cfg.newton_tol);
}

TEST_CASE("comparison gap: trivial cases and independent solves") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    const KahlerPotential a = one_mode(g, 0.04);
    const KahlerPotential b = one_mode(g, 0.02, 2.0);
    auto [p, r] = solve_geodesic(a, b, cfg);
    CHECK(comparison_gap(p, p) == 0.0);

    PathGrid shifted = p;
    for (auto& s : shifted.slices) s += 0.3;
    CHECK(comparison_gap(p, shifted) == 0.0);

    // same boundary data, different convexification depth, small eps:
    // both approximate the same weak solution
    SolverConfig tight = cfg;
    tight.eps_target = 1e-6;
    tight.newton_tol = 1e-8;
    auto [p1, r1] = solve_geodesic(a, b, tight);
    SolverConfig other = tight;
    other.m_start = tight.m_start * 2.0;
    other.m_margin = tight.m_margin * 2.0;
    auto [p2, r2] = solve_geodesic(a, b, other);
    CHECK(comparison_gap(p1, p2) <= 10.0 * tight.newton_tol);
}

TEST_CASE("solve is deterministic") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    const KahlerPotential a = one_mode(g, 0.04);
    const KahlerPotential b = one_mode(g, 0.03, 0.5);
    auto [p1, r1] = solve_geodesic(a, b, cfg);
    auto [p2, r2] = solve_geodesic(a, b, cfg);
    CHECK(max_diff(p1, p2) == 0.0);
    CHECK(serialize(r1) == serialize(r2));
}

TEST_CASE("t-convexity, envelope bounds and eps-monotonicity") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    cfg.eps_target = 1e-3;
    const KahlerPotential a = zero_potential(g);
    const KahlerPotential b = KahlerPotential::certify([&] {
        ScalarField f = mode_field(g, {1, 0, 0.05, 0.0});
        f += 0.5;
        return f;
    }());

    auto [path, report] = solve_geodesic(a, b, cfg);
    CHECK(min_t_convexity(path) >= -cfg.newton_tol);

    auto [phi0path, target] = initial_path(a, b, cfg);
    PathGrid cap = PathGrid::linear(a.phi(), b.phi(), cfg.m);
    const double tol = 10.0 * (report.effective_eps + g.h * g.h);
    for (int j = 0; j <= cfg.m; ++j)
        for (std::size_t i = 0; i < path.slices[j].size(); ++i) {
            const double v = path.slices[j].data()[i];
            CHECK(v >= phi0path.slices[j].data()[i] - tol);
            CHECK(v <= cap.slices[j].data()[i] + tol);
        }

    SolverConfig finer = cfg;
    finer.eps_target = 1e-4;
    auto [path2, report2] = solve_geodesic(a, b, finer);
    for (int j = 0; j <= cfg.m; ++j)
        for (std::size_t i = 0; i < path2.slices[j].size(); ++i)
            CHECK(path2.slices[j].data()[i] >= path.slices[j].data()[i] - tol);
}

TEST_CASE("differentiated-equation identity in the x direction") {
    // two parts: d_x of both sides of the converged equation agree to
    // residual precision, and the linearized operator applied to d_x Phi
    // reproduces d_x(q) up to the O(h^2) product-rule defect
    auto run = [](int n, int m, double* eq_part, double* commutator) {
        GridSpec g = GridSpec::make(n);
        SolverConfig cfg;
        cfg.m = m;
        cfg.eps_target = 1e-3;
        cfg.newton_tol = 1e-9;
        const KahlerPotential a = KahlerPotential::certify(mode_field(g, {1, 0, 0.05, 0.0}));
        const KahlerPotential b = KahlerPotential::certify(mode_field(g, {1, 1, 0.03, 0.7}));
        auto [path, report] = solve_geodesic(a, b, cfg);
        auto [p0, target] = initial_path(a, b, cfg);
        target.tau = report.stages.back().tau;

        TangentAlongPath dx_phi = TangentAlongPath::zero(path);
        for (int j = 0; j <= path.m; ++j) dx_phi.slices[j] = d_x(path.slices[j]);
        const std::vector<ScalarField> lhs = jacobian_apply(path, dx_phi);
        const std::vector<ScalarField> q = ma_density(path);

        *eq_part = 0.0;
        *commutator = 0.0;
        for (int j = 1; j < path.m; ++j) {
            ScalarField dxq = d_x(q[j - 1]);
            ScalarField rhs = d_x(target.slack[j - 1]);
            rhs *= target.tau;
            ScalarField d1 = dxq;
            d1 -= rhs;
            *eq_part = std::max(*eq_part, d1.max_abs());
            ScalarField d2 = lhs[j - 1];
            d2 -= dxq;
            *commutator = std::max(*commutator, d2.max_abs());
        }
        return cfg.newton_tol;
    };

    double eq16, com16, eq32, com32, eq64, com64;
    const double ntol = run(16, 8, &eq16, &com16);
    run(32, 8, &eq32, &com32);
    run(64, 8, &eq64, &com64);

    CHECK(eq16 <= 100.0 * ntol * 16);
    CHECK(eq32 <= 100.0 * ntol * 32);
    CHECK(eq64 <= 100.0 * ntol * 64);
    // second-order trend of the stencil commutator under x refinement
    CHECK(com16 / com32 >= 2.2);
    CHECK(com32 / com64 >= 2.8);
    CHECK(com64 <= 0.04);
}

TEST_CASE("bordered Hessian stays bounded through the schedule") {
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = quick_config();
    const KahlerPotential a = one_mode(g, 0.05);
    const KahlerPotential b = one_mode(g, 0.04, 2.1);
    double lam_coarse = 0.0, lam_fine = 0.0;
    {
        SolverConfig c1 = cfg;
        c1.eps_target = 1e-2;
        lam_coarse = max_bordered_eigenvalue(solve_geodesic(a, b, c1).first);
    }
    {
        SolverConfig c2 = cfg;
        c2.eps_target = 1e-4;
        lam_fine = max_bordered_eigenvalue(solve_geodesic(a, b, c2).first);
    }
    CHECK(lam_fine <= 2.0 * lam_coarse);
    CHECK(lam_coarse <= 2.0 * lam_fine);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.eps_target = 0.0;
    CHECK_THROWS_AS(cfg.validate(), solver_error);
    cfg = SolverConfig{};
    cfg.tau_factor = 1.5;
    CHECK_THROWS_AS(cfg.validate(), solver_error);
    cfg = SolverConfig{};
    cfg.m = 1;
    CHECK_THROWS_AS(cfg.validate(), solver_error);
}
