#include "kgeo/verify.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "kgeo/energy.hpp"
#include "kgeo/fields.hpp"
#include "kgeo/geometry.hpp"
#include "kgeo/io.hpp"
#include "kgeo/metric.hpp"
#include "kgeo/reduced.hpp"
#include "kgeo/solver.hpp"

namespace kgeo::verify {

namespace {

struct Params {
    int n;
    int m;
};

Params level_params(Level level) {
    return level == Level::quick ? Params{16, 8} : Params{32, 16};
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

SolverConfig base_config(int m, double eps) {
    SolverConfig cfg;
    cfg.m = m;
    cfg.eps_target = eps;
    cfg.newton_tol = 1e-9;
    return cfg;
}

KahlerPotential zero_potential(GridSpec g) {
    return KahlerPotential::certify(ScalarField(g));
}

KahlerPotential seeded_potential(GridSpec g, Rng& rng, int max_modes, double floor) {
    return KahlerPotential::certify(random_potential(g, rng, max_modes, floor));
}

std::string flag(bool ok) { return ok ? "ok" : "FAIL"; }

// ---------------------------------------------------------------- 1
CriterionResult exact_geodesic_recovery() {
    CriterionResult r;
    r.name = "exact-geodesic-recovery";
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = base_config(8, 1e-4);
    std::ostringstream d;
    r.pass = true;
    for (double c : {0.5, 1.0, 2.0}) {
        const double t0 = now_seconds();
        const DistanceReport rep =
            distance(zero_potential(g), KahlerPotential::certify(ScalarField(g, c)), cfg);
        const double secs = now_seconds() - t0;
        const double rel = std::abs(rep.length - c) / c;
        const bool ok = rel <= 1e-6 && secs <= 10.0;
        r.pass = r.pass && ok;
        d << " c=" << num17(c) << " rel_err=" << num17(rel) << " " << flag(ok);
    }
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 2
CriterionResult comparison_uniqueness(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "comparison-uniqueness";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    Rng rng(seed ^ 0x2ULL);

    SolverConfig tight = base_config(p.m, 1e-6);
    tight.newton_tol = 1e-8;
    const KahlerPotential a = seeded_potential(g, rng, 2, 0.5);
    const KahlerPotential b = seeded_potential(g, rng, 2, 0.5);

    auto [p1, r1] = solve_geodesic(a, b, tight);
    SolverConfig deeper = tight;
    deeper.m_start = tight.m_start * 2.0;
    deeper.m_margin = tight.m_margin * 2.0;
    auto [p2, r2] = solve_geodesic(a, b, deeper);
    const double gap = comparison_gap(p1, p2);
    const bool gap_ok = gap <= 10.0 * tight.newton_tol;

    const double c = 0.7;
    auto shift = [&](const KahlerPotential& kp) {
        ScalarField f = kp.phi();
        f += c;
        return KahlerPotential::certify(f);
    };
    auto [p3, r3] = solve_geodesic(shift(a), shift(b), tight);
    double trans = 0.0;
    for (int j = 0; j <= p1.m; ++j) {
        ScalarField dslice = p3.slices[j];
        dslice -= p1.slices[j];
        dslice += -c;
        trans = std::max(trans, dslice.max_abs());
    }
    const bool trans_ok = trans <= 10.0 * tight.newton_tol;

    r.pass = gap_ok && trans_ok;
    std::ostringstream d;
    d << " gap=" << num17(gap) << " " << flag(gap_ok) << " translation=" << num17(trans)
      << " " << flag(trans_ok) << " bound=" << num17(10.0 * tight.newton_tol);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 3
CriterionResult energy_element_drift(Level level) {
    CriterionResult r;
    r.name = "energy-element-drift";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    // one-mode pair with a unit shift: amplitude keeps the linear-in-eps
    // drift above the fixed-grid conservation defect
    ScalarField f1 = mode_field(g, {1, 0, 0.005, 0.0});
    f1 += 1.0;
    const KahlerPotential b = KahlerPotential::certify(f1);

    std::ostringstream d;
    r.pass = true;
    const double epss[3] = {1e-2, 1e-3, 1e-4};
    double drifts[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        SolverConfig cfg = base_config(p.m, epss[i]);
        cfg.newton_tol = 1e-10;
        PathGrid path;
        SolveReport solve;
        distance(zero_potential(g), b, cfg, &path, &solve);
        const DriftCheck dc = energy_drift_check(path, solve, 0.1);
        drifts[i] = dc.drift_times_m;
        r.pass = r.pass && dc.pass;
        d << " eps=" << num17(epss[i]) << " drift=" << num17(dc.drift_times_m)
          << " bound=" << num17(dc.bound) << " " << flag(dc.pass);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        const double x = std::log10(epss[i]), y = std::log10(drifts[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    const bool slope_ok = slope >= 0.8 && slope <= 1.2;
    r.pass = r.pass && slope_ok;
    d << " slope=" << num17(slope) << " " << flag(slope_ok);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 4
CriterionResult convexity_and_envelopes(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "t-convexity-envelope";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    Rng rng(seed ^ 0x4ULL);
    std::ostringstream d;
    r.pass = true;

    std::vector<std::pair<KahlerPotential, KahlerPotential>> pairs;
    pairs.emplace_back(zero_potential(g), KahlerPotential::certify(ScalarField(g, 1.0)));
    pairs.emplace_back(seeded_potential(g, rng, 2, 0.4), seeded_potential(g, rng, 2, 0.4));

    for (const auto& [a, b] : pairs) {
        SolverConfig cfg = base_config(p.m, 1e-3);
        auto [path, report] = solve_geodesic(a, b, cfg);

        const double conv = min_t_convexity(path);
        const bool conv_ok = conv >= -cfg.newton_tol;

        auto [lower, target] = initial_path(a, b, cfg);
        PathGrid cap = PathGrid::linear(a.phi(), b.phi(), cfg.m);
        const double tol = 10.0 * (report.effective_eps + g.h * g.h);
        bool env_ok = true;
        for (int j = 0; j <= cfg.m; ++j)
            for (std::size_t i = 0; i < path.slices[j].size(); ++i) {
                const double v = path.slices[j].data()[i];
                if (v < lower.slices[j].data()[i] - tol) env_ok = false;
                if (v > cap.slices[j].data()[i] + tol) env_ok = false;
            }

        // smaller eps never lowers the solution beyond tolerance, and the
        // reported length is non-increasing
        SolverConfig finer = cfg;
        finer.eps_target = 1e-4;
        auto [path2, report2] = solve_geodesic(a, b, finer);
        bool mono_ok = true;
        for (int j = 0; j <= cfg.m; ++j)
            for (std::size_t i = 0; i < path.slices[j].size(); ++i)
                if (path2.slices[j].data()[i] < path.slices[j].data()[i] - tol)
                    mono_ok = false;
        if (path_length(path2) > path_length(path) + tol) mono_ok = false;

        // bordered Hessian stays bounded as eps decreases
        const double lam1 = max_bordered_eigenvalue(path);
        const double lam2 = max_bordered_eigenvalue(path2);
        const bool hess_ok = lam2 <= 2.0 * lam1 && lam1 <= 2.0 * lam2;

        // differentiating both sides of the converged equation along x
        bool diffeq_ok = true;
        {
            target.tau = report.stages.back().tau;
            const std::vector<ScalarField> q = ma_density(path);
            for (int j = 1; j < path.m; ++j) {
                ScalarField dev = d_x(q[j - 1]);
                ScalarField rhs = d_x(target.slack[j - 1]);
                rhs *= target.tau;
                dev -= rhs;
                if (dev.max_abs() > 100.0 * cfg.newton_tol * g.n) diffeq_ok = false;
            }
        }

        const bool ok = conv_ok && env_ok && mono_ok && hess_ok && diffeq_ok;
        r.pass = r.pass && ok;
        d << " min_dtt=" << num17(conv) << " envelope=" << flag(env_ok)
          << " eps_monotone=" << flag(mono_ok) << " hessian=" << flag(hess_ok)
          << " diff_eq=" << flag(diffeq_ok);
    }
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 5
CriterionResult length_lower_bound(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "length-lower-bound";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    Rng rng(seed ^ 0x5ULL);
    SolverConfig cfg = base_config(p.m, 1e-3);
    std::ostringstream d;
    r.pass = true;
    for (int i = 0; i < 10; ++i) {
        const int modes = 1 + (i % 2);
        const KahlerPotential phi = seeded_potential(g, rng, modes, 0.35);
        const LowerBoundCheck lb = lower_bound_check(phi, cfg);
        const bool ok = lb.pass && lb.rhs > 0.0;
        r.pass = r.pass && ok;
        if (i < 3)
            d << " len=" << num17(lb.length) << " rhs=" << num17(lb.rhs) << " " << flag(ok);
    }
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 6
CriterionResult triangle_inequality(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "triangle-inequality";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(16); // grid size fixed by the criterion
    Rng rng(seed ^ 0x6ULL);
    SolverConfig cfg = base_config(p.m, 1e-3);
    std::ostringstream d;
    r.pass = true;
    const double t0 = now_seconds();
    double worst_slack = 1e300;
    for (int i = 0; i < 20; ++i) {
        const KahlerPotential a = seeded_potential(g, rng, 3, 0.35);
        const KahlerPotential b = seeded_potential(g, rng, 3, 0.35);
        const KahlerPotential c = seeded_potential(g, rng, 3, 0.35);
        const TriangleCheck tc = triangle_check(a, b, c, cfg);
        worst_slack = std::min(worst_slack, tc.slack / tc.tol);
        r.pass = r.pass && tc.pass;
    }
    const double secs = now_seconds() - t0;
    const bool time_ok = secs <= 900.0;

    // distance symmetry within the drift-based error bar
    bool sym_ok = true;
    {
        const KahlerPotential a = seeded_potential(g, rng, 2, 0.4);
        const KahlerPotential b = seeded_potential(g, rng, 2, 0.4);
        const DistanceReport rab = distance(a, b, cfg);
        const DistanceReport rba = distance(b, a, cfg);
        double emin = 1e300;
        for (double e : rab.slice_energies) emin = std::min(emin, e);
        const double tol =
            2.0 * (rab.energy_drift + rba.energy_drift) / (2.0 * std::sqrt(emin)) + 1e-8;
        sym_ok = std::abs(rab.length - rba.length) <= tol;
    }

    r.pass = r.pass && time_ok && sym_ok;
    d << " triples=20 worst_slack_over_tol=" << num17(worst_slack) << " runtime="
      << flag(time_ok) << " symmetry=" << flag(sym_ok);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 7
CriterionResult minimality(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "geodesic-minimality";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    Rng rng(seed ^ 0x7ULL);
    SolverConfig cfg = base_config(p.m, 1e-3);
    const KahlerPotential a = seeded_potential(g, rng, 2, 0.45);
    const KahlerPotential b = seeded_potential(g, rng, 2, 0.45);
    const MinimalityCheck mc = minimality_check(a, b, 25, cfg, seed ^ 0x77ULL);
    r.pass = mc.pass && mc.candidates == 25;
    std::ostringstream d;
    d << " geodesic=" << num17(mc.geodesic_length)
      << " shortest_candidate=" << num17(mc.shortest_candidate)
      << " candidates=" << mc.candidates;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 8
CriterionResult first_variation(Level level) {
    CriterionResult r;
    r.name = "distance-first-variation";
    GridSpec g = GridSpec::make(16); // grid size fixed by the criterion
    SolverConfig cfg = base_config(level_params(level).m, 1e-3);
    ScalarField base = mode_field(g, {1, 0, 0.04, 0.0});
    base += 0.5;
    ScalarField dir = mode_field(g, {1, 0, 0.03, 0.8});
    const FirstVariationCheck fv =
        distance_first_variation(zero_potential(g), base, dir, 0.5, 0.1, cfg);
    r.pass = fv.rel_error <= 0.05;
    std::ostringstream d;
    d << " finite_difference=" << num17(fv.finite_difference)
      << " formula=" << num17(fv.formula) << " rel_error=" << num17(fv.rel_error);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 9
CriterionResult oracle_equivalence() {
    CriterionResult r;
    r.name = "oracle-equivalence";
    GridSpec g = GridSpec::make(16);
    SolverConfig cfg = base_config(8, 1e-4); // N=16, M=8 fixed by the criterion
    ScalarField phi0 = mode_field(g, {1, 0, 0.05, 0.0});
    ScalarField phi1 = mode_field(g, {1, 0, 0.03, 2.0});
    phi1 += 0.6;

    const PathGrid oracle = reduced_oracle(phi0, phi1, cfg);
    auto [solved, report] = solve_geodesic(KahlerPotential::certify(phi0),
                                           KahlerPotential::certify(phi1), cfg);
    double worst = 0.0;
    for (int j = 0; j <= cfg.m; ++j) {
        ScalarField d = solved.slices[j];
        d -= oracle.slices[j];
        worst = std::max(worst, d.max_abs());
    }
    const double tol = 5.0 * (g.h * g.h + cfg.eps_target);
    r.pass = worst <= tol;
    std::ostringstream d;
    d << " max_diff=" << num17(worst) << " tol=" << num17(tol);
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 10
CriterionResult formal_geometry(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "formal-geometry";
    Rng rng(seed ^ 0xAULL);
    std::ostringstream d;

    // metric compatibility at second order under joint grid doubling
    auto compat_residual = [](int n, int m) {
        GridSpec g = GridSpec::make(n);
        PathGrid path = PathGrid::make(g, m);
        TangentAlongPath psi;
        psi.grid = g;
        psi.m = m;
        psi.slices.assign(m + 1, ScalarField(g));
        for (int j = 0; j <= m; ++j) {
            const double t = static_cast<double>(j) / m;
            ScalarField s = mode_field(g, {1, 0, 0.03 * std::sin(M_PI * t), 0.4});
            s += mode_field(g, {1, 1, 0.015 * t, 0.0});
            path.slices[j] = std::move(s);
            ScalarField w = mode_field(g, {1, 0, 0.5 * std::cos(M_PI * t), 0.0});
            w += mode_field(g, {2, 1, 0.3 * t, 0.7});
            psi.slices[j] = std::move(w);
        }
        const TangentAlongPath dpsi = covariant_derivative(path, psi);
        double worst = 0.0;
        std::vector<double> norm2(m + 1), pairing(m + 1);
        for (int j = 0; j <= m; ++j) {
            const KahlerPotential kp = KahlerPotential::certify(path.slices[j]);
            norm2[j] = mabuchi_inner(psi.slices[j], psi.slices[j], kp);
            pairing[j] = mabuchi_inner(dpsi.slices[j], psi.slices[j], kp);
        }
        for (int j = 1; j < m; ++j) {
            const double ddt = (norm2[j + 1] - norm2[j - 1]) * m / 2.0;
            worst = std::max(worst, std::abs(ddt - 2.0 * pairing[j]));
        }
        return worst;
    };
    const double coarse = compat_residual(16, 8);
    const double fine = compat_residual(32, 16);
    const bool compat_ok = coarse / fine >= 3.0 && coarse / fine <= 5.5;
    d << " compat_ratio=" << num17(coarse / fine) << " " << flag(compat_ok);

    // torsion symmetry is bitwise
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    const KahlerPotential phi = seeded_potential(g, rng, 3, 0.4);
    ScalarField u(g), v(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.data()[i] = rng.uniform(-1.0, 1.0);
        v.data()[i] = rng.uniform(-1.0, 1.0);
    }
    const bool torsion_ok = christoffel(u, v, phi) == christoffel(v, u, phi);
    d << " torsion=" << flag(torsion_ok);

    // closedness of alpha: exact discrete self-adjointness
    ScalarField t1 = dzzbar(u), t2 = dzzbar(v);
    std::vector<double> prod(u.size());
    for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = v.data()[i] * t1.data()[i] - u.data()[i] * t2.data()[i];
    const double dalpha = std::abs(g.h * g.h * pairwise_sum(prod));
    const bool closed_ok = dalpha <= 1e-12;
    d << " dalpha=" << num17(dalpha) << " " << flag(closed_ok);

    // sectional curvature nonpositive on 1000 seeded pairs
    bool sec_ok = true;
    for (int i = 0; i < 1000; ++i) {
        ScalarField a(g), b(g);
        for (std::size_t k = 0; k < a.size(); ++k) {
            a.data()[k] = rng.uniform(-1.0, 1.0);
            b.data()[k] = rng.uniform(-1.0, 1.0);
        }
        if (sectional_curvature(a, b, phi) > 0.0) sec_ok = false;
    }
    d << " sectional=" << flag(sec_ok);

    // exact summation identities of the calculus layer
    ScalarField fw(g), wf(g);
    {
        const ScalarField dxu = d_x(u), dxv = d_x(v);
        for (std::size_t i = 0; i < fw.size(); ++i) {
            fw.data()[i] = u.data()[i] * dxv.data()[i];
            wf.data()[i] = v.data()[i] * dxu.data()[i];
        }
    }
    const double sbp = std::abs(integrate(fw) + integrate(wf));
    const double mass = std::abs(integrate(dzzbar(u)));
    const double vol = std::abs(integrate(ScalarField(g, 1.0), phi.rho()) - 1.0);
    const bool exact_ok = sbp <= 1e-12 && mass <= 1e-10 && vol <= 1e-12;
    d << " sbp=" << num17(sbp) << " mass=" << num17(mass) << " vol=" << num17(vol) << " "
      << flag(exact_ok);

    // second-order stencil consistency and bracket Leibniz rule
    auto stencil_residual = [](int n) {
        GridSpec gg = GridSpec::make(n);
        ScalarField f = mode_field(gg, {1, 0, 1.0, 0.2});
        f += mode_field(gg, {2, 3, 0.5, 1.1});
        ScalarField exact(gg);
        for (int k = 0; k < gg.n; ++k)
            for (int l = 0; l < gg.n; ++l) {
                const double x = gg.coord(k), y = gg.coord(l);
                exact.at(k, l) =
                    -2.0 * M_PI * std::sin(2.0 * M_PI * x + 0.2) -
                    0.5 * 2.0 * M_PI * 2.0 * std::sin(2.0 * M_PI * (2.0 * x + 3.0 * y) + 1.1);
            }
        ScalarField got = d_x(f);
        got -= exact;
        return got.max_abs();
    };
    auto leibniz_residual = [](int n) {
        GridSpec gg = GridSpec::make(n);
        const KahlerPotential zero = KahlerPotential::certify(ScalarField(gg));
        const ScalarField f = mode_field(gg, {1, 0, 0.8, 0.3});
        const ScalarField a = mode_field(gg, {0, 1, 0.6, 1.0});
        const ScalarField b = mode_field(gg, {1, 1, 0.5, 0.2});
        ScalarField ab(gg);
        for (std::size_t i = 0; i < ab.size(); ++i)
            ab.data()[i] = a.data()[i] * b.data()[i];
        const ScalarField lhs = poisson_bracket(f, ab, zero);
        const ScalarField r1 = poisson_bracket(f, b, zero);
        const ScalarField r2 = poisson_bracket(f, a, zero);
        double worst = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            worst = std::max(worst, std::abs(lhs.data()[i] - a.data()[i] * r1.data()[i] -
                                             b.data()[i] * r2.data()[i]));
        return worst;
    };
    const double sr = stencil_residual(32) / stencil_residual(64);
    const double lr = leibniz_residual(32) / leibniz_residual(64);
    const bool order_ok = sr >= 3.6 && sr <= 4.4 && lr >= 3.2 && lr <= 4.8;
    d << " stencil_ratio=" << num17(sr) << " leibniz_ratio=" << num17(lr) << " "
      << flag(order_ok);

    r.pass = compat_ok && torsion_ok && closed_ok && sec_ok && exact_ok && order_ok;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 11
CriterionResult csc_energy_suite(std::uint64_t seed) {
    CriterionResult r;
    r.name = "csc-energy-suite";
    Rng rng(seed ^ 0xBULL);
    std::ostringstream d;
    GridSpec g32 = GridSpec::make(32);

    // Gauss-Bonnet and global minimum on 50 seeded potentials
    bool gauss_ok = true;
    for (int i = 0; i < 50; ++i) {
        const KahlerPotential kp = seeded_potential(g32, rng, 3, 0.2);
        if (std::abs(scalar_curvature(kp).Rbar) > 1e-12) gauss_ok = false;
    }
    d << " gauss_bonnet=" << flag(gauss_ok);

    const GlobalMinCheck gm = global_min_check(g32, 50, seed ^ 0xB1ULL);
    const bool flat_zero =
        mabuchi_energy(zero_potential(g32), 24).value == 0.0;
    d << " min_energy=" << num17(gm.min_energy) << " " << flag(gm.pass && flat_zero);

    // flat-torus Lichnerowicz kernel: non-constant resolvable modes have
    // strictly positive norm
    bool kernel_ok = true;
    {
        const KahlerPotential flat = zero_potential(g32);
        for (int kx = 0; kx <= 2 && kernel_ok; ++kx)
            for (int ky = 0; ky <= 2; ++ky) {
                if (kx == 0 && ky == 0) continue;
                if (lichnerowicz_norm2(flat, mode_field(g32, {kx, ky, 1.0, 0.3})) <= 1.0) {
                    kernel_ok = false;
                    break;
                }
            }
    }
    d << " kernel=" << flag(kernel_ok);

    // path independence of the energy quadrature
    const ScalarField target = random_potential(g32, rng, 3, 0.3);
    const ScalarField mid = random_potential(g32, rng, 2, 0.5);
    const double straight = mabuchi_energy_segment(ScalarField(g32), target, 24);
    const double polygonal = mabuchi_energy_segment(ScalarField(g32), mid, 24) +
                             mabuchi_energy_segment(mid, target, 24);
    const bool path_ok =
        std::abs(straight - polygonal) <= 1e-10 * std::max(1.0, std::abs(straight));
    d << " path_independence=" << num17(std::abs(straight - polygonal)) << " "
      << flag(path_ok);

    // convexity along a solved eps-geodesic, and kappa stability across
    // three configurations differing in grid, time slices and endpoints;
    // the pairs stay band-limited so the O(h^2) fit bias sits inside the
    // +-2% acceptance window
    bool convex_ok = true, kappa_ok = true;
    const int conv_n[3] = {32, 48, 48};
    const int conv_m[3] = {16, 12, 20};
    for (int trial = 0; trial < 3; ++trial) {
        GridSpec gc = GridSpec::make(conv_n[trial]);
        SolverConfig cfg = base_config(conv_m[trial], 1e-3);
        const KahlerPotential a =
            KahlerPotential::certify(random_potential(gc, rng, 2, 0.65, 1));
        const KahlerPotential b =
            KahlerPotential::certify(random_potential(gc, rng, 2, 0.65, 1));
        auto [path, report] = solve_geodesic(a, b, cfg);
        const ConvexityReport cr = energy_convexity_check(path, 24);
        if (cr.min_second_difference < -10.0 * report.effective_eps) convex_ok = false;
        if (std::abs(cr.kappa_fit - kEnergyIdentityKappa) > 0.02) kappa_ok = false;
        d << " kappa=" << num17(cr.kappa_fit);
    }
    d << " convexity=" << flag(convex_ok) << " kappa_stable=" << flag(kappa_ok);

    r.pass = gauss_ok && gm.pass && flat_zero && kernel_ok && path_ok && convex_ok && kappa_ok;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------- 12
CriterionResult determinism(Level level, std::uint64_t seed) {
    CriterionResult r;
    r.name = "determinism";
    const Params p = level_params(level);
    GridSpec g = GridSpec::make(p.n);
    auto pipeline = [&] {
        Rng rng(seed ^ 0xCULL);
        const KahlerPotential a = seeded_potential(g, rng, 3, 0.4);
        const KahlerPotential b = seeded_potential(g, rng, 3, 0.4);
        SolverConfig cfg = base_config(p.m, 1e-3);
        PathGrid path;
        SolveReport solve;
        const DistanceReport rep = distance(a, b, cfg, &path, &solve);
        std::ostringstream os;
        os << serialize(rep) << serialize(solve);
        write_path(os, path);
        return os.str();
    };
    const std::string first = pipeline();
    const std::string second = pipeline();
    r.pass = first == second;
    std::ostringstream d;
    d << " bytes=" << first.size() << " identical=" << flag(r.pass);
    r.detail = d.str();
    return r;
}

} // namespace

std::vector<CriterionResult> run_criteria(Level level, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(exact_geodesic_recovery());
    out.push_back(comparison_uniqueness(level, seed));
    out.push_back(energy_element_drift(level));
    out.push_back(convexity_and_envelopes(level, seed));
    out.push_back(length_lower_bound(level, seed));
    out.push_back(triangle_inequality(level, seed));
    out.push_back(minimality(level, seed));
    out.push_back(first_variation(level));
    out.push_back(oracle_equivalence());
    out.push_back(formal_geometry(level, seed));
    out.push_back(csc_energy_suite(seed));
    out.push_back(determinism(level, seed));
    return out;
}

bool print_report(std::ostream& os, const std::vector<CriterionResult>& results,
                  Level level, std::uint64_t seed) {
    os << "verification level=" << (level == Level::quick ? "quick" : "full")
       << " seed=" << seed << "\n";
    bool all = true;
    int idx = 0;
    for (const CriterionResult& r : results) {
        ++idx;
        os << "[" << (r.pass ? "PASS" : "FAIL") << "] " << idx << " " << r.name << ":"
           << r.detail << "\n";
        all = all && r.pass;
    }
    os << "result " << (all ? "PASS" : "FAIL") << " " << idx << " criteria\n";
    return all;
}

} // namespace kgeo::verify
