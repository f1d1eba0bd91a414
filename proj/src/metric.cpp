#include "kgeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kgeo/io.hpp"

namespace kgeo {

std::string serialize(const DistanceReport& r) {
    std::ostringstream os;
    os << "length = " << num17(r.length) << "\n"
       << "energy_drift = " << num17(r.energy_drift) << "\n"
       << "effective_eps = " << num17(r.effective_eps) << "\n"
       << "lower_bound_rhs = " << num17(r.lower_bound_rhs) << "\n"
       << "tslices = " << r.config.m << "\n"
       << "eps_target = " << num17(r.config.eps_target) << "\n"
       << "tau_factor = " << num17(r.config.tau_factor) << "\n"
       << "newton_tol = " << num17(r.config.newton_tol) << "\n";
    return os.str();
}

DistanceReport distance(const KahlerPotential& phi0, const KahlerPotential& phi1,
                        const SolverConfig& cfg, PathGrid* path_out,
                        SolveReport* solve_out) {
    auto [path, report] = solve_geodesic(phi0, phi1, cfg);
    DistanceReport out;
    out.config = cfg;
    out.effective_eps = report.effective_eps;
    out.slice_energies = slice_energies(path);
    out.length = [&] {
        std::vector<double> s = out.slice_energies;
        for (double& v : s) v = std::sqrt(v);
        return trapezoid(s, path.m);
    }();
    double mean = 0.0;
    for (double e : out.slice_energies) mean += e;
    mean /= out.slice_energies.size();
    for (double e : out.slice_energies)
        out.energy_drift = std::max(out.energy_drift, std::abs(e - mean));

    // sign-split bound on the normalized endpoint difference: positive part
    // against d mu_{phi1}, negative part against d mu_{phi0}.  Coincides with
    // the lower_bound_check expression when phi0 = 0.
    {
        const ScalarField diff = normalize(phi1.phi() - phi0.phi());
        std::vector<double> p(diff.size(), 0.0), q(diff.size(), 0.0);
        for (std::size_t i = 0; i < diff.size(); ++i) {
            const double v = diff.data()[i];
            if (v > 0.0) p[i] = v * phi1.rho().data()[i];
            if (v < 0.0) q[i] = v * phi0.rho().data()[i];
        }
        const double h2 = diff.h() * diff.h();
        out.lower_bound_rhs = std::max(h2 * pairwise_sum(p), -h2 * pairwise_sum(q));
    }

    if (path_out) *path_out = std::move(path);
    if (solve_out) *solve_out = std::move(report);
    return out;
}

DriftCheck energy_drift_check(const PathGrid& path, const SolveReport& report,
                              double slack_tol) {
    const std::vector<double> e = slice_energies(path);
    const std::vector<ScalarField> dphi = time_derivative(path.slices, path.m);
    double max_dphi = 0.0;
    for (const ScalarField& f : dphi) max_dphi = std::max(max_dphi, f.max_abs());

    DriftCheck out;
    for (int j = 0; j < path.m; ++j)
        out.drift_times_m = std::max(out.drift_times_m, std::abs(e[j + 1] - e[j]) * path.m);
    out.bound = 2.0 * report.effective_eps * max_dphi * (1.0 + slack_tol);
    out.pass = out.drift_times_m <= out.bound;
    return out;
}

double prop2_rhs(const KahlerPotential& phi) {
    const ScalarField& f = phi.phi();
    const ScalarField& rho = phi.rho();
    std::vector<double> p(f.size(), 0.0), q(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = f.data()[i];
        if (v > 0.0) p[i] = v * rho.data()[i];
        if (v < 0.0) q[i] = v;
    }
    const double h2 = f.h() * f.h();
    return std::max(h2 * pairwise_sum(p), -h2 * pairwise_sum(q));
}

LowerBoundCheck lower_bound_check(const KahlerPotential& phi, const SolverConfig& cfg) {
    const KahlerPotential normalized = KahlerPotential::certify(normalize(phi.phi()));
    const KahlerPotential zero = KahlerPotential::certify(ScalarField(phi.grid()));

    const DistanceReport rep = distance(zero, normalized, cfg);

    LowerBoundCheck out;
    out.rhs = prop2_rhs(normalized);
    out.length = rep.length;
    out.pass = out.length >= out.rhs - 10.0 * rep.effective_eps;
    return out;
}

TriangleCheck triangle_check(const KahlerPotential& a, const KahlerPotential& b,
                             const KahlerPotential& c, const SolverConfig& cfg) {
    TriangleCheck out;
    const DistanceReport rab = distance(a, b, cfg);
    const DistanceReport rbc = distance(b, c, cfg);
    const DistanceReport rac = distance(a, c, cfg);
    out.d_ab = rab.length;
    out.d_bc = rbc.length;
    out.d_ac = rac.length;
    out.slack = rab.length + rbc.length - rac.length;
    const double eps = std::max({rab.effective_eps, rbc.effective_eps, rac.effective_eps});
    const double h = a.grid().h;
    out.tol = 10.0 * (eps + h * h);
    out.pass = out.slack >= -out.tol;
    return out;
}

MinimalityCheck minimality_check(const KahlerPotential& phi0, const KahlerPotential& phi1,
                                 int count, const SolverConfig& cfg, std::uint64_t seed) {
    PathGrid geo;
    SolveReport solve;
    const DistanceReport rep = distance(phi0, phi1, cfg, &geo, &solve);

    MinimalityCheck out;
    out.geodesic_length = rep.length;
    out.shortest_candidate = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const double tol = 10.0 * (rep.effective_eps + phi0.grid().h * phi0.grid().h);

    out.pass = true;
    for (int trial = 0; trial < count; ++trial) {
        PathGrid cand = PathGrid::linear(phi0.phi(), phi1.phi(), cfg.m);
        const int nmodes = rng.uniform_int(1, 3);
        std::vector<Mode> modes(nmodes);
        for (Mode& md : modes) {
            do {
                md.kx = rng.uniform_int(-3, 3);
                md.ky = rng.uniform_int(-3, 3);
            } while (md.kx == 0 && md.ky == 0);
            md.amp = rng.uniform(0.005, 0.04);
            md.phase = rng.uniform(0.0, 2.0 * M_PI);
        }
        ScalarField bump = mode_sum(phi0.grid(), modes);
        // shrink the perturbation until all interior slices stay admissible
        for (int shrink = 0; shrink < 60; ++shrink) {
            bool ok = true;
            for (int j = 1; j < cand.m && ok; ++j) {
                ScalarField s = cand.slices[j];
                axpy(s, std::sin(M_PI * cand.time(j)), bump);
                if (density(s).min() <= 0.0) ok = false;
            }
            if (ok) break;
            bump *= 0.5;
        }
        for (int j = 1; j < cand.m; ++j)
            axpy(cand.slices[j], std::sin(M_PI * cand.time(j)), bump);

        const double len = path_length(cand);
        out.shortest_candidate = std::min(out.shortest_candidate, len);
        if (rep.length > len + tol) out.pass = false;
        ++out.candidates;
    }
    return out;
}

FirstVariationCheck distance_first_variation(const KahlerPotential& phi0,
                                             const ScalarField& base,
                                             const ScalarField& dir, double s,
                                             double ds, const SolverConfig& cfg) {
    auto endpoint = [&](double sv) {
        ScalarField f = base;
        axpy(f, sv, dir);
        return KahlerPotential::certify(f);
    };

    const double l_minus = distance(phi0, endpoint(s - ds), cfg).length;
    const double l_plus = distance(phi0, endpoint(s + ds), cfg).length;

    PathGrid path;
    SolveReport solve;
    const KahlerPotential phi1 = endpoint(s);
    distance(phi0, phi1, cfg, &path, &solve);
    const std::vector<ScalarField> dphi = time_derivative(path.slices, path.m);
    const ScalarField& terminal = dphi[path.m];

    FirstVariationCheck out;
    out.finite_difference = (l_plus - l_minus) / (2.0 * ds);
    out.formula = mabuchi_inner(terminal, dir, phi1) /
                  std::sqrt(mabuchi_inner(terminal, terminal, phi1));
    out.rel_error = std::abs(out.finite_difference - out.formula) /
                    std::max(1e-300, std::abs(out.formula));
    return out;
}

} // namespace kgeo
