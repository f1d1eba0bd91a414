#include "kgeo/energy.hpp"

#include <cmath>
#include <limits>

#include "kgeo/fields.hpp"
#include "kgeo/geometry.hpp"

namespace kgeo {

namespace {

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp); // already halved for [0,1]
    }
}

// Energy 1-form at u in direction w:  -int (R_u - Rbar_u) w dmu_u.
double energy_form(const KahlerPotential& u, const ScalarField& w) {
    const CurvatureData cd = scalar_curvature(u);
    ScalarField centered = cd.R;
    centered += -cd.Rbar;
    std::vector<double> prod(w.size());
    const double* r = centered.data();
    const double* pw = w.data();
    const double* rho = u.rho().data();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = -r[i] * pw[i] * rho[i];
    return w.h() * w.h() * pairwise_sum(prod);
}

} // namespace

CurvatureData scalar_curvature(const KahlerPotential& phi) {
    ScalarField logrho(phi.grid());
    const double* r = phi.rho().data();
    for (std::size_t i = 0; i < logrho.size(); ++i) logrho.data()[i] = std::log(r[i]);
    ScalarField R = dzzbar(logrho);
    for (std::size_t i = 0; i < R.size(); ++i) R.data()[i] = -R.data()[i] / r[i];
    CurvatureData out{std::move(R), 0.0};
    out.Rbar = integrate(out.R, phi.rho());
    return out;
}

double mabuchi_energy_segment(const ScalarField& from, const ScalarField& to, int steps) {
    require_same_grid(from.grid(), to.grid(), "mabuchi_energy_segment");
    std::vector<double> nodes, weights;
    gauss_legendre(steps, nodes, weights);
    ScalarField dir = to;
    dir -= from;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        ScalarField u = from;
        axpy(u, nodes[i], dir);
        acc += weights[i] * energy_form(KahlerPotential::certify(u), dir);
    }
    return acc;
}

MabuchiValue mabuchi_energy(const KahlerPotential& phi, int steps) {
    MabuchiValue out;
    out.value = mabuchi_energy_segment(ScalarField(phi.grid()), phi.phi(), steps);
    out.path_used = "straight segment from 0";
    out.quadrature_steps = steps;
    return out;
}

ComplexField lichnerowicz(const KahlerPotential& phi, const ScalarField& psi) {
    require_same_grid(phi.grid(), psi.grid(), "lichnerowicz");
    // d_z d_z psi = (d_xx - d_yy)/4 - i d_xy / 2
    ScalarField re = d_xx(psi);
    re -= d_yy(psi);
    re *= 0.25;
    ScalarField im = d_xy(psi);
    im *= -0.5;

    // Gamma = d_z log rho; subtract Gamma * d_z psi (complex product)
    ScalarField logrho(phi.grid());
    for (std::size_t i = 0; i < logrho.size(); ++i)
        logrho.data()[i] = std::log(phi.rho().data()[i]);
    const ComplexField gamma = dz(logrho);
    const ComplexField dpsi = dz(psi);
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double gr = gamma.re.data()[i], gi = gamma.im.data()[i];
        const double pr = dpsi.re.data()[i], pi = dpsi.im.data()[i];
        re.data()[i] -= gr * pr - gi * pi;
        im.data()[i] -= gr * pi + gi * pr;
    }
    return ComplexField{std::move(re), std::move(im)};
}

double lichnerowicz_norm2(const KahlerPotential& phi, const ScalarField& psi) {
    const ComplexField d = lichnerowicz(phi, psi);
    std::vector<double> prod(psi.size());
    const double* r = phi.rho().data();
    for (std::size_t i = 0; i < prod.size(); ++i) {
        const double a = d.re.data()[i], b = d.im.data()[i];
        prod[i] = (a * a + b * b) / r[i];
    }
    return psi.h() * psi.h() * pairwise_sum(prod);
}

ConvexityReport energy_convexity_check(const PathGrid& path, int quadrature_steps) {
    path.validate();
    const int m = path.m;
    std::vector<double> e(m + 1);
    for (int j = 0; j <= m; ++j)
        e[j] = mabuchi_energy(KahlerPotential::certify(path.slices[j]), quadrature_steps).value;

    const std::vector<ScalarField> dphi = time_derivative(path.slices, m);
    const std::vector<ScalarField> q = ma_density(path);

    ConvexityReport out;
    out.min_second_difference = std::numeric_limits<double>::infinity();
    double num = 0.0, den = 0.0;
    const double m2 = static_cast<double>(m) * m;
    for (int j = 1; j < m; ++j) {
        const KahlerPotential kp = KahlerPotential::certify(path.slices[j]);
        ConvexitySlice row;
        row.t = path.time(j);
        row.second_difference = m2 * (e[j + 1] - 2.0 * e[j] + e[j - 1]);
        const CurvatureData cd = scalar_curvature(kp);
        std::vector<double> prod(q[j - 1].size());
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod[i] = q[j - 1].data()[i] * cd.R.data()[i];
        const double h2 = path.grid.h * path.grid.h;
        row.identity_rhs = lichnerowicz_norm2(kp, dphi[j]) - h2 * pairwise_sum(prod);
        out.min_second_difference = std::min(out.min_second_difference, row.second_difference);
        num += row.second_difference * row.identity_rhs;
        den += row.identity_rhs * row.identity_rhs;
        out.slices.push_back(row);
    }
    out.kappa_fit = den > 0.0 ? num / den : 0.0;
    return out;
}

GlobalMinCheck global_min_check(GridSpec grid, int samples, std::uint64_t seed,
                                double tol, int steps) {
    Rng rng(seed);
    GlobalMinCheck out;
    out.min_energy = std::numeric_limits<double>::infinity();
    out.pass = true;
    for (int i = 0; i < samples; ++i) {
        const double floor = rng.uniform(0.05, 0.7);
        const ScalarField f = random_potential(grid, rng, 3, floor);
        const double e = mabuchi_energy(KahlerPotential::certify(f), steps).value;
        out.min_energy = std::min(out.min_energy, e);
        if (e < -tol) out.pass = false;
        ++out.samples;
    }
    return out;
}

} // namespace kgeo
