#include "kgeo/geometry.hpp"

#include <cmath>

#include "kgeo/solver.hpp"

namespace kgeo {

ScalarField grad_pair(const ScalarField& a, const ScalarField& b,
                      const KahlerPotential& phi) {
    require_same_grid(a.grid(), phi.grid(), "grad_pair");
    require_same_grid(b.grid(), phi.grid(), "grad_pair");
    const ScalarField ax = d_x(a), ay = d_y(a), bx = d_x(b), by = d_y(b);
    ScalarField out(a.grid());
    double* po = out.data();
    const double* r = phi.rho().data();
    for (std::size_t i = 0; i < out.size(); ++i)
        po[i] = (ax.data()[i] * bx.data()[i] + ay.data()[i] * by.data()[i]) / (2.0 * r[i]);
    return out;
}

ScalarField christoffel(const ScalarField& psi1, const ScalarField& psi2,
                        const KahlerPotential& phi) {
    ScalarField g = grad_pair(psi1, psi2, phi);
    g *= -0.5;
    return g;
}

std::vector<double> slice_energies(const PathGrid& path) {
    path.validate();
    const std::vector<ScalarField> dphi = time_derivative(path.slices, path.m);
    std::vector<double> e(path.m + 1);
    for (int j = 0; j <= path.m; ++j) {
        const KahlerPotential kp = KahlerPotential::certify(path.slices[j]);
        e[j] = mabuchi_inner(dphi[j], dphi[j], kp);
    }
    return e;
}

double path_energy(const PathGrid& path) {
    return trapezoid(slice_energies(path), path.m);
}

double path_length(const PathGrid& path) {
    std::vector<double> e = slice_energies(path);
    for (double& v : e) v = std::sqrt(v);
    return trapezoid(e, path.m);
}

TangentAlongPath covariant_derivative(const PathGrid& path, const TangentAlongPath& psi) {
    path.validate();
    psi.require_matches(path, "covariant_derivative");
    const std::vector<ScalarField> dphi = time_derivative(path.slices, path.m);
    const std::vector<ScalarField> dpsi = time_derivative(psi.slices, path.m);
    TangentAlongPath out = TangentAlongPath::zero(path);
    for (int j = 0; j <= path.m; ++j) {
        const KahlerPotential kp = KahlerPotential::certify(path.slices[j]);
        ScalarField v = dpsi[j];
        v += christoffel(psi.slices[j], dphi[j], kp);
        out.slices[j] = std::move(v);
    }
    return out;
}

ScalarField poisson_bracket(const ScalarField& f, const ScalarField& g,
                            const KahlerPotential& phi) {
    require_same_grid(f.grid(), phi.grid(), "poisson_bracket");
    require_same_grid(g.grid(), phi.grid(), "poisson_bracket");
    const ScalarField fx = d_x(f), fy = d_y(f), gx = d_x(g), gy = d_y(g);
    ScalarField out(f.grid());
    double* po = out.data();
    const double* r = phi.rho().data();
    for (std::size_t i = 0; i < out.size(); ++i)
        po[i] = (fx.data()[i] * gy.data()[i] - fy.data()[i] * gx.data()[i]) / r[i];
    return out;
}

ScalarField curvature(const ScalarField& d1, const ScalarField& d2,
                      const ScalarField& d3, const KahlerPotential& phi) {
    ScalarField b = poisson_bracket(poisson_bracket(d1, d2, phi), d3, phi);
    b *= -0.25;
    return b;
}

double sectional_curvature(const ScalarField& d1, const ScalarField& d2,
                           const KahlerPotential& phi) {
    const ScalarField b = poisson_bracket(d1, d2, phi);
    return -0.25 * mabuchi_inner(b, b, phi);
}

double functional_I(const ScalarField& phi) {
    const ScalarField lap = dzzbar(phi);
    std::vector<double> prod(phi.size());
    const double* p = phi.data();
    const double* q = lap.data();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = p[i] * q[i];
    const double h2 = phi.h() * phi.h();
    return integrate(phi) + 0.5 * h2 * pairwise_sum(prod);
}

ScalarField normalize(const ScalarField& phi) {
    ScalarField out = phi;
    out += -functional_I(phi);
    return out;
}

double first_variation_I_rho(const PathGrid& path, const TangentAlongPath& dPhi) {
    path.validate();
    dPhi.require_matches(path, "first_variation_I_rho");
    if (dPhi.slices[0].max_abs() != 0.0 || dPhi.slices[path.m].max_abs() != 0.0)
        throw admissibility_error("first_variation_I_rho: variation must vanish on boundary slices");
    const std::vector<ScalarField> q = ma_density(path);
    double acc = 0.0;
    for (int j = 1; j < path.m; ++j) {
        std::vector<double> prod(q[j - 1].size());
        const double* a = dPhi.slices[j].data();
        const double* b = q[j - 1].data();
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
        acc += pairwise_sum(prod);
    }
    const double h2 = path.grid.h * path.grid.h;
    return 0.5 * acc * h2 * path.dt(); // 1/(n+1)! with n = 1
}

} // namespace kgeo
