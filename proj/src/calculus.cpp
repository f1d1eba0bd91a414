#include "kgeo/calculus.hpp"

#include <cmath>
#include <vector>

namespace kgeo {

namespace {

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_dn(int i, int n) { return i == 0 ? n - 1 : i - 1; }

} // namespace

ScalarField d_x(const ScalarField& f) {
    const int n = f.n();
    const double inv2h = 0.5 / f.h();
    ScalarField g(f.grid());
    for (int k = 0; k < n; ++k) {
        const int kp = wrap_up(k, n), km = wrap_dn(k, n);
        for (int l = 0; l < n; ++l)
            g.at(k, l) = (f.at(kp, l) - f.at(km, l)) * inv2h;
    }
    return g;
}

ScalarField d_y(const ScalarField& f) {
    const int n = f.n();
    const double inv2h = 0.5 / f.h();
    ScalarField g(f.grid());
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
            g.at(k, l) = (f.at(k, lp) - f.at(k, lm)) * inv2h;
        }
    return g;
}

ScalarField d_xx(const ScalarField& f) {
    const int n = f.n();
    const double invh2 = 1.0 / (f.h() * f.h());
    ScalarField g(f.grid());
    for (int k = 0; k < n; ++k) {
        const int kp = wrap_up(k, n), km = wrap_dn(k, n);
        for (int l = 0; l < n; ++l)
            g.at(k, l) = (f.at(kp, l) - 2.0 * f.at(k, l) + f.at(km, l)) * invh2;
    }
    return g;
}

ScalarField d_yy(const ScalarField& f) {
    const int n = f.n();
    const double invh2 = 1.0 / (f.h() * f.h());
    ScalarField g(f.grid());
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
            g.at(k, l) = (f.at(k, lp) - 2.0 * f.at(k, l) + f.at(k, lm)) * invh2;
        }
    return g;
}

ScalarField d_xy(const ScalarField& f) { return d_x(d_y(f)); }

ScalarField dzzbar(const ScalarField& f) {
    const int n = f.n();
    const double q = 0.25 / (f.h() * f.h());
    ScalarField g(f.grid());
    for (int k = 0; k < n; ++k) {
        const int kp = wrap_up(k, n), km = wrap_dn(k, n);
        for (int l = 0; l < n; ++l) {
            const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
            g.at(k, l) = (f.at(kp, l) + f.at(km, l) + f.at(k, lp) + f.at(k, lm) -
                          4.0 * f.at(k, l)) * q;
        }
    }
    return g;
}

ComplexField dz(const ScalarField& f) {
    ComplexField out;
    out.re = d_x(f);
    out.re *= 0.5;
    out.im = d_y(f);
    out.im *= -0.5;
    return out;
}

ScalarField density(const ScalarField& phi) {
    ScalarField rho = dzzbar(phi);
    rho += 1.0;
    return rho;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f, const ScalarField& mu) {
    require_same_grid(f.grid(), mu.grid(), "integrate");
    const double* pm = mu.data();
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (pm[i] < 0.0)
            throw admissibility_error("integrate: measure has a negative entry");
    std::vector<double> prod(f.size());
    const double* pf = f.data();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = pf[i] * pm[i];
    return f.h() * f.h() * pairwise_sum(prod);
}

double integrate(const ScalarField& f) {
    return f.h() * f.h() * pairwise_sum({f.data(), f.size()});
}

double mabuchi_inner(const ScalarField& psi1, const ScalarField& psi2,
                     const KahlerPotential& phi) {
    require_same_grid(psi1.grid(), phi.grid(), "mabuchi_inner");
    require_same_grid(psi2.grid(), phi.grid(), "mabuchi_inner");
    std::vector<double> prod(psi1.size());
    const double* a = psi1.data();
    const double* b = psi2.data();
    const double* r = phi.rho().data();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i] * r[i];
    return psi1.h() * psi1.h() * pairwise_sum(prod);
}

} // namespace kgeo
