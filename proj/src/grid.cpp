#include "kgeo/grid.hpp"

#include <algorithm>
#include <cmath>

#include "kgeo/calculus.hpp"

namespace kgeo {

GridSpec GridSpec::make(int n) {
    if (n < 8)
        throw format_error("grid size must satisfy N >= 8, got N=" + std::to_string(n));
    return GridSpec{n, 1.0 / n};
}

double ScalarField::min() const {
    double m = values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}

double ScalarField::max() const {
    double m = values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField::operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "ScalarField::operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

void axpy(ScalarField& a, double s, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "axpy");
    double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) pa[i] += s * pb[i];
}

KahlerPotential KahlerPotential::certify(ScalarField phi) {
    if (!phi.all_finite())
        throw admissibility_error("potential has non-finite values");
    ScalarField rho = density(phi);
    const int n = phi.n();
    double min_rho = rho.at(0, 0);
    int wk = 0, wl = 0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (rho.at(k, l) < min_rho) {
                min_rho = rho.at(k, l);
                wk = k;
                wl = l;
            }
    if (!(min_rho > 0.0))
        throw admissibility_error(
            "potential is not admissible: rho = " + std::to_string(min_rho) +
            " <= 0 at node (" + std::to_string(wk) + "," + std::to_string(wl) + ")");
    return KahlerPotential(std::move(phi), std::move(rho), min_rho);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b))
        throw format_error(std::string(where) + ": grid mismatch (N=" +
                           std::to_string(a.n) + " vs N=" + std::to_string(b.n) + ")");
}

} // namespace kgeo
