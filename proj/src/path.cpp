#include "kgeo/path.hpp"

#include <string>

#include "kgeo/calculus.hpp"

namespace kgeo {

PathGrid PathGrid::make(GridSpec grid, int m) {
    if (m < 2) throw format_error("path needs M >= 2 time intervals, got M=" + std::to_string(m));
    PathGrid p;
    p.grid = grid;
    p.m = m;
    p.slices.assign(m + 1, ScalarField(grid));
    return p;
}

PathGrid PathGrid::linear(const ScalarField& phi0, const ScalarField& phi1, int m) {
    require_same_grid(phi0.grid(), phi1.grid(), "PathGrid::linear");
    PathGrid p = make(phi0.grid(), m);
    for (int j = 0; j <= m; ++j) {
        const double t = p.time(j);
        ScalarField s = phi0;
        s *= (1.0 - t);
        axpy(s, t, phi1);
        p.slices[j] = std::move(s);
    }
    return p;
}

void PathGrid::validate() const {
    if (m < 2 || static_cast<int>(slices.size()) != m + 1)
        throw format_error("path has inconsistent slice count");
    for (const ScalarField& s : slices) {
        require_same_grid(s.grid(), grid, "PathGrid::validate");
        if (!s.all_finite()) throw admissibility_error("path slice has non-finite values");
    }
}

TangentAlongPath TangentAlongPath::zero(const PathGrid& path) {
    TangentAlongPath t;
    t.grid = path.grid;
    t.m = path.m;
    t.slices.assign(path.m + 1, ScalarField(path.grid));
    return t;
}

void TangentAlongPath::require_matches(const PathGrid& path, const char* where) const {
    require_same_grid(grid, path.grid, where);
    if (m != path.m || static_cast<int>(slices.size()) != m + 1)
        throw format_error(std::string(where) + ": tangent does not match path layout");
}

std::vector<ScalarField> time_derivative(const std::vector<ScalarField>& slices, int m) {
    const double invdt = static_cast<double>(m);
    std::vector<ScalarField> d(slices.size(), ScalarField(slices[0].grid()));
    // one-sided second order at the ends
    {
        ScalarField s = slices[0];
        s *= -1.5;
        axpy(s, 2.0, slices[1]);
        axpy(s, -0.5, slices[2]);
        s *= invdt;
        d[0] = std::move(s);
    }
    for (int j = 1; j < m; ++j) {
        ScalarField s = slices[j + 1];
        s -= slices[j - 1];
        s *= 0.5 * invdt;
        d[j] = std::move(s);
    }
    {
        ScalarField s = slices[m];
        s *= 1.5;
        axpy(s, -2.0, slices[m - 1]);
        axpy(s, 0.5, slices[m - 2]);
        s *= invdt;
        d[m] = std::move(s);
    }
    return d;
}

double trapezoid(const std::vector<double>& values, int m) {
    // symmetric pairing keeps the quadrature bitwise reversal-invariant
    std::vector<double> sym;
    sym.reserve(m > 1 ? m - 1 : 0);
    for (int j = 1; j < m; ++j) sym.push_back(values[j] + values[m - j]);
    return (0.5 * (values[0] + values[m]) + 0.5 * pairwise_sum(sym)) / m;
}

} // namespace kgeo
