#pragma once

#include <array>
#include <vector>

#include "kgeo/grid.hpp"

namespace kgeo {

/// Discrete path in the space of potentials: M+1 slices at t_j = j/M.
/// Slice 0 and slice M carry the boundary data.
struct PathGrid {
    GridSpec grid;
    int m = 0; // number of time intervals, M >= 2
    std::vector<ScalarField> slices;
    std::array<bool, 2> boundary_fixed{true, true};

    static PathGrid make(GridSpec grid, int m);

    /// Linear interpolation (1-t)*phi0 + t*phi1.
    static PathGrid linear(const ScalarField& phi0, const ScalarField& phi1, int m);

    double dt() const { return 1.0 / m; }
    double time(int j) const { return static_cast<double>(j) / m; }
    void validate() const;
};

/// Field of tangent vectors psi(t_j) along a path (same grid and M).
struct TangentAlongPath {
    GridSpec grid;
    int m = 0;
    std::vector<ScalarField> slices;

    static TangentAlongPath zero(const PathGrid& path);
    void require_matches(const PathGrid& path, const char* where) const;
};

/// D_t at every slice: centered differences inside, one-sided second-order
/// closures at j = 0 and j = M.  Exact for slice data quadratic in t.
std::vector<ScalarField> time_derivative(const std::vector<ScalarField>& slices, int m);

/// Trapezoid rule over t_j = j/M for per-slice values.
double trapezoid(const std::vector<double>& values, int m);

} // namespace kgeo
