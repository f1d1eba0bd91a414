#pragma once

#include "kgeo/path.hpp"
#include "kgeo/solver.hpp"

namespace kgeo {

/// Independent verification solver for y-independent boundary data.  The
/// complex equation collapses to the real equation
///     (1 + u_xx/4) u_tt - u_tx^2 / 4 = tau * s1
/// on the (t,x) cylinder, which is solved by dense Newton with a direct
/// LU factorization, then broadcast back to the 3-D path layout.  Shares
/// no code with solve_geodesic beyond the grid types and stencil
/// definitions.
PathGrid reduced_oracle(const ScalarField& phi0, const ScalarField& phi1,
                        const SolverConfig& cfg);

} // namespace kgeo
