#pragma once

#include <span>

#include "kgeo/grid.hpp"

namespace kgeo {

// Second-order centered periodic differences on the unit torus.
// d_x acts along the k index (x = k*h), d_y along l (y = l*h).
ScalarField d_x(const ScalarField& f);
ScalarField d_y(const ScalarField& f);
ScalarField d_xx(const ScalarField& f);
ScalarField d_yy(const ScalarField& f);
ScalarField d_xy(const ScalarField& f); // composition d_x(d_y(f))

/// Discrete d^2 f / dz dzbar = (d_xx + d_yy)/4 for z = x + i y.
ScalarField dzzbar(const ScalarField& f);

/// Discrete df/dz = (d_x f - i d_y f)/2.
ComplexField dz(const ScalarField& f);

/// Metric density rho_phi = 1 + dzzbar(phi); positive iff phi is admissible.
ScalarField density(const ScalarField& phi);

/// Deterministic pairwise-tree sum, independent of any threading.
double pairwise_sum(std::span<const double> v);

/// h^2 * sum f*mu; mu must be nonnegative (throws admissibility_error).
double integrate(const ScalarField& f, const ScalarField& mu);

/// h^2 * sum f, i.e. integration against the flat unit measure.
double integrate(const ScalarField& f);

/// L2 pairing of tangent vectors at phi: integrate(psi1*psi2, rho_phi).
double mabuchi_inner(const ScalarField& psi1, const ScalarField& psi2,
                     const KahlerPotential& phi);

} // namespace kgeo
