#pragma once

#include <vector>

#include "kgeo/calculus.hpp"
#include "kgeo/path.hpp"

namespace kgeo {

/// Gradient pairing of the Levi-Civita connection at phi:
/// (grad a, grad b)_phi = (d_x a * d_x b + d_y a * d_y b) / (2 rho_phi).
/// Normalized so that (i) D_t phi' = 0 reproduces the bordered-determinant
/// geodesic equation phi_tt = |dz phi'|^2 / rho and (ii) metric
/// compatibility holds discretely at second order.
ScalarField grad_pair(const ScalarField& a, const ScalarField& b,
                      const KahlerPotential& phi);

/// Christoffel symbol Gamma(psi1, psi2) = -1/2 (grad psi1, grad psi2)_phi.
/// Symmetric in its arguments by construction (bitwise).
ScalarField christoffel(const ScalarField& psi1, const ScalarField& psi2,
                        const KahlerPotential& phi);

/// Slicewise kinetic energies E_j = <D_t phi, D_t phi>_{phi_j}.
/// Every slice must be admissible.
std::vector<double> slice_energies(const PathGrid& path);

double path_energy(const PathGrid& path); // trapezoid of E_j
double path_length(const PathGrid& path); // trapezoid of sqrt(E_j)

/// Covariant derivative of a tangent field along a path:
/// D_t psi = d psi/dt + Gamma(psi, D_t phi).
TangentAlongPath covariant_derivative(const PathGrid& path, const TangentAlongPath& psi);

/// Poisson bracket of the symplectic form omega_phi:
/// {f,g}_phi = (d_x f * d_y g - d_y f * d_x g) / rho_phi.
ScalarField poisson_bracket(const ScalarField& f, const ScalarField& g,
                            const KahlerPotential& phi);

/// Curvature tensor R(d1,d2)d3 = -1/4 {{d1,d2}_phi, d3}_phi.
ScalarField curvature(const ScalarField& d1, const ScalarField& d2,
                      const ScalarField& d3, const KahlerPotential& phi);

/// Sectional curvature -1/4 ||{d1,d2}_phi||^2_phi; always <= 0.
double sectional_curvature(const ScalarField& d1, const ScalarField& d2,
                           const KahlerPotential& phi);

/// Potential of the 1-form alpha_phi(psi) = integrate(psi, rho_phi):
/// I(phi) = integrate(phi, 1) + 1/2 integrate(phi * dzzbar(phi), 1).
double functional_I(const ScalarField& phi);

/// Shift phi by the exact constant making I vanish.  The quadratic term of
/// I is shift-invariant and Sum dzzbar(phi) = 0 exactly, so
/// I(phi - c) = I(phi) - c and the shift is c = I(phi).
ScalarField normalize(const ScalarField& phi);

/// First variation of I_rho at a path in the direction dPhi:
/// 1/(n+1)! times the interior-slice quadrature of dPhi * q(Phi).
/// dPhi must vanish on the boundary slices.
double first_variation_I_rho(const PathGrid& path, const TangentAlongPath& dPhi);

} // namespace kgeo
