#pragma once

#include <vector>

#include "kgeo/fields.hpp"
#include "kgeo/geometry.hpp"
#include "kgeo/solver.hpp"

namespace kgeo {

struct DistanceReport {
    double length = 0.0;
    double energy_drift = 0.0; // max_j |E_j - mean E|
    double effective_eps = 0.0;
    double lower_bound_rhs = 0.0; // sign-split bound on the normalized data
    std::vector<double> slice_energies;
    SolverConfig config;
};

std::string serialize(const DistanceReport& report);

/// Geodesic distance: solve at eps_target, return the length together with
/// the energy-drift error bar.  Optionally hands back the solved path.
DistanceReport distance(const KahlerPotential& phi0, const KahlerPotential& phi1,
                        const SolverConfig& cfg, PathGrid* path_out = nullptr,
                        SolveReport* solve_out = nullptr);

struct DriftCheck {
    double drift_times_m = 0.0; // max_j |E_{j+1} - E_j| * M
    double bound = 0.0;         // 2 eps_eff max|D_t phi| (1 + slack_tol)
    bool pass = false;
};

/// Discrete transcription of the energy-element drift bound along an
/// eps-approximate geodesic (total volume = 1).
DriftCheck energy_drift_check(const PathGrid& path, const SolveReport& report,
                              double slack_tol = 0.1);

struct LowerBoundCheck {
    double length = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// max( int_{phi>0} phi dmu_phi, -int_{phi<0} phi dmu_0 ) for a potential
/// (normalized by the caller when the bound is used).
double prop2_rhs(const KahlerPotential& phi);

/// Length lower bound d(0, phi) >= rhs - 10 eps_eff for normalized phi, with
/// rhs = max( int_{phi>0} phi dmu_phi, -int_{phi<0} phi dmu_0 ).
/// The input is normalized internally before the bound is evaluated.
LowerBoundCheck lower_bound_check(const KahlerPotential& phi, const SolverConfig& cfg);

struct TriangleCheck {
    double d_ab = 0.0, d_bc = 0.0, d_ac = 0.0;
    double slack = 0.0; // d(a,b) + d(b,c) - d(a,c)
    double tol = 0.0;   // 10 (eps_eff + h^2)
    bool pass = false;
};

TriangleCheck triangle_check(const KahlerPotential& a, const KahlerPotential& b,
                             const KahlerPotential& c, const SolverConfig& cfg);

struct MinimalityCheck {
    double geodesic_length = 0.0;
    double shortest_candidate = 0.0;
    int candidates = 0;
    bool pass = false;
};

/// Compares the geodesic length against `count` random admissible paths
/// between the endpoints (linear interpolation plus boundary-vanishing
/// low-frequency perturbations).
MinimalityCheck minimality_check(const KahlerPotential& phi0, const KahlerPotential& phi1,
                                 int count, const SolverConfig& cfg, std::uint64_t seed);

struct FirstVariationCheck {
    double finite_difference = 0.0;
    double formula = 0.0; // terminal-velocity formula at s
    double rel_error = 0.0;
};

/// d/ds of s -> distance(phi0, base + s*dir) at s, comparing a central
/// difference of the solved distance against the first-variation formula
/// evaluated from the terminal velocity of the path solved at s.
FirstVariationCheck distance_first_variation(const KahlerPotential& phi0,
                                             const ScalarField& base,
                                             const ScalarField& dir, double s,
                                             double ds, const SolverConfig& cfg);

} // namespace kgeo
