#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kgeo/calculus.hpp"
#include "kgeo/path.hpp"

namespace kgeo {

/// Right-hand side of a continuity stage: q(path) is driven to tau * slack,
/// with slack the Monge-Ampere density of the convexified initial path.
struct MaTarget {
    std::vector<ScalarField> slack; // interior slices j = 1..M-1
    double tau = 1.0;

    double max_slack() const;
    double min_slack() const;
};

struct SolverConfig {
    int m = 8;                   // time intervals
    double eps_target = 1e-4;    // final continuity parameter
    double tau_factor = 0.25;    // geometric schedule ratio in (0,1)
    double newton_tol = 1e-9;    // max-norm residual threshold
    int max_newton = 40;         // Newton iteration cap per stage
    double damping_min = 1.0 / 4096.0; // smallest admissible step fraction
    double lin_tol = 1e-9;       // relative tolerance of the inner linear solve
    int max_lin_iters = 20000;
    double m_margin = 0.05;      // delta_0: slack floor for the initial path
    double m_start = 0.0625;     // starting value of the doubling search for m

    void validate() const; // throws solver_error on out-of-range values
};

struct StageInfo {
    double tau = 0.0;
    int newton_iters = 0;
    double final_residual = 0.0;
    double min_rho = 0.0;
    double min_q = 0.0;
    std::vector<double> residual_history; // per accepted step; not serialized
};

struct SolveReport {
    std::vector<StageInfo> stages;
    double effective_eps = 0.0; // eps_target * max(slack)
    double wall_time_sec = 0.0; // informational only; never serialized
};

/// key = value serialization (stage lines first, then effective_eps).
/// Deterministic: identical runs produce identical bytes.
std::string serialize(const SolveReport& report);

/// Monge-Ampere density q_j = rho_j * D_tt(Phi)_j - |D_t dz(Phi)_j|^2 at the
/// interior slices j = 1..M-1 (returned vector index j-1).  q identically 0
/// characterizes a discrete geodesic; all slices must be admissible.
std::vector<ScalarField> ma_density(const PathGrid& path);

/// Convexified initial path Phi0(t) = (1-t) phi0 + t phi1 - m t(1-t), with m
/// found by doubling so that min q(Phi0) >= m_margin, together with the
/// target MaTarget{slack = q(Phi0), tau = 1}.  The interpolation density is
/// automatically positive; it must also clear m_margin, which no m can fix,
/// so that case is reported as inconsistent input.
std::pair<PathGrid, MaTarget> initial_path(const KahlerPotential& phi0,
                                           const KahlerPotential& phi1,
                                           const SolverConfig& cfg);

/// q(path) - tau * slack at interior slices.
std::vector<ScalarField> residual(const PathGrid& path, const MaTarget& target);

double max_abs_residual(const std::vector<ScalarField>& fields);

/// Directional derivative of q:
///   dq = dzzbar(dPhi) * D_tt(Phi) + rho * D_tt(dPhi)
///        - 2 Re( conj(D_t dz Phi) * D_t dz dPhi ).
/// Boundary slices of dPhi participate through the t-stencils; pass a
/// boundary-vanishing tangent for admissible variations.
std::vector<ScalarField> jacobian_apply(const PathGrid& path, const TangentAlongPath& dPhi);

/// One damped-Newton stage: drives max|q - tau*slack| below newton_tol,
/// preserving min rho > 0 and min q > 0 through a halving line search.
/// Throws solver_error on damping underflow or iteration cap.
StageInfo newton_solve(PathGrid& path, const MaTarget& target, const SolverConfig& cfg);

/// Continuity method: tau descends geometrically from 1 to eps_target,
/// warm-starting each stage and bisecting the tau step on stage failure.
std::pair<PathGrid, SolveReport> solve_geodesic(const KahlerPotential& phi0,
                                                const KahlerPotential& phi1,
                                                const SolverConfig& cfg);

/// max over all nodes of |A - B| minus max over the boundary slices of
/// |A - B|; at most a small tolerance for two converged solutions.
double comparison_gap(const PathGrid& a, const PathGrid& b);

/// Smallest interior value of D_tt(Phi); >= -tol on converged paths.
double min_t_convexity(const PathGrid& path);

/// Largest eigenvalue of the bordered complex Hessian
/// [[rho, G/2], [conj(G)/2, D_tt(Phi)/4]] over all interior nodes.
double max_bordered_eigenvalue(const PathGrid& path);

} // namespace kgeo
