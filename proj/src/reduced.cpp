#include "kgeo/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace kgeo {

namespace {

// Column-major (t,x) sheet: u[j*n + k], j = 0..m, k periodic in x.
struct Sheet {
    int n = 0, m = 0;
    double h = 0.0;
    std::vector<double> u; // (m+1)*n

    double& at(int j, int k) { return u[static_cast<std::size_t>(j) * n + k]; }
    double at(int j, int k) const { return u[static_cast<std::size_t>(j) * n + k]; }
};

inline int xup(int k, int n) { return k + 1 == n ? 0 : k + 1; }
inline int xdn(int k, int n) { return k == 0 ? n - 1 : k - 1; }

struct SheetCoeffs {
    std::vector<double> rho, a, g, q; // interior rows j=1..m-1, each n wide
    double min_rho = 0.0, min_q = 0.0;
};

SheetCoeffs sheet_coeffs(const Sheet& s) {
    const int n = s.n, m = s.m;
    const double invh2 = 1.0 / (s.h * s.h);
    const double inv2h = 0.5 / s.h;
    const double m2 = static_cast<double>(m) * m;
    SheetCoeffs c;
    c.rho.resize(static_cast<std::size_t>(m - 1) * n);
    c.a.resize(c.rho.size());
    c.g.resize(c.rho.size());
    c.q.resize(c.rho.size());
    c.min_rho = std::numeric_limits<double>::infinity();
    c.min_q = std::numeric_limits<double>::infinity();
    for (int j = 1; j < m; ++j)
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(j - 1) * n + k;
            const double uxx = (s.at(j, xup(k, n)) - 2.0 * s.at(j, k) + s.at(j, xdn(k, n))) * invh2;
            const double rho = 1.0 + 0.25 * uxx;
            const double a = m2 * (s.at(j + 1, k) - 2.0 * s.at(j, k) + s.at(j - 1, k));
            const double dxp = (s.at(j + 1, xup(k, n)) - s.at(j + 1, xdn(k, n))) * inv2h;
            const double dxm = (s.at(j - 1, xup(k, n)) - s.at(j - 1, xdn(k, n))) * inv2h;
            const double g = 0.5 * m * (dxp - dxm); // D_t D_x u
            c.rho[i] = rho;
            c.a[i] = a;
            c.g[i] = g;
            c.q[i] = rho * a - 0.25 * g * g;
            c.min_rho = std::min(c.min_rho, rho);
            c.min_q = std::min(c.min_q, c.q[i]);
        }
    // boundary rows only constrain rho
    const double q4 = 0.25 * invh2;
    for (int j : {0, m})
        for (int k = 0; k < n; ++k) {
            const double rho = 1.0 + q4 * (s.at(j, xup(k, n)) - 2.0 * s.at(j, k) +
                                           s.at(j, xdn(k, n)));
            c.min_rho = std::min(c.min_rho, rho);
        }
    return c;
}

double max_residual(const SheetCoeffs& c, const std::vector<double>& slack, double tau) {
    double rn = 0.0;
    for (std::size_t i = 0; i < c.q.size(); ++i)
        rn = std::max(rn, std::abs(c.q[i] - tau * slack[i]));
    return rn;
}

// Dense LU with partial pivoting; solves in place, b becomes x.
void lu_solve(std::vector<double>& A, std::vector<double>& b, int nrows) {
    std::vector<int> piv(nrows);
    for (int col = 0; col < nrows; ++col) {
        int best = col;
        double bv = std::abs(A[static_cast<std::size_t>(col) * nrows + col]);
        for (int r = col + 1; r < nrows; ++r) {
            const double v = std::abs(A[static_cast<std::size_t>(r) * nrows + col]);
            if (v > bv) { bv = v; best = r; }
        }
        if (bv == 0.0) throw solver_error("reduced_oracle: singular Newton matrix");
        piv[col] = best;
        if (best != col)
            for (int cc = 0; cc < nrows; ++cc)
                std::swap(A[static_cast<std::size_t>(col) * nrows + cc],
                          A[static_cast<std::size_t>(best) * nrows + cc]);
        const double d = A[static_cast<std::size_t>(col) * nrows + col];
        for (int r = col + 1; r < nrows; ++r) {
            double& f = A[static_cast<std::size_t>(r) * nrows + col];
            f /= d;
            if (f != 0.0)
                for (int cc = col + 1; cc < nrows; ++cc)
                    A[static_cast<std::size_t>(r) * nrows + cc] -=
                        f * A[static_cast<std::size_t>(col) * nrows + cc];
        }
    }
    for (int col = 0; col < nrows; ++col)
        if (piv[col] != col) std::swap(b[col], b[piv[col]]);
    for (int r = 1; r < nrows; ++r) {
        double s = b[r];
        for (int cc = 0; cc < r; ++cc) s -= A[static_cast<std::size_t>(r) * nrows + cc] * b[cc];
        b[r] = s;
    }
    for (int r = nrows - 1; r >= 0; --r) {
        double s = b[r];
        for (int cc = r + 1; cc < nrows; ++cc)
            s -= A[static_cast<std::size_t>(r) * nrows + cc] * b[cc];
        b[r] = s / A[static_cast<std::size_t>(r) * nrows + r];
    }
}

void newton_stage(Sheet& s, const std::vector<double>& slack, double tau,
                  const SolverConfig& cfg) {
    const int n = s.n, m = s.m;
    const int nrows = (m - 1) * n;
    const double invh2 = 1.0 / (s.h * s.h);
    const double inv2h = 0.5 / s.h;
    const double m2 = static_cast<double>(m) * m;

    SheetCoeffs c = sheet_coeffs(s);
    double rn = max_residual(c, slack, tau);
    int iters = 0;
    const double floor = 1e-15 * (1.0 + tau);

    while (rn > cfg.newton_tol) {
        if (iters++ >= cfg.max_newton)
            throw solver_error("reduced_oracle: Newton iteration cap reached");

        std::vector<double> A(static_cast<std::size_t>(nrows) * nrows, 0.0);
        std::vector<double> b(nrows);
        auto idx = [n](int j, int k) { return (j - 1) * n + k; };
        for (int j = 1; j < m; ++j)
            for (int k = 0; k < n; ++k) {
                const int r = idx(j, k);
                const std::size_t i = static_cast<std::size_t>(j - 1) * n + k;
                const double rho = c.rho[i], a = c.a[i], g = c.g[i];
                double* row = A.data() + static_cast<std::size_t>(r) * nrows;
                row[idx(j, xup(k, n))] += 0.25 * a * invh2;
                row[idx(j, xdn(k, n))] += 0.25 * a * invh2;
                row[r] += -0.5 * a * invh2 - 2.0 * rho * m2;
                if (j + 1 < m) row[idx(j + 1, k)] += rho * m2;
                if (j - 1 > 0) row[idx(j - 1, k)] += rho * m2;
                // -(1/2) g * D_t D_x delta
                const double w = -0.5 * g * 0.5 * m * inv2h;
                if (j + 1 < m) {
                    row[idx(j + 1, xup(k, n))] += w;
                    row[idx(j + 1, xdn(k, n))] -= w;
                }
                if (j - 1 > 0) {
                    row[idx(j - 1, xup(k, n))] -= w;
                    row[idx(j - 1, xdn(k, n))] += w;
                }
                b[r] = -(c.q[i] - tau * slack[i]);
            }

        lu_solve(A, b, nrows);

        double step = 1.0;
        for (;;) {
            Sheet trial = s;
            for (int j = 1; j < m; ++j)
                for (int k = 0; k < n; ++k) trial.at(j, k) += step * b[idx(j, k)];
            SheetCoeffs ct = sheet_coeffs(trial);
            const double rt = max_residual(ct, slack, tau);
            if (ct.min_rho > 0.0 && ct.min_q > 0.0 && rt <= rn * (1.0 - 0.2 * step) + floor) {
                s = std::move(trial);
                c = std::move(ct);
                rn = rt;
                break;
            }
            step *= 0.5;
            if (step < cfg.damping_min)
                throw solver_error("reduced_oracle: line search underflow");
        }
    }
}

} // namespace

PathGrid reduced_oracle(const ScalarField& phi0, const ScalarField& phi1,
                        const SolverConfig& cfg) {
    cfg.validate();
    require_same_grid(phi0.grid(), phi1.grid(), "reduced_oracle");
    const int n = phi0.n();
    for (const ScalarField* f : {&phi0, &phi1})
        for (int k = 0; k < n; ++k)
            for (int l = 1; l < n; ++l)
                if (f->at(k, l) != f->at(k, 0))
                    throw admissibility_error("reduced_oracle: input is not y-independent");

    const int m = cfg.m;
    Sheet s;
    s.n = n;
    s.m = m;
    s.h = phi0.h();
    s.u.resize(static_cast<std::size_t>(m + 1) * n);

    // convexified initial sheet, same doubling search as the main solver
    double conv = cfg.m_start;
    std::vector<double> slack;
    for (;;) {
        for (int j = 0; j <= m; ++j) {
            const double t = static_cast<double>(j) / m;
            for (int k = 0; k < n; ++k)
                s.at(j, k) = (1.0 - t) * phi0.at(k, 0) + t * phi1.at(k, 0) -
                             conv * t * (1.0 - t);
        }
        SheetCoeffs c = sheet_coeffs(s);
        if (c.min_q >= cfg.m_margin && c.min_rho >= cfg.m_margin) {
            slack = c.q;
            break;
        }
        conv *= 2.0;
        if (conv > 1.8446744073709552e19)
            throw solver_error("reduced_oracle: positivity not reachable");
    }

    newton_stage(s, slack, 1.0, cfg);
    double tau = 1.0;
    while (tau > cfg.eps_target) {
        double trial_tau = std::max(tau * cfg.tau_factor, cfg.eps_target);
        int attempts = 0;
        for (;;) {
            Sheet saved = s;
            try {
                newton_stage(s, slack, trial_tau, cfg);
                break;
            } catch (const solver_error&) {
                s = std::move(saved);
                trial_tau = std::sqrt(tau * trial_tau);
                if (++attempts > 64 || trial_tau >= tau * (1.0 - 1e-12))
                    throw solver_error("reduced_oracle: tau-step underflow");
            }
        }
        tau = trial_tau;
    }

    PathGrid out = PathGrid::make(phi0.grid(), m);
    for (int j = 0; j <= m; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) out.slices[j].at(k, l) = s.at(j, k);
    return out;
}

} // namespace kgeo
