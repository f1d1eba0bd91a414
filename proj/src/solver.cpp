#include "kgeo/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "kgeo/io.hpp"

namespace kgeo {

double MaTarget::max_slack() const {
    double m = 0.0;
    for (const ScalarField& s : slack) m = std::max(m, s.max());
    return m;
}

double MaTarget::min_slack() const {
    double m = slack.empty() ? 0.0 : slack[0].min();
    for (const ScalarField& s : slack) m = std::min(m, s.min());
    return m;
}

void SolverConfig::validate() const {
    if (m < 2) throw solver_error("config: M must be >= 2");
    if (!(eps_target > 0.0 && eps_target < 1.0))
        throw solver_error("config: eps_target must lie in (0,1)");
    if (!(tau_factor > 0.0 && tau_factor < 1.0))
        throw solver_error("config: tau_factor must lie in (0,1)");
    if (!(newton_tol > 0.0)) throw solver_error("config: newton_tol must be positive");
    if (!(lin_tol > 0.0)) throw solver_error("config: lin_tol must be positive");
    if (!(damping_min > 0.0)) throw solver_error("config: damping_min must be positive");
    if (!(m_margin > 0.0)) throw solver_error("config: m_margin must be positive");
    if (!(m_start > 0.0)) throw solver_error("config: m_start must be positive");
    if (max_newton < 1 || max_lin_iters < 1)
        throw solver_error("config: iteration caps must be positive");
}

std::string serialize(const SolveReport& report) {
    std::ostringstream os;
    for (const StageInfo& s : report.stages)
        os << "stage tau=" << num17(s.tau) << " iters=" << s.newton_iters
           << " res=" << num17(s.final_residual) << " min_rho=" << num17(s.min_rho)
           << " min_q=" << num17(s.min_q) << "\n";
    os << "effective_eps = " << num17(report.effective_eps) << "\n";
    return os.str();
}

namespace {

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_dn(int i, int n) { return i == 0 ? n - 1 : i - 1; }

// Per-path data the Newton stage works with: densities on every slice and
// the t-second-difference / mixed-derivative fields on interior slices.
struct PathCoeffs {
    int n = 0, m = 0;
    double h = 0.0;
    std::vector<std::vector<double>> rho;  // M+1 slices
    std::vector<std::vector<double>> a;    // M-1: D_tt(Phi)
    std::vector<std::vector<double>> gre;  // M-1: Re D_t dz Phi
    std::vector<std::vector<double>> gim;  // M-1: Im D_t dz Phi
    std::vector<std::vector<double>> q;    // M-1: rho*a - |G|^2
    double min_rho = 0.0;
    double min_q = 0.0;
};

PathCoeffs path_coefficients(const PathGrid& path) {
    const int n = path.grid.n, m = path.m;
    const std::size_t nn = path.grid.nodes();
    const double h = path.grid.h;
    const double q4 = 0.25 / (h * h);
    const double inv2h = 0.5 / h;
    const double m2 = static_cast<double>(m) * m;

    PathCoeffs c;
    c.n = n;
    c.m = m;
    c.h = h;
    c.rho.assign(m + 1, std::vector<double>(nn));
    c.a.assign(m - 1, std::vector<double>(nn));
    c.gre.assign(m - 1, std::vector<double>(nn));
    c.gim.assign(m - 1, std::vector<double>(nn));
    c.q.assign(m - 1, std::vector<double>(nn));

    c.min_rho = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= m; ++j) {
        const ScalarField& s = path.slices[j];
        for (int k = 0; k < n; ++k) {
            const int kp = wrap_up(k, n), km = wrap_dn(k, n);
            for (int l = 0; l < n; ++l) {
                const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
                const double lap = (s.at(kp, l) + s.at(km, l) + s.at(k, lp) + s.at(k, lm) -
                                    4.0 * s.at(k, l)) * q4;
                const double r = 1.0 + lap;
                c.rho[j][static_cast<std::size_t>(k) * n + l] = r;
                c.min_rho = std::min(c.min_rho, r);
            }
        }
    }

    c.min_q = std::numeric_limits<double>::infinity();
    for (int j = 1; j < m; ++j) {
        const ScalarField& prev = path.slices[j - 1];
        const ScalarField& cur = path.slices[j];
        const ScalarField& next = path.slices[j + 1];
        std::vector<double>& aj = c.a[j - 1];
        std::vector<double>& gr = c.gre[j - 1];
        std::vector<double>& gi = c.gim[j - 1];
        std::vector<double>& qj = c.q[j - 1];
        for (int k = 0; k < n; ++k) {
            const int kp = wrap_up(k, n), km = wrap_dn(k, n);
            for (int l = 0; l < n; ++l) {
                const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
                const std::size_t i = static_cast<std::size_t>(k) * n + l;
                const double dtt = m2 * (next.at(k, l) - 2.0 * cur.at(k, l) + prev.at(k, l));
                // D_t of dz(Phi): centered in t, dz = (d_x - i d_y)/2
                const double dxd = ((next.at(kp, l) - prev.at(kp, l)) -
                                    (next.at(km, l) - prev.at(km, l))) * inv2h;
                const double dyd = ((next.at(k, lp) - prev.at(k, lp)) -
                                    (next.at(k, lm) - prev.at(k, lm))) * inv2h;
                const double re = 0.25 * m * dxd;  // (M/2) * (1/2) * d_x
                const double im = -0.25 * m * dyd; // (M/2) * (-1/2) * d_y
                aj[i] = dtt;
                gr[i] = re;
                gi[i] = im;
                const double qv = c.rho[j][i] * dtt - (re * re + im * im);
                qj[i] = qv;
                c.min_q = std::min(c.min_q, qv);
            }
        }
    }
    return c;
}

// Matrix-free linearized operator on interior unknowns (flattened
// (M-1) x N x N, slice-major).  Optional boundary tangents feed the
// t-stencils of the first and last interior slices.
struct LinearizedOp {
    const PathCoeffs* c = nullptr;
    const double* bottom = nullptr; // tangent at j = 0 (may be null = zero)
    const double* top = nullptr;    // tangent at j = M (may be null = zero)

    std::size_t size() const {
        return static_cast<std::size_t>(c->m - 1) * c->n * c->n;
    }

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        const int n = c->n, m = c->m;
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        const double h = c->h;
        const double q4 = 0.25 / (h * h);
        const double inv2h = 0.5 / h;
        const double m2 = static_cast<double>(m) * m;
        std::vector<double> diff(nn);
        for (int j = 1; j < m; ++j) {
            const double* cur = in.data() + (j - 1) * nn;
            const double* prev = j >= 2 ? in.data() + (j - 2) * nn : bottom;
            const double* next = j <= m - 2 ? in.data() + j * nn : top;
            const std::vector<double>& rho = c->rho[j];
            const std::vector<double>& a = c->a[j - 1];
            const std::vector<double>& gr = c->gre[j - 1];
            const std::vector<double>& gi = c->gim[j - 1];
            double* o = out.data() + (j - 1) * nn;
            for (std::size_t i = 0; i < nn; ++i) {
                const double pv = prev ? prev[i] : 0.0;
                const double nv = next ? next[i] : 0.0;
                diff[i] = nv - pv;
            }
            for (int k = 0; k < n; ++k) {
                const int kp = wrap_up(k, n), km = wrap_dn(k, n);
                for (int l = 0; l < n; ++l) {
                    const int lp = wrap_up(l, n), lm = wrap_dn(l, n);
                    const std::size_t i = static_cast<std::size_t>(k) * n + l;
                    const double lap = (cur[static_cast<std::size_t>(kp) * n + l] +
                                        cur[static_cast<std::size_t>(km) * n + l] +
                                        cur[static_cast<std::size_t>(k) * n + lp] +
                                        cur[static_cast<std::size_t>(k) * n + lm] -
                                        4.0 * cur[i]) * q4;
                    const double pv = prev ? prev[i] : 0.0;
                    const double nv = next ? next[i] : 0.0;
                    const double dtt = m2 * (nv - 2.0 * cur[i] + pv);
                    const double dxD = (diff[static_cast<std::size_t>(kp) * n + l] -
                                        diff[static_cast<std::size_t>(km) * n + l]) * inv2h;
                    const double dyD = (diff[static_cast<std::size_t>(k) * n + lp] -
                                        diff[static_cast<std::size_t>(k) * n + lm]) * inv2h;
                    o[i] = lap * a[i] + rho[i] * dtt - 0.5 * m * (gr[i] * dxD - gi[i] * dyD);
                }
            }
        }
    }

    // Jacobi preconditioner: diagonal = -a/h^2 - 2 rho M^2 (cross term has
    // zero diagonal).
    void diag(std::vector<double>& d) const {
        const int n = c->n, m = c->m;
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        const double invh2 = 1.0 / (c->h * c->h);
        const double m2 = static_cast<double>(m) * m;
        for (int j = 1; j < m; ++j) {
            const std::vector<double>& rho = c->rho[j];
            const std::vector<double>& a = c->a[j - 1];
            double* o = d.data() + (j - 1) * nn;
            for (std::size_t i = 0; i < nn; ++i) o[i] = -a[i] * invh2 - 2.0 * rho[i] * m2;
        }
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Jacobi-preconditioned BiCGStab; returns achieved relative residual.
double bicgstab(const LinearizedOp& op, const std::vector<double>& b,
                std::vector<double>& x, double rel_tol, int max_iters) {
    const std::size_t nu = b.size();
    std::vector<double> pd(nu);
    op.diag(pd);
    auto precond = [&](const std::vector<double>& v, std::vector<double>& z) {
        for (std::size_t i = 0; i < nu; ++i) z[i] = v[i] / pd[i];
    };

    x.assign(nu, 0.0);
    std::vector<double> r = b;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return 0.0;
    std::vector<double> rhat = r;
    std::vector<double> p(nu, 0.0), v(nu, 0.0), phat(nu), s(nu), shat(nu), t(nu);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double rnorm = bnorm;
    for (int it = 0; it < max_iters; ++it) {
        const double rho1 = dot(rhat, r);
        if (std::abs(rho1) < 1e-300) { rhat = r; rho = 1.0; omega = 1.0; alpha = 1.0;
                                       p.assign(nu, 0.0); v.assign(nu, 0.0); continue; }
        const double beta = (rho1 / rho) * (alpha / omega);
        for (std::size_t i = 0; i < nu; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precond(p, phat);
        op.apply(phat, v);
        const double rv = dot(rhat, v);
        if (std::abs(rv) < 1e-300) { rhat = r; rho = 1.0; omega = 1.0; alpha = 1.0;
                                     p.assign(nu, 0.0); v.assign(nu, 0.0); continue; }
        alpha = rho1 / rv;
        for (std::size_t i = 0; i < nu; ++i) s[i] = r[i] - alpha * v[i];
        double snorm = norm2(s);
        if (snorm / bnorm < rel_tol) {
            for (std::size_t i = 0; i < nu; ++i) x[i] += alpha * phat[i];
            return snorm / bnorm;
        }
        precond(s, shat);
        op.apply(shat, t);
        const double tt = dot(t, t);
        if (tt < 1e-300) {
            for (std::size_t i = 0; i < nu; ++i) x[i] += alpha * phat[i];
            return snorm / bnorm;
        }
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < nu; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = norm2(r);
        if (rnorm / bnorm < rel_tol) return rnorm / bnorm;
        rho = rho1;
    }
    return rnorm / bnorm;
}

std::vector<ScalarField> fields_from_coeffs(const PathGrid& path,
                                            const std::vector<std::vector<double>>& src) {
    std::vector<ScalarField> out;
    out.reserve(src.size());
    for (const std::vector<double>& v : src) {
        ScalarField f(path.grid);
        std::copy(v.begin(), v.end(), f.data());
        out.push_back(std::move(f));
    }
    return out;
}

double residual_max_norm(const PathCoeffs& c, const MaTarget& target) {
    double rn = 0.0;
    for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(c.m); ++j) {
        const double* q = c.q[j].data();
        const double* s = target.slack[j].data();
        for (std::size_t i = 0; i < c.q[j].size(); ++i)
            rn = std::max(rn, std::abs(q[i] - target.tau * s[i]));
    }
    return rn;
}

void add_update(PathGrid& path, const std::vector<double>& delta, double step) {
    const std::size_t nn = path.grid.nodes();
    for (int j = 1; j < path.m; ++j) {
        double* p = path.slices[j].data();
        const double* d = delta.data() + (j - 1) * nn;
        for (std::size_t i = 0; i < nn; ++i) p[i] += step * d[i];
    }
}

void require_admissible_path(const PathCoeffs& c) {
    if (!(c.min_rho > 0.0))
        throw admissibility_error("path has an inadmissible slice (min rho = " +
                                  std::to_string(c.min_rho) + ")");
}

} // namespace

std::vector<ScalarField> ma_density(const PathGrid& path) {
    path.validate();
    PathCoeffs c = path_coefficients(path);
    require_admissible_path(c);
    return fields_from_coeffs(path, c.q);
}

std::pair<PathGrid, MaTarget> initial_path(const KahlerPotential& phi0,
                                           const KahlerPotential& phi1,
                                           const SolverConfig& cfg) {
    cfg.validate();
    require_same_grid(phi0.grid(), phi1.grid(), "initial_path");
    const double delta0 = cfg.m_margin;

    PathGrid base = PathGrid::linear(phi0.phi(), phi1.phi(), cfg.m);
    {
        PathCoeffs c = path_coefficients(base);
        if (!(c.min_rho >= delta0))
            throw solver_error("initial_path: interpolated density clears only " +
                               std::to_string(c.min_rho) + " < m_margin; inputs too close to degenerate");
    }

    double m = cfg.m_start;
    for (;;) {
        PathGrid trial = base;
        for (int j = 1; j < cfg.m; ++j) {
            const double t = trial.time(j);
            trial.slices[j] += -m * t * (1.0 - t);
        }
        PathCoeffs c = path_coefficients(trial);
        if (c.min_q >= delta0 && c.min_rho >= delta0) {
            MaTarget target;
            target.slack = fields_from_coeffs(trial, c.q);
            target.tau = 1.0;
            return {std::move(trial), std::move(target)};
        }
        m *= 2.0;
        if (m > 1.8446744073709552e19) // 2^64
            throw solver_error("initial_path: positivity not reachable within m <= 2^64");
    }
}

std::vector<ScalarField> residual(const PathGrid& path, const MaTarget& target) {
    std::vector<ScalarField> q = ma_density(path);
    if (q.size() != target.slack.size())
        throw format_error("residual: target slack does not match path layout");
    for (std::size_t j = 0; j < q.size(); ++j) axpy(q[j], -target.tau, target.slack[j]);
    return q;
}

double max_abs_residual(const std::vector<ScalarField>& fields) {
    double rn = 0.0;
    for (const ScalarField& f : fields) rn = std::max(rn, f.max_abs());
    return rn;
}

std::vector<ScalarField> jacobian_apply(const PathGrid& path, const TangentAlongPath& dPhi) {
    path.validate();
    dPhi.require_matches(path, "jacobian_apply");
    PathCoeffs c = path_coefficients(path);
    require_admissible_path(c);

    const std::size_t nn = path.grid.nodes();
    std::vector<double> in(static_cast<std::size_t>(path.m - 1) * nn);
    for (int j = 1; j < path.m; ++j)
        std::copy(dPhi.slices[j].data(), dPhi.slices[j].data() + nn,
                  in.begin() + (j - 1) * nn);

    LinearizedOp op;
    op.c = &c;
    op.bottom = dPhi.slices[0].data();
    op.top = dPhi.slices[path.m].data();
    std::vector<double> out(in.size());
    op.apply(in, out);

    std::vector<ScalarField> fields;
    fields.reserve(path.m - 1);
    for (int j = 1; j < path.m; ++j) {
        ScalarField f(path.grid);
        std::copy(out.begin() + (j - 1) * nn, out.begin() + j * nn, f.data());
        fields.push_back(std::move(f));
    }
    return fields;
}

StageInfo newton_solve(PathGrid& path, const MaTarget& target, const SolverConfig& cfg) {
    cfg.validate();
    path.validate();
    PathCoeffs c = path_coefficients(path);
    require_admissible_path(c);
    double rn = residual_max_norm(c, target);
    if (!std::isfinite(rn)) throw solver_error("newton: non-finite residual");

    StageInfo info;
    info.tau = target.tau;
    info.residual_history.push_back(rn);

    const std::size_t nu = static_cast<std::size_t>(path.m - 1) * path.grid.nodes();
    std::vector<double> rhs(nu), delta(nu);
    const double slack_floor = 1e-15 * (1.0 + target.tau * target.max_slack());

    while (rn > cfg.newton_tol) {
        if (info.newton_iters >= cfg.max_newton)
            throw solver_error("newton: iteration cap reached at residual " + num17(rn));

        const std::size_t nn = path.grid.nodes();
        for (int j = 1; j < path.m; ++j) {
            const double* q = c.q[j - 1].data();
            const double* s = target.slack[j - 1].data();
            double* r = rhs.data() + (j - 1) * nn;
            for (std::size_t i = 0; i < nn; ++i) r[i] = -(q[i] - target.tau * s[i]);
        }

        LinearizedOp op;
        op.c = &c;
        bicgstab(op, rhs, delta, cfg.lin_tol, cfg.max_lin_iters);

        double step = 1.0;
        for (;;) {
            PathGrid trial = path;
            add_update(trial, delta, step);
            PathCoeffs ct = path_coefficients(trial);
            const double rt = residual_max_norm(ct, target);
            if (ct.min_rho > 0.0 && ct.min_q > 0.0 &&
                rt <= rn * (1.0 - 0.2 * step) + slack_floor) {
                path = std::move(trial);
                c = std::move(ct);
                rn = rt;
                info.residual_history.push_back(rn);
                break;
            }
            step *= 0.5;
            if (step < cfg.damping_min)
                throw solver_error("newton: line search reached damping_min at residual " +
                                   num17(rn));
        }
        ++info.newton_iters;
    }

    info.final_residual = rn;
    info.min_rho = c.min_rho;
    info.min_q = c.min_q;
    return info;
}

std::pair<PathGrid, SolveReport> solve_geodesic(const KahlerPotential& phi0,
                                                const KahlerPotential& phi1,
                                                const SolverConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    auto [path, target] = initial_path(phi0, phi1, cfg);

    SolveReport report;
    report.stages.push_back(newton_solve(path, target, cfg));

    double tau = 1.0;
    while (tau > cfg.eps_target) {
        double trial_tau = std::max(tau * cfg.tau_factor, cfg.eps_target);
        int attempts = 0;
        for (;;) {
            PathGrid saved = path;
            target.tau = trial_tau;
            try {
                report.stages.push_back(newton_solve(path, target, cfg));
                break;
            } catch (const solver_error&) {
                path = std::move(saved);
                trial_tau = std::sqrt(tau * trial_tau); // halve the step in log scale
                if (++attempts > 64 || trial_tau >= tau * (1.0 - 1e-12))
                    throw solver_error("solve_geodesic: tau-step underflow near tau = " +
                                       num17(tau));
            }
        }
        tau = trial_tau;
    }

    report.effective_eps = cfg.eps_target * target.max_slack();
    report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(path), std::move(report)};
}

double comparison_gap(const PathGrid& a, const PathGrid& b) {
    if (!(a.grid == b.grid) || a.m != b.m)
        throw format_error("comparison_gap: path shapes differ");
    double all = 0.0, boundary = 0.0;
    for (int j = 0; j <= a.m; ++j) {
        const double* pa = a.slices[j].data();
        const double* pb = b.slices[j].data();
        double mx = 0.0;
        for (std::size_t i = 0; i < a.grid.nodes(); ++i)
            mx = std::max(mx, std::abs(pa[i] - pb[i]));
        all = std::max(all, mx);
        if (j == 0 || j == a.m) boundary = std::max(boundary, mx);
    }
    return all - boundary;
}

double min_t_convexity(const PathGrid& path) {
    path.validate();
    const PathCoeffs c = path_coefficients(path);
    double mn = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& a : c.a)
        for (double v : a) mn = std::min(mn, v);
    return mn;
}

double max_bordered_eigenvalue(const PathGrid& path) {
    path.validate();
    const PathCoeffs c = path_coefficients(path);
    double mx = 0.0;
    for (int j = 1; j < c.m; ++j)
        for (std::size_t i = 0; i < c.rho[j].size(); ++i) {
            const double rho = c.rho[j][i];
            const double att = 0.25 * c.a[j - 1][i];
            const double off2 = 0.25 * (c.gre[j - 1][i] * c.gre[j - 1][i] +
                                        c.gim[j - 1][i] * c.gim[j - 1][i]);
            const double tr = rho + att;
            const double det = rho * att - off2;
            const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
            mx = std::max(mx, 0.5 * (tr + disc));
        }
    return mx;
}

} // namespace kgeo
