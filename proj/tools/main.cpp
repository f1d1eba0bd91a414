// Command-line laboratory for geodesics in the space of torus Kahler
// potentials: potential generation, geodesic solves, distance reports,
// energy functionals and the built-in verification suite.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kgeo/energy.hpp"
#include "kgeo/fields.hpp"
#include "kgeo/geometry.hpp"
#include "kgeo/io.hpp"
#include "kgeo/metric.hpp"
#include "kgeo/solver.hpp"
#include "kgeo/verify.hpp"

namespace {

// exit codes: 0 ok, 1 verify failure, 2 parse, 3 inadmissible, 4 solver
constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitSolver = 4;

struct RunConfig {
    int grid_n = 16;
    int tslices = 8;
    double eps = 1e-4;
    double tau_factor = 0.25;
    double newton_tol = 1e-9;
    std::uint64_t seed = 7;
    std::string out_dir;
    bool csv = false;
    int threads = 1;

    kgeo::SolverConfig solver() const {
        kgeo::SolverConfig cfg;
        cfg.m = tslices;
        cfg.eps_target = eps;
        cfg.tau_factor = tau_factor;
        cfg.newton_tol = newton_tol;
        cfg.validate();
        return cfg;
    }
};

std::string out_path(const RunConfig& rc, const std::string& name) {
    if (rc.out_dir.empty()) return name;
    std::filesystem::create_directories(rc.out_dir);
    return (std::filesystem::path(rc.out_dir) / name).string();
}

kgeo::KahlerPotential load_potential(const std::string& file, int expected_n) {
    kgeo::ScalarField f = kgeo::read_field_file(file);
    if (expected_n && f.n() != expected_n)
        throw kgeo::format_error("'" + file + "' has N=" + std::to_string(f.n()) +
                                 ", expected N=" + std::to_string(expected_n));
    return kgeo::KahlerPotential::certify(std::move(f));
}

std::vector<kgeo::Mode> parse_modes(const std::vector<std::string>& specs) {
    std::vector<kgeo::Mode> modes;
    for (const std::string& s : specs) {
        kgeo::Mode m;
        char c1, c2, c3;
        std::istringstream is(s);
        if (!(is >> m.kx >> c1 >> m.ky >> c2 >> m.amp) || c1 != ',' || c2 != ',')
            throw kgeo::format_error("bad --mode '" + s + "', want kx,ky,amp[,phase]");
        if (is >> c3) {
            if (c3 != ',' || !(is >> m.phase))
                throw kgeo::format_error("bad --mode '" + s + "', want kx,ky,amp[,phase]");
        }
        modes.push_back(m);
    }
    return modes;
}

void write_energy_csv(const std::string& file, const std::vector<double>& energies, int m) {
    std::ofstream os(file);
    if (!os) throw kgeo::format_error("cannot open '" + file + "' for writing");
    os << "t,E\n";
    for (int j = 0; j <= m; ++j)
        os << kgeo::num17(static_cast<double>(j) / m) << "," << kgeo::num17(energies[j])
           << "\n";
}

int cmd_make_potential(const RunConfig& rc, const std::vector<std::string>& mode_specs,
                       const std::string& out_file) {
    const kgeo::GridSpec g = kgeo::GridSpec::make(rc.grid_n);
    const std::vector<kgeo::Mode> modes = parse_modes(mode_specs);
    const kgeo::KahlerPotential kp = kgeo::make_potential(g, modes);
    kgeo::write_field_file(out_file, kp.phi());
    std::cout << "wrote " << out_file << " min_rho = " << kgeo::num17(kp.min_rho())
              << "\n";
    return 0;
}

int cmd_geodesic(const RunConfig& rc, const std::string& f0, const std::string& f1) {
    const kgeo::SolverConfig cfg = rc.solver();
    const kgeo::KahlerPotential a = load_potential(f0, rc.grid_n);
    const kgeo::KahlerPotential b = load_potential(f1, a.grid().n);
    auto [path, report] = kgeo::solve_geodesic(a, b, cfg);

    const std::string path_file = out_path(rc, "path.txt");
    kgeo::write_path_file(path_file, path);
    const std::string report_text = kgeo::serialize(report);
    {
        std::ofstream os(out_path(rc, "report.txt"));
        os << report_text;
    }
    std::cout << report_text;
    if (rc.csv) {
        write_energy_csv(out_path(rc, "energy.csv"), kgeo::slice_energies(path), path.m);
        std::vector<double> mab(path.m + 1);
        for (int j = 0; j <= path.m; ++j)
            mab[j] = kgeo::mabuchi_energy(kgeo::KahlerPotential::certify(path.slices[j]))
                         .value;
        write_energy_csv(out_path(rc, "mabuchi.csv"), mab, path.m);
    }
    std::cerr << "wall_time_sec " << report.wall_time_sec << "\n";
    return 0;
}

int cmd_distance(const RunConfig& rc, const std::string& f0, const std::string& f1) {
    const kgeo::SolverConfig cfg = rc.solver();
    const kgeo::KahlerPotential a = load_potential(f0, rc.grid_n);
    const kgeo::KahlerPotential b = load_potential(f1, a.grid().n);
    kgeo::PathGrid path;
    const kgeo::DistanceReport rep = kgeo::distance(a, b, cfg, &path);
    std::cout << kgeo::serialize(rep);
    if (rc.csv) write_energy_csv(out_path(rc, "energy.csv"), rep.slice_energies, path.m);
    return 0;
}

int cmd_triangle(const RunConfig& rc, const std::string& fa, const std::string& fb,
                 const std::string& fc) {
    const kgeo::SolverConfig cfg = rc.solver();
    const kgeo::KahlerPotential a = load_potential(fa, rc.grid_n);
    const kgeo::KahlerPotential b = load_potential(fb, a.grid().n);
    const kgeo::KahlerPotential c = load_potential(fc, a.grid().n);
    const kgeo::TriangleCheck tc = kgeo::triangle_check(a, b, c, cfg);
    std::cout << "d_ab = " << kgeo::num17(tc.d_ab) << "\n"
              << "d_bc = " << kgeo::num17(tc.d_bc) << "\n"
              << "d_ac = " << kgeo::num17(tc.d_ac) << "\n"
              << "slack = " << kgeo::num17(tc.slack) << "\n"
              << "tol = " << kgeo::num17(tc.tol) << "\n"
              << "pass = " << (tc.pass ? "yes" : "no") << "\n";
    return tc.pass ? 0 : kExitVerify;
}

int cmd_energy(const RunConfig& rc, const std::string& file, int steps) {
    const kgeo::KahlerPotential kp = load_potential(file, rc.grid_n);
    const kgeo::MabuchiValue mv = kgeo::mabuchi_energy(kp, steps);
    std::cout << "mabuchi_energy = " << kgeo::num17(mv.value) << "\n"
              << "quadrature_steps = " << mv.quadrature_steps << "\n";
    if (rc.csv) {
        std::ofstream os(out_path(rc, "energy_profile.csv"));
        if (!os) throw kgeo::format_error("cannot open energy_profile.csv");
        os << "s,E\n";
        const int samples = 16;
        for (int i = 0; i <= samples; ++i) {
            const double s = static_cast<double>(i) / samples;
            kgeo::ScalarField scaled = kp.phi();
            scaled *= s;
            os << kgeo::num17(s) << ","
               << kgeo::num17(kgeo::mabuchi_energy_segment(kgeo::ScalarField(kp.grid()),
                                                           scaled, steps))
               << "\n";
        }
    }
    return 0;
}

int cmd_curvature(const RunConfig& rc, const std::string& file, const std::string& dir1,
                  const std::string& dir2) {
    const kgeo::KahlerPotential kp = load_potential(file, rc.grid_n);
    const kgeo::CurvatureData cd = kgeo::scalar_curvature(kp);
    std::cout << "R_min = " << kgeo::num17(cd.R.min()) << "\n"
              << "R_max = " << kgeo::num17(cd.R.max()) << "\n"
              << "R_average = " << kgeo::num17(cd.Rbar) << "\n";
    if (!dir1.empty() && !dir2.empty()) {
        const kgeo::ScalarField v1 = kgeo::read_field_file(dir1);
        const kgeo::ScalarField v2 = kgeo::read_field_file(dir2);
        std::cout << "sectional = " << kgeo::num17(kgeo::sectional_curvature(v1, v2, kp))
                  << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& rc, const std::string& level_name) {
    using namespace kgeo::verify;
    const Level level = level_name == "full" ? Level::full : Level::quick;
    const auto results = run_criteria(level, rc.seed);
    const bool ok = print_report(std::cout, results, level, rc.seed);
    return ok ? 0 : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic laboratory for the space of torus Kahler potentials"};
    app.fallthrough(); // global flags may follow the subcommand
    app.set_config("--config", "", "key = value configuration file; flags override it");

    RunConfig rc;
    app.add_option("--grid", rc.grid_n, "grid points per axis N");
    app.add_option("--tslices", rc.tslices, "time intervals M");
    app.add_option("--eps", rc.eps, "final continuity parameter");
    app.add_option("--tau-factor", rc.tau_factor, "continuity schedule ratio");
    app.add_option("--newton-tol", rc.newton_tol, "Newton max-norm residual threshold");
    app.add_option("--seed", rc.seed, "seed for randomized checks");
    app.add_option("--out", rc.out_dir, "output directory");
    app.add_flag("--csv", rc.csv, "also emit CSV profiles");
    app.add_option("--threads", rc.threads,
                   "worker thread cap (results are independent of it)");

    std::vector<std::string> mode_specs;
    std::string out_file = "potential.txt";
    CLI::App* mk = app.add_subcommand("make-potential", "write a mode-sum potential");
    mk->add_option("--mode", mode_specs, "kx,ky,amp[,phase]  (repeatable; none = flat)");
    mk->add_option("--file", out_file, "output file name");

    std::string f0, f1, f2;
    CLI::App* geo =
        app.add_subcommand("geodesic", "solve the geodesic between two potentials");
    geo->add_option("phi0", f0)->required();
    geo->add_option("phi1", f1)->required();

    CLI::App* dist = app.add_subcommand("distance", "geodesic distance with error bar");
    dist->add_option("phi0", f0)->required();
    dist->add_option("phi1", f1)->required();

    CLI::App* tri = app.add_subcommand("triangle", "triangle-inequality slack of a triple");
    tri->add_option("a", f0)->required();
    tri->add_option("b", f1)->required();
    tri->add_option("c", f2)->required();

    int steps = 24;
    CLI::App* en = app.add_subcommand("energy", "Mabuchi energy of a potential");
    en->add_option("phi", f0)->required();
    en->add_option("--steps", steps, "quadrature nodes");

    std::string dir1, dir2;
    CLI::App* curv = app.add_subcommand("curvature", "scalar curvature summary");
    curv->add_option("phi", f0)->required();
    curv->add_option("--dir1", dir1, "tangent field for sectional curvature");
    curv->add_option("--dir2", dir2, "tangent field for sectional curvature");

    std::string level = "quick";
    CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
    ver->add_option("--level", level, "quick|full")->check(CLI::IsMember({"quick", "full"}));

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return kExitParse;
    }

    try {
        if (rc.threads < 1) rc.threads = 1;
        if (mk->parsed()) return cmd_make_potential(rc, mode_specs, out_path(rc, out_file));
        if (geo->parsed()) return cmd_geodesic(rc, f0, f1);
        if (dist->parsed()) return cmd_distance(rc, f0, f1);
        if (tri->parsed()) return cmd_triangle(rc, f0, f1, f2);
        if (en->parsed()) return cmd_energy(rc, f0, steps);
        if (curv->parsed()) return cmd_curvature(rc, f0, dir1, dir2);
        if (ver->parsed()) return cmd_verify(rc, level);
    } catch (const kgeo::format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const kgeo::admissibility_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInadmissible;
    } catch (const kgeo::solver_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
