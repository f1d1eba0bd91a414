#include "kgeo/fields.hpp"

#include <cmath>

#include "kgeo/calculus.hpp"

namespace kgeo {

ScalarField mode_field(GridSpec grid, const Mode& mode) {
    ScalarField f(grid);
    const double twopi = 2.0 * M_PI;
    for (int k = 0; k < grid.n; ++k) {
        const double x = grid.coord(k);
        for (int l = 0; l < grid.n; ++l) {
            const double y = grid.coord(l);
            f.at(k, l) = mode.amp * std::cos(twopi * (mode.kx * x + mode.ky * y) + mode.phase);
        }
    }
    return f;
}

ScalarField mode_sum(GridSpec grid, const std::vector<Mode>& modes) {
    ScalarField f(grid);
    for (const Mode& m : modes) f += mode_field(grid, m);
    return f;
}

KahlerPotential make_potential(GridSpec grid, const std::vector<Mode>& modes) {
    return KahlerPotential::certify(mode_sum(grid, modes));
}

ScalarField random_potential(GridSpec grid, Rng& rng, int max_modes,
                             double target_min_rho, int max_wave) {
    std::vector<Mode> modes;
    const int count = rng.uniform_int(1, max_modes);
    for (int i = 0; i < count; ++i) {
        Mode m;
        do {
            m.kx = rng.uniform_int(-max_wave, max_wave);
            m.ky = rng.uniform_int(-max_wave, max_wave);
        } while (m.kx == 0 && m.ky == 0);
        m.amp = rng.uniform(0.2, 1.0);
        m.phase = rng.uniform(0.0, 2.0 * M_PI);
        modes.push_back(m);
    }
    ScalarField f = mode_sum(grid, modes);
    // rescale so min rho lands exactly on the requested floor
    const double lap_min = dzzbar(f).min(); // scales linearly with f
    const double scale = (1.0 - target_min_rho) / (-lap_min);
    f *= scale;
    return f;
}

} // namespace kgeo
