#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kgeo/grid.hpp"

namespace kgeo {

/// Seeded generator with a platform-independent double extraction.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0,1).
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
};

/// One Fourier mode of a potential: amp * cos(2 pi (kx x + ky y) + phase).
struct Mode {
    int kx = 0;
    int ky = 0;
    double amp = 0.0;
    double phase = 0.0;
};

ScalarField mode_field(GridSpec grid, const Mode& mode);
ScalarField mode_sum(GridSpec grid, const std::vector<Mode>& modes);

/// Builds the mode sum and certifies it; throws admissibility_error with
/// the worst-node diagnostic when the amplitudes are too large.
KahlerPotential make_potential(GridSpec grid, const std::vector<Mode>& modes);

/// Random admissible potential: up to max_modes low-frequency modes
/// (|k|,|l| <= max_wave), rescaled so that min rho >= target_min_rho.
ScalarField random_potential(GridSpec grid, Rng& rng, int max_modes,
                             double target_min_rho, int max_wave = 3);

} // namespace kgeo
