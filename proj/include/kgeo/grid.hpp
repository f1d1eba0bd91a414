#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kgeo/errors.hpp"

namespace kgeo {

/// Uniform N x N sampling of the unit-area 2-torus, spacing h = 1/N.
/// Coordinates are coord(k) = k/N, so coord(N) == 1 exactly.
struct GridSpec {
    int n = 0;
    double h = 0.0;

    static GridSpec make(int n);

    double coord(int k) const { return static_cast<double>(k) / n; }
    std::size_t nodes() const { return static_cast<std::size_t>(n) * n; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Periodic real field sampled on a GridSpec.  Values are row-major with
/// index (k,l) at the point (k*h, l*h); row k is contiguous in memory.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridSpec grid, double fill = 0.0)
        : grid_(grid), values_(grid.nodes(), fill) {}

    const GridSpec& grid() const { return grid_; }
    int n() const { return grid_.n; }
    double h() const { return grid_.h; }

    double& at(int k, int l) { return values_[static_cast<std::size_t>(k) * grid_.n + l]; }
    double at(int k, int l) const { return values_[static_cast<std::size_t>(k) * grid_.n + l]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }

    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double c);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// a += s*b (shapes must match).
void axpy(ScalarField& a, double s, const ScalarField& b);

/// Complex-valued field stored as a (re, im) pair of ScalarFields.
struct ComplexField {
    ScalarField re;
    ScalarField im;
};

/// A potential certified to define a positive metric density
/// rho = 1 + dzzbar(phi) > 0 at every grid node.
class KahlerPotential {
public:
    /// Promote a field, caching the density; throws admissibility_error
    /// naming the worst node when min rho <= 0.
    static KahlerPotential certify(ScalarField phi);

    const ScalarField& phi() const { return phi_; }
    const ScalarField& rho() const { return rho_; }
    double min_rho() const { return min_rho_; }
    const GridSpec& grid() const { return phi_.grid(); }

private:
    KahlerPotential(ScalarField phi, ScalarField rho, double min_rho)
        : phi_(std::move(phi)), rho_(std::move(rho)), min_rho_(min_rho) {}

    ScalarField phi_;
    ScalarField rho_;
    double min_rho_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

} // namespace kgeo
