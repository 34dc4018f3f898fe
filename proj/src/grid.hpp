#pragma once

#include <cstddef>
#include <numbers>

#include "errors.hpp"

namespace vvlab {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform n x n grid on [0,2pi)^2. Nodes x_ij = (i*h, j*h), row-major index
// i*n + j. Physical integrals use the h^2 quadrature weight per node.
// Wavenumbers per axis run over {-n/2+1, ..., n/2}.
struct GridSpec {
    int n = 0;

    GridSpec() = default;
    explicit GridSpec(int n_) : n(n_) {
        if (n < 16 || n % 2 != 0)
            throw ConfigError("grid n must be even and >= 16, got " + std::to_string(n));
    }

    double h() const { return two_pi / n; }
    std::size_t nodal_count() const { return static_cast<std::size_t>(n) * n; }
    // Half-plane storage for real fields: ky = 0..n/2 only, kx full.
    std::size_t spectral_count() const { return static_cast<std::size_t>(n) * (n / 2 + 1); }

    bool operator==(const GridSpec&) const = default;
};

// Signed wavenumber for a first-axis storage row i in 0..n-1.
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

// Shortest signed displacement between coordinates a and b on the circle.
inline double torus_delta(double a, double b) {
    double d = a - b;
    while (d > std::numbers::pi) d -= two_pi;
    while (d < -std::numbers::pi) d += two_pi;
    return d;
}

} // namespace vvlab
