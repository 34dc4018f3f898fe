#include "mollifier.hpp"

#include <cmath>

namespace vvlab {

std::vector<double> bump_kernel_nodal(GridSpec grid, double alpha) {
    if (alpha <= 0.0 || alpha > std::numbers::pi)
        throw ConfigError("mollifier scale must lie in (0, pi]");
    const int n = grid.n;
    const double h = grid.h();
    std::vector<double> k(grid.nodal_count(), 0.0);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = torus_delta(i * h, 0.0);
        for (int j = 0; j < n; ++j) {
            const double dy = torus_delta(j * h, 0.0);
            const double r2 = (dx * dx + dy * dy) / (alpha * alpha);
            if (r2 < 1.0) {
                const double v = std::exp(-1.0 / (1.0 - r2)) / (alpha * alpha);
                k[static_cast<std::size_t>(i) * n + j] = v;
                mass += v;
            }
        }
    }
    mass *= h * h;
    for (double& v : k) v /= mass;
    return k;
}

KernelStats kernel_stats(GridSpec grid, const std::vector<double>& kernel, double alpha) {
    KernelStats s;
    std::size_t support = 0;
    double mass = 0.0;
    for (double v : kernel) {
        if (v > 0.0) {
            ++support;
            mass += v;
            s.sup = std::max(s.sup, v);
        }
    }
    const double h2 = grid.h() * grid.h();
    mass *= h2;
    s.sup_scaled = s.sup * alpha * alpha;
    s.sup_over_mean = support > 0 ? s.sup * (static_cast<double>(support) * h2) / mass : 0.0;
    return s;
}

SpectralField kernel_spectrum(GridSpec grid, double alpha, Fft& fft) {
    return forward_transform(grid, bump_kernel_nodal(grid, alpha), fft);
}

SpectralField convolve(const SpectralField& f, const SpectralField& kernel_spec) {
    if (!(f.grid == kernel_spec.grid))
        throw ConfigError("convolution grid mismatch");
    SpectralField out(f.grid);
    const double scale = two_pi * two_pi;
    for (std::size_t m = 0; m < f.c.size(); ++m)
        out.c[m] = scale * f.c[m] * kernel_spec.c[m];
    return out;
}

SpectralField mollify(const SpectralField& f, double alpha, Fft& fft) {
    if (alpha < 2.0 * f.grid.h() * (1.0 - 1e-12))
        throw ConfigError("mollifier scale below 2h is not resolvable on this grid");
    return convolve(f, kernel_spectrum(f.grid, alpha, fft));
}

} // namespace vvlab
