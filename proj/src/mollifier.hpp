#pragma once

#include <vector>

#include "field.hpp"

namespace vvlab {

// Smooth compactly supported bump rho(x) = C exp(-1/(1-|x|^2)) on |x| < 1,
// rescaled to rho_alpha = alpha^-2 rho(x/alpha) and renormalized so that the
// *grid* mass sum rho h^2 is exactly 1. Centered at the origin node, torus
// min-image metric. No resolvability check here: the split diagnostics must
// be able to build sub-grid kernels (flagged by the caller).
std::vector<double> bump_kernel_nodal(GridSpec grid, double alpha);

struct KernelStats {
    double sup = 0;       // max nodal value of rho_alpha
    double sup_scaled = 0; // alpha^2 * sup (dimensionless, < 1 for this bump)
    double sup_over_mean = 0; // sup / (mass / support area), support area = count*h^2
};
KernelStats kernel_stats(GridSpec grid, const std::vector<double>& kernel, double alpha);

// Spectral representation used by convolution: coefficients of the kernel.
SpectralField kernel_spectrum(GridSpec grid, double alpha, Fft& fft);

// Circular convolution f * rho on the torus: coefficient-wise
// (2pi)^2 f_hat k_hat. Preserves the mean exactly and nodal positivity up to
// roundoff (the FFT evaluates the exact nodal convolution sum).
SpectralField convolve(const SpectralField& f, const SpectralField& kernel_spec);

// Public mollify op: enforces the resolvability floor alpha >= 2h.
SpectralField mollify(const SpectralField& f, double alpha, Fft& fft);

} // namespace vvlab
