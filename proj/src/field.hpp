#pragma once

#include <complex>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"

namespace vvlab {

using cplx = std::complex<double>;

// Real scalar field on the torus stored as half-plane Fourier coefficients.
// Storage index (i, j) -> i*(n/2+1) + j with kx = wavenumber(i, n) and
// ky = j in 0..n/2; the missing ky < 0 half-plane is the conjugate mirror.
struct SpectralField {
    GridSpec grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(GridSpec g) : grid(g), c(g.spectral_count()) {}

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * (grid.n / 2 + 1) + j;
    }
    cplx& at(int i, int j) { return c[idx(i, j)]; }
    const cplx& at(int i, int j) const { return c[idx(i, j)]; }
};

// Divergence-free velocity from the stream-function inversion; mean part is
// carried by the k=0 coefficients of the components (zero for all fields
// produced here).
struct VelocityField {
    SpectralField u1, u2;
};

// Coefficient at a signed wavenumber pair, resolving the conjugate mirror
// for ky < 0. |kx|, |ky| <= n/2 required.
cplx coeff_at(const SpectralField& f, int kx, int ky);

// Weight of a stored coefficient in full-plane sums (2 for mirrored columns).
inline double hermitian_weight(int j, int n) { return (j == 0 || j == n / 2) ? 1.0 : 2.0; }

SpectralField forward_transform(GridSpec grid, const std::vector<double>& nodal, Fft& fft);
std::vector<double> inverse_transform(const SpectralField& f, Fft& fft);

// Spectral differentiation: multiply by (i kx)^ax (i ky)^ay. The unpaired
// n/2 wavenumber carries no sign information for odd derivatives of a real
// field, so it is zeroed whenever the order along its axis is odd.
SpectralField derivative(const SpectralField& f, int ax, int ay);

SpectralField laplacian(const SpectralField& f);

// u = (d/dy, -d/dx) applied to the stream function psi solving Lap psi = omega.
// Requires mean-zero omega. ||grad u||_L2 = ||omega||_L2 holds exactly in
// this representation.
VelocityField biot_savart(const SpectralField& omega);

// max_k |kx*u1_hat + ky*u2_hat| over stored modes (incompressibility defect).
double divergence_defect(const VelocityField& u);

// Parseval-side norms.
double l2_norm_sq(const SpectralField& f);    // (2pi)^2 sum w |c|^2
double l2_norm(const SpectralField& f);
double h1_seminorm_sq(const SpectralField& f); // ||grad f||_L2^2
double h1_seminorm(const SpectralField& f);

// L2 distance between the velocities induced by two spectral vorticities:
// 2pi sqrt(sum w |a-b|^2 / |k|^2), skipping k = 0 and the Nyquist lines
// that the Biot-Savart inversion drops.
double velocity_distance(GridSpec grid, const std::vector<cplx>& a,
                         const std::vector<cplx>& b);

struct NodalNorms {
    double l1 = 0, l2 = 0, linf = 0, min = 0;
};
NodalNorms nodal_norms(GridSpec grid, const std::vector<double>& nodal);

// Physical-quadrature L1/L2/Linf plus the spectral H1 seminorm.
struct FieldNorms {
    double l1 = 0, l2 = 0, linf = 0, h1 = 0;
};
FieldNorms norms(const SpectralField& f, Fft& fft);

// Zero every mode with kx^2 + ky^2 > (n/3)^2 (circular two-thirds cutoff,
// alias-free for quadratic products).
void apply_dealias(SpectralField& f);

// Fraction of the spectral mass ||f||^2 carried by modes with |k| > n/3.
double tail_spectrum_fraction(const SpectralField& f);

bool all_finite(const SpectralField& f);

// 1/2 integral |u|^2 computed spectrally from the velocity coefficients.
double kinetic_energy_spectral(const VelocityField& u);

} // namespace vvlab
