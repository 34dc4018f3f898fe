#include "field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace vvlab {

cplx coeff_at(const SpectralField& f, int kx, int ky) {
    const int n = f.grid.n;
    if (std::abs(kx) > n / 2 || std::abs(ky) > n / 2)
        throw ConfigError("wavenumber outside representable range");
    auto row = [n](int k) { return k >= 0 ? k : k + n; };
    if (ky >= 0) return f.at(row(kx), ky);
    return std::conj(f.at(row(-kx), -ky));
}

SpectralField forward_transform(GridSpec grid, const std::vector<double>& nodal, Fft& fft) {
    if (fft.grid() != grid || nodal.size() != grid.nodal_count())
        throw ConfigError("transform input size does not match grid");
    SpectralField f(grid);
    fft.forward(nodal.data(), f.c.data());
    return f;
}

std::vector<double> inverse_transform(const SpectralField& f, Fft& fft) {
    if (fft.grid() != f.grid)
        throw ConfigError("transform grid mismatch");
    std::vector<double> out(f.grid.nodal_count());
    fft.inverse(f.c.data(), out.data());
    return out;
}

SpectralField derivative(const SpectralField& f, int ax, int ay) {
    const int n = f.grid.n;
    SpectralField out(f.grid);
    const bool zero_nyq_x = (ax % 2) != 0;
    const bool zero_nyq_y = (ay % 2) != 0;
    for (int i = 0; i < n; ++i) {
        const int kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            if ((zero_nyq_x && kx == n / 2) || (zero_nyq_y && j == n / 2)) continue;
            cplx m(1.0, 0.0);
            for (int a = 0; a < ax; ++a) m *= cplx(0.0, kx);
            for (int a = 0; a < ay; ++a) m *= cplx(0.0, j);
            out.at(i, j) = m * f.at(i, j);
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const int n = f.grid.n;
    SpectralField out(f.grid);
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            const double k2 = kx * kx + static_cast<double>(j) * j;
            out.at(i, j) = -k2 * f.at(i, j);
        }
    }
    return out;
}

VelocityField biot_savart(const SpectralField& omega) {
    const int n = omega.grid.n;
    double cmax = 0.0;
    for (const auto& z : omega.c) cmax = std::max(cmax, std::abs(z));
    if (std::abs(omega.at(0, 0)) > 1e-12 * std::max(1.0, cmax))
        throw ConfigError("biot_savart requires mean-zero vorticity");

    VelocityField u{SpectralField(omega.grid), SpectralField(omega.grid)};
    for (int i = 0; i < n; ++i) {
        const int kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            if ((kx == 0 && j == 0) || kx == n / 2 || j == n / 2) continue;
            const double k2 = static_cast<double>(kx) * kx + static_cast<double>(j) * j;
            const cplx w = omega.at(i, j);
            u.u1.at(i, j) = cplx(0.0, j) * w / k2;
            u.u2.at(i, j) = cplx(0.0, -kx) * w / k2;
        }
    }
    return u;
}

double divergence_defect(const VelocityField& u) {
    const int n = u.u1.grid.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j)
            worst = std::max(worst, std::abs(kx * u.u1.at(i, j) + static_cast<double>(j) * u.u2.at(i, j)));
    }
    return worst;
}

double l2_norm_sq(const SpectralField& f) {
    const int n = f.grid.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n / 2; ++j)
            s += hermitian_weight(j, n) * std::norm(f.at(i, j));
    return two_pi * two_pi * s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

double h1_seminorm_sq(const SpectralField& f) {
    const int n = f.grid.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            const double k2 = kx * kx + static_cast<double>(j) * j;
            s += hermitian_weight(j, n) * k2 * std::norm(f.at(i, j));
        }
    }
    return two_pi * two_pi * s;
}

double h1_seminorm(const SpectralField& f) { return std::sqrt(h1_seminorm_sq(f)); }

double velocity_distance(GridSpec grid, const std::vector<cplx>& a,
                         const std::vector<cplx>& b) {
    if (a.size() != grid.spectral_count() || b.size() != grid.spectral_count())
        throw ConfigError("spectral size does not match grid");
    const int n = grid.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == n / 2) continue;
        const double kx = wavenumber(i, n);
        for (int j = 0; j < n / 2; ++j) {
            const double k2 = kx * kx + static_cast<double>(j) * j;
            if (k2 == 0.0) continue;
            const size_t m = static_cast<size_t>(i) * (n / 2 + 1) + j;
            s += hermitian_weight(j, n) * std::norm(a[m] - b[m]) / k2;
        }
    }
    return two_pi * std::sqrt(s);
}

NodalNorms nodal_norms(GridSpec grid, const std::vector<double>& nodal) {
    NodalNorms r;
    if (nodal.empty()) return r;
    const double h2 = grid.h() * grid.h();
    double l1 = 0, l2 = 0, linf = 0, mn = nodal[0];
    for (double v : nodal) {
        const double a = std::abs(v);
        l1 += a;
        l2 += v * v;
        linf = std::max(linf, a);
        mn = std::min(mn, v);
    }
    r.l1 = l1 * h2;
    r.l2 = std::sqrt(l2 * h2);
    r.linf = linf;
    r.min = mn;
    return r;
}

FieldNorms norms(const SpectralField& f, Fft& fft) {
    const auto nodal = inverse_transform(f, fft);
    const auto nn = nodal_norms(f.grid, nodal);
    return FieldNorms{nn.l1, nn.l2, nn.linf, h1_seminorm(f)};
}

void apply_dealias(SpectralField& f) {
    const int n = f.grid.n;
    const double cut2 = (static_cast<double>(n) * n) / 9.0;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j)
            if (kx * kx + static_cast<double>(j) * j > cut2) f.at(i, j) = cplx(0.0, 0.0);
    }
}

double tail_spectrum_fraction(const SpectralField& f) {
    const int n = f.grid.n;
    const double cut2 = (static_cast<double>(n) * n) / 9.0;
    double total = 0.0, tail = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            const double m = hermitian_weight(j, n) * std::norm(f.at(i, j));
            total += m;
            if (kx * kx + static_cast<double>(j) * j > cut2) tail += m;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

bool all_finite(const SpectralField& f) {
    for (const auto& z : f.c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double kinetic_energy_spectral(const VelocityField& u) {
    const int n = u.u1.grid.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n / 2; ++j)
            s += hermitian_weight(j, n) * (std::norm(u.u1.at(i, j)) + std::norm(u.u2.at(i, j)));
    return 0.5 * two_pi * two_pi * s;
}

} // namespace vvlab
