#pragma once

#include <complex>
#include <vector>

#include "grid.hpp"

namespace vvlab {

// Real <-> half-plane-complex transforms for one grid size.
//
// Normalization (fixed project-wide): spectral coefficients are Fourier
// series coefficients, f(x) = sum_k f_hat(k) e^{i k.x}. forward() divides the
// raw DFT by n^2; inverse() is plain synthesis. Under this convention
//   sum_nodes |f|^2 h^2 = (2pi)^2 sum_k |f_hat(k)|^2.
//
// An instance owns FFTW plans plus scratch buffers, so it is cheap to call
// but NOT safe to share between threads; each worker owns one.
class Fft {
public:
    explicit Fft(GridSpec grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    const GridSpec& grid() const { return grid_; }

    // nodal has nodal_count() reals; coeffs has spectral_count() complexes.
    void forward(const double* nodal, std::complex<double>* coeffs);
    void inverse(const std::complex<double>* coeffs, double* nodal);

    std::vector<std::complex<double>> forward(const std::vector<double>& nodal);
    std::vector<double> inverse(const std::vector<std::complex<double>>& coeffs);

    // Size-checked overloads writing into preallocated outputs.
    void forward(const std::vector<double>& nodal,
                 std::vector<std::complex<double>>& coeffs);
    void inverse(const std::vector<std::complex<double>>& coeffs,
                 std::vector<double>& nodal);

private:
    GridSpec grid_;
    double* rbuf_;          // fftw-aligned n*n
    void* cbuf_;            // fftw-aligned n*(n/2+1) fftw_complex
    void* plan_r2c_;
    void* plan_c2r_;
};

} // namespace vvlab
