#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace vvlab {

namespace {
// FFTW's planner is not thread-safe; execution of existing plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(GridSpec grid) : grid_(grid) {
    const int n = grid_.n;
    std::lock_guard<std::mutex> lock(planner_mutex());
    rbuf_ = fftw_alloc_real(grid_.nodal_count());
    cbuf_ = fftw_alloc_complex(grid_.spectral_count());
    // FFTW_ESTIMATE: plan choice depends only on the size, keeping roundoff
    // bit-reproducible across runs and machines with the same binary.
    plan_r2c_ = fftw_plan_dft_r2c_2d(n, n, rbuf_, static_cast<fftw_complex*>(cbuf_),
                                     FFTW_ESTIMATE);
    plan_c2r_ = fftw_plan_dft_c2r_2d(n, n, static_cast<fftw_complex*>(cbuf_), rbuf_,
                                     FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
    fftw_free(rbuf_);
    fftw_free(static_cast<fftw_complex*>(cbuf_));
}

void Fft::forward(const double* nodal, std::complex<double>* coeffs) {
    std::memcpy(rbuf_, nodal, grid_.nodal_count() * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_r2c_));
    const double scale = 1.0 / static_cast<double>(grid_.nodal_count());
    const auto* out = static_cast<const fftw_complex*>(cbuf_);
    for (std::size_t m = 0; m < grid_.spectral_count(); ++m)
        coeffs[m] = std::complex<double>(out[m][0] * scale, out[m][1] * scale);
}

void Fft::inverse(const std::complex<double>* coeffs, double* nodal) {
    auto* in = static_cast<fftw_complex*>(cbuf_);
    for (std::size_t m = 0; m < grid_.spectral_count(); ++m) {
        in[m][0] = coeffs[m].real();
        in[m][1] = coeffs[m].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_c2r_));
    std::memcpy(nodal, rbuf_, grid_.nodal_count() * sizeof(double));
}

std::vector<std::complex<double>> Fft::forward(const std::vector<double>& nodal) {
    if (nodal.size() != grid_.nodal_count())
        throw ConfigError("transform input size does not match grid");
    std::vector<std::complex<double>> out(grid_.spectral_count());
    forward(nodal.data(), out.data());
    return out;
}

std::vector<double> Fft::inverse(const std::vector<std::complex<double>>& coeffs) {
    if (coeffs.size() != grid_.spectral_count())
        throw ConfigError("transform input size does not match grid");
    std::vector<double> out(grid_.nodal_count());
    inverse(coeffs.data(), out.data());
    return out;
}

void Fft::forward(const std::vector<double>& nodal,
                  std::vector<std::complex<double>>& coeffs) {
    if (nodal.size() != grid_.nodal_count() || coeffs.size() != grid_.spectral_count())
        throw ConfigError("transform buffer size does not match grid");
    forward(nodal.data(), coeffs.data());
}

void Fft::inverse(const std::vector<std::complex<double>>& coeffs,
                  std::vector<double>& nodal) {
    if (coeffs.size() != grid_.spectral_count() || nodal.size() != grid_.nodal_count())
        throw ConfigError("transform buffer size does not match grid");
    inverse(coeffs.data(), nodal.data());
}

} // namespace vvlab
