#pragma once

#include <functional>
#include <string>
#include <vector>

#include "field.hpp"

namespace vvlab {

// Time-step selection. "cfl" recomputes dt each step from the current
// maximum speed; "fixed" uses dt_fixed throughout. Both are capped by
// dt_max, and every step is clipped so samples land exactly on the
// requested times.
enum class DtPolicy { fixed, cfl };

struct SolverConfig {
    GridSpec grid{16};
    double nu = 0.0;
    double t_end = 0.0;
    DtPolicy dt_policy = DtPolicy::cfl;
    double dt_fixed = 0.0;
    double cfl_safety = 0.5;
    double dt_max = 1e-2;
    bool dealias = true;
    // Test hook: with advection off the velocity is treated as zero and the
    // scheme reduces to the exact integrating-factor heat flow.
    bool advect = true;
    // Strictly increasing, starts at 0, ends at t_end.
    std::vector<double> sample_times;

    void validate() const;
};

// Full prognostic state: vorticity plus the passively advected pair
// (f, Omega) that decomposes it, all in spectral storage, plus running
// time integrals of enstrophy and gradient enstrophy accumulated with
// the same Runge-Kutta stage weights as the state itself.
struct FlowState {
    double t = 0.0;
    SpectralField omega;
    SpectralField f;
    SpectralField Omega;
    double int_enstrophy = 0.0;       // int_0^t ||omega(s)||_L2^2 ds
    double int_grad_enstrophy = 0.0;  // int_0^t ||grad omega(s)||_L2^2 ds

    explicit FlowState(GridSpec g) : omega(g), f(g), Omega(g) {}
};

// dt = safety * h / max(max_speed, floor), capped by dt_max.
double cfl_dt(double max_speed, double h, double safety, double dt_max);

// Integrating-factor RK4 stepper for 2D vorticity transport with
// viscosity. Owns the FFT plans and work buffers for one grid; not
// shareable across threads.
class Stepper {
  public:
    Stepper(GridSpec grid, const SolverConfig& cfg);

    Fft& fft() { return fft_; }
    const SolverConfig& config() const { return cfg_; }

    // Advances state by dt (one IFRK4 step). The velocity at each stage is
    // recovered from that stage's vorticity and advects omega, f and Omega
    // jointly, so f + Omega = omega is preserved to roundoff.
    void step(FlowState& s, double dt);

    // Nodal max |u| for the velocity induced by s.omega (0 when advection
    // is disabled).
    double max_speed(const FlowState& s);

    // Next step size under the configured policy, clipped to not overshoot
    // t_limit.
    double next_dt(FlowState& s, double t_limit);

  private:
    struct StageBuf {
        SpectralField omega, f, Omega;
        explicit StageBuf(GridSpec g) : omega(g), f(g), Omega(g) {}
    };

    // Transport tendencies -u.grad(omega,f,Omega) for the given stage
    // state; returns max speed. Tendencies are dealiased (products only),
    // mean-free and Nyquist-free.
    double tendency(const SpectralField& w, const SpectralField& ff,
                    const SpectralField& Om, StageBuf& out);
    void build_damping(double dt);

    SolverConfig cfg_;
    Fft fft_;
    std::vector<double> damp_;       // exp(-nu |k|^2 dt/2), per coefficient
    double damp_dt_ = -1.0;
    std::vector<double> u1_, u2_, gx_, gy_, adv_;  // nodal scratch
    std::vector<cplx> spec_scratch_;
    StageBuf a_, b_, c_, s1_, s2_, s3_, s4_;
};

// Per-sample callback: invoked at every entry of sample_times (including
// t = 0) with the exact-time state.
using SampleFn = std::function<void(const FlowState&)>;

// Drives the stepper from t=0 to t_end, clipping steps onto sample times.
// Throws BlowupError when the state loses finiteness; the callback has
// already seen every sample completed before the failure.
void integrate(const SolverConfig& cfg, FlowState& state, Stepper& stepper,
               const SampleFn& on_sample);

}  // namespace vvlab
