#include "solver.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace vvlab {

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (dt_policy == DtPolicy::fixed) {
        if (!(dt_fixed > 0.0)) throw ConfigError("dt_fixed must be positive");
    } else {
        if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
            throw ConfigError("cfl_safety must lie in (0, 1]");
    }
    if (!(dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (sample_times.empty()) throw ConfigError("sample_times must be nonempty");
    if (sample_times.front() != 0.0) throw ConfigError("sample_times must start at 0");
    for (size_t i = 1; i < sample_times.size(); ++i)
        if (!(sample_times[i] > sample_times[i - 1]))
            throw ConfigError("sample_times must be strictly increasing");
    if (std::abs(sample_times.back() - t_end) > 1e-12 * std::max(1.0, t_end))
        throw ConfigError("sample_times must end at t_end");
}

double cfl_dt(double max_speed, double h, double safety, double dt_max) {
    const double floor = 1e-12;
    return std::min(safety * h / std::max(max_speed, floor), dt_max);
}

Stepper::Stepper(GridSpec grid, const SolverConfig& cfg)
    : cfg_(cfg),
      fft_(grid),
      u1_(grid.nodal_count()),
      u2_(grid.nodal_count()),
      gx_(grid.nodal_count()),
      gy_(grid.nodal_count()),
      adv_(grid.nodal_count()),
      a_(grid),
      b_(grid),
      c_(grid),
      s1_(grid),
      s2_(grid),
      s3_(grid),
      s4_(grid) {
    if (!(grid == cfg.grid)) throw ConfigError("stepper grid does not match config");
    damp_.resize(grid.spectral_count());
}

void Stepper::build_damping(double dt) {
    if (dt == damp_dt_) return;
    const int n = cfg_.grid.n;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j <= n / 2; ++j) {
            const double k2 = kx * kx + static_cast<double>(j) * j;
            damp_[static_cast<size_t>(i) * (n / 2 + 1) + j] =
                std::exp(-0.5 * cfg_.nu * k2 * dt);
        }
    }
    damp_dt_ = dt;
}

namespace {

// Zeroes the mean and the Nyquist row/column. Transport tendencies carry
// no mass, and Nyquist modes have no consistent odd derivative, so both
// are stripped from every tendency before use.
void strip_mean_and_nyquist(SpectralField& f) {
    const int n = f.grid.n;
    f.at(0, 0) = cplx(0.0, 0.0);
    for (int j = 0; j <= n / 2; ++j) f.at(n / 2, j) = cplx(0.0, 0.0);
    for (int i = 0; i < n; ++i) f.at(i, n / 2) = cplx(0.0, 0.0);
}

}  // namespace

double Stepper::tendency(const SpectralField& w, const SpectralField& ff,
                         const SpectralField& Om, StageBuf& out) {
    const size_t m = cfg_.grid.nodal_count();
    if (!cfg_.advect) {
        std::fill(out.omega.c.begin(), out.omega.c.end(), cplx(0.0, 0.0));
        std::fill(out.f.c.begin(), out.f.c.end(), cplx(0.0, 0.0));
        std::fill(out.Omega.c.begin(), out.Omega.c.end(), cplx(0.0, 0.0));
        return 0.0;
    }
    const VelocityField vel = biot_savart(w);
    fft_.inverse(vel.u1.c, u1_);
    fft_.inverse(vel.u2.c, u2_);
    double umax = 0.0;
    for (size_t p = 0; p < m; ++p)
        umax = std::max(umax, std::sqrt(u1_[p] * u1_[p] + u2_[p] * u2_[p]));

    const SpectralField* in[3] = {&w, &ff, &Om};
    SpectralField* tout[3] = {&out.omega, &out.f, &out.Omega};
    for (int q = 0; q < 3; ++q) {
        SpectralField dx = derivative(*in[q], 1, 0);
        SpectralField dy = derivative(*in[q], 0, 1);
        fft_.inverse(dx.c, gx_);
        fft_.inverse(dy.c, gy_);
        for (size_t p = 0; p < m; ++p) adv_[p] = -(u1_[p] * gx_[p] + u2_[p] * gy_[p]);
        fft_.forward(adv_, tout[q]->c);
        if (cfg_.dealias) apply_dealias(*tout[q]);
        strip_mean_and_nyquist(*tout[q]);
    }
    return umax;
}

void Stepper::step(FlowState& s, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step requires dt > 0");
    build_damping(dt);
    const size_t nc = s.omega.c.size();
    const double t_before = s.t;

    const double g1 = l2_norm_sq(s.omega);
    const double gg1 = h1_seminorm_sq(s.omega);
    tendency(s.omega, s.f, s.Omega, s1_);

    for (size_t p = 0; p < nc; ++p) {
        const double d = damp_[p];
        a_.omega.c[p] = d * (s.omega.c[p] + 0.5 * dt * s1_.omega.c[p]);
        a_.f.c[p] = d * (s.f.c[p] + 0.5 * dt * s1_.f.c[p]);
        a_.Omega.c[p] = d * (s.Omega.c[p] + 0.5 * dt * s1_.Omega.c[p]);
    }
    const double g2 = l2_norm_sq(a_.omega);
    const double gg2 = h1_seminorm_sq(a_.omega);
    tendency(a_.omega, a_.f, a_.Omega, s2_);

    for (size_t p = 0; p < nc; ++p) {
        const double d = damp_[p];
        b_.omega.c[p] = d * s.omega.c[p] + 0.5 * dt * s2_.omega.c[p];
        b_.f.c[p] = d * s.f.c[p] + 0.5 * dt * s2_.f.c[p];
        b_.Omega.c[p] = d * s.Omega.c[p] + 0.5 * dt * s2_.Omega.c[p];
    }
    const double g3 = l2_norm_sq(b_.omega);
    const double gg3 = h1_seminorm_sq(b_.omega);
    tendency(b_.omega, b_.f, b_.Omega, s3_);

    for (size_t p = 0; p < nc; ++p) {
        const double d = damp_[p];
        c_.omega.c[p] = d * (d * s.omega.c[p] + dt * s3_.omega.c[p]);
        c_.f.c[p] = d * (d * s.f.c[p] + dt * s3_.f.c[p]);
        c_.Omega.c[p] = d * (d * s.Omega.c[p] + dt * s3_.Omega.c[p]);
    }
    const double g4 = l2_norm_sq(c_.omega);
    const double gg4 = h1_seminorm_sq(c_.omega);
    tendency(c_.omega, c_.f, c_.Omega, s4_);

    // w' = D(D(w + dt/6 s1) + dt/3 (s2+s3)) + dt/6 s4, exact for pure heat.
    const double w6 = dt / 6.0, w3 = dt / 3.0;
    for (size_t p = 0; p < nc; ++p) {
        const double d = damp_[p];
        s.omega.c[p] = d * (d * (s.omega.c[p] + w6 * s1_.omega.c[p]) +
                            w3 * (s2_.omega.c[p] + s3_.omega.c[p])) +
                       w6 * s4_.omega.c[p];
        s.f.c[p] = d * (d * (s.f.c[p] + w6 * s1_.f.c[p]) +
                        w3 * (s2_.f.c[p] + s3_.f.c[p])) +
                   w6 * s4_.f.c[p];
        s.Omega.c[p] = d * (d * (s.Omega.c[p] + w6 * s1_.Omega.c[p]) +
                            w3 * (s2_.Omega.c[p] + s3_.Omega.c[p])) +
                       w6 * s4_.Omega.c[p];
    }
    s.int_enstrophy += w6 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
    s.int_grad_enstrophy += w6 * (gg1 + 2.0 * gg2 + 2.0 * gg3 + gg4);
    s.t = t_before + dt;

    if (!std::isfinite(s.int_enstrophy) || !std::isfinite(s.int_grad_enstrophy) ||
        !all_finite(s.omega))
        throw BlowupError(t_before, dt);
}

double Stepper::max_speed(const FlowState& s) {
    if (!cfg_.advect) return 0.0;
    const VelocityField vel = biot_savart(s.omega);
    fft_.inverse(vel.u1.c, u1_);
    fft_.inverse(vel.u2.c, u2_);
    double umax = 0.0;
    const size_t m = cfg_.grid.nodal_count();
    for (size_t p = 0; p < m; ++p)
        umax = std::max(umax, std::sqrt(u1_[p] * u1_[p] + u2_[p] * u2_[p]));
    return umax;
}

double Stepper::next_dt(FlowState& s, double t_limit) {
    double base = cfg_.dt_policy == DtPolicy::fixed
                      ? std::min(cfg_.dt_fixed, cfg_.dt_max)
                      : cfl_dt(max_speed(s), cfg_.grid.h(), cfg_.cfl_safety, cfg_.dt_max);
    const double remaining = t_limit - s.t;
    // Absorb a sub-1% overhang into the final step instead of taking a
    // sliver step; the integrating factor is exact for any partition.
    if (remaining <= base * 1.01) return remaining;
    return base;
}

void integrate(const SolverConfig& cfg, FlowState& state, Stepper& stepper,
               const SampleFn& on_sample) {
    cfg.validate();
    if (!(state.omega.grid == cfg.grid)) throw ConfigError("state grid does not match config");
    if (state.t != 0.0) throw ConfigError("integration starts at t = 0");

    on_sample(state);
    for (size_t si = 1; si < cfg.sample_times.size(); ++si) {
        const double ts = cfg.sample_times[si];
        const double snap = 1e-12 * std::max(1.0, ts);
        while (state.t < ts - snap) {
            const double dt = stepper.next_dt(state, ts);
            stepper.step(state, dt);
        }
        state.t = ts;
        on_sample(state);
    }
}

}  // namespace vvlab
