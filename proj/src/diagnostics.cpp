#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace vvlab {

namespace {
constexpr double kPiHalf = two_pi / 4.0;

double beta_of(double s, BetaKind kind) {
    return kind == BetaKind::slog ? s * std::log1p(s) : s * s;
}

// Correlation scan shared by the public op and the engine: given the
// spectrum of |omega| and of the disk indicator, returns max over centers
// of the windowed sum, with the lexicographically smallest maximizer.
ConcentrationValue correlate_and_scan(GridSpec grid, const std::vector<cplx>& absw_hat,
                                      const SpectralField& mask_spec, Fft& fft,
                                      std::vector<cplx>& cbuf, std::vector<double>& nbuf) {
    const int n = grid.n;
    const double nn = static_cast<double>(n) * n;
    for (size_t m = 0; m < absw_hat.size(); ++m)
        cbuf[m] = nn * absw_hat[m] * std::conj(mask_spec.c[m]);
    fft.inverse(cbuf, nbuf);

    ConcentrationValue best;
    best.value = nbuf[0];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = nbuf[static_cast<size_t>(i) * n + j];
            if (v > best.value) {
                best.value = v;
                best.ci = i;
                best.cj = j;
            }
        }
    best.value = std::max(best.value * grid.h() * grid.h(), 0.0);
    return best;
}

struct SplitInputs {
    const SpectralField* kernel_spec;
    const KernelStats* stats;
    double alpha_eff;
    double l1_omega;
    double grad_sq;
    double conc_alpha;  // C(alpha_eff), NaN if alpha_eff < h
};

SplitRecord split_core(const SpectralField& omega, double eta, Fft& fft,
                       const SplitInputs& in) {
    SplitRecord rec;
    rec.eta = eta;
    rec.alpha = in.alpha_eff;
    rec.resolved = in.alpha_eff >= 2.0 * omega.grid.h() * (1.0 - 1e-12);
    rec.kernel_sup_scaled = in.stats->sup_scaled;
    rec.kernel_sup_over_mean = in.stats->sup_over_mean;

    SpectralField omega1 = convolve(omega, *in.kernel_spec);
    const auto nodal1 = inverse_transform(omega1, fft);
    const auto nn1 = nodal_norms(omega.grid, nodal1);
    rec.omega1_l1 = nn1.l1;
    rec.omega1_linf = nn1.linf;
    rec.omega1_l2 = l2_norm(omega1);

    SpectralField omega2 = omega;
    for (size_t m = 0; m < omega2.c.size(); ++m) omega2.c[m] -= omega1.c[m];
    rec.omega2_l2 = l2_norm(omega2);

    rec.r1_l1 = rec.omega1_l1 - in.l1_omega;
    rec.r1_linf = std::isfinite(in.conc_alpha)
                      ? rec.omega1_linf * in.alpha_eff * in.alpha_eff - in.conc_alpha
                      : kNaN;
    rec.r2 = in.grad_sq > 0.0
                 ? rec.omega2_l2 * rec.omega2_l2 / (in.alpha_eff * in.alpha_eff * in.grad_sq)
                 : 0.0;
    return rec;
}

double fit_intercept_slope(const std::vector<std::pair<double, double>>& pts, double* slope) {
    const size_t n = pts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sx += p.first;
        sy += p.second;
        sxx += p.first * p.first;
        sxy += p.first * p.second;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) {
        *slope = 0.0;
        return n ? sy / n : 0.0;
    }
    const double b = (n * sxy - sx * sy) / det;
    *slope = b;
    return (sy - b * sx) / n;
}

}  // namespace

double kinetic_energy(const VelocityField& u, Fft& fft) {
    const auto n1 = inverse_transform(u.u1, fft);
    const auto n2 = inverse_transform(u.u2, fft);
    double s = 0.0;
    for (size_t p = 0; p < n1.size(); ++p) s += n1[p] * n1[p] + n2[p] * n2[p];
    const double h = u.u1.grid.h();
    return 0.5 * s * h * h;
}

SpectralField disk_mask_spectrum(GridSpec grid, double R, Fft& fft) {
    if (!(R >= grid.h())) throw ConfigError("concentration radius must be at least h");
    const int n = grid.n;
    const double h = grid.h();
    std::vector<double> mask(grid.nodal_count(), 0.0);
    const double r2 = R * R;
    // Node membership from integer min-image offsets so that boundary ties
    // are decided identically no matter how the centre coordinate arose.
    for (int i = 0; i < n; ++i) {
        const double dx = std::min(i, n - i) * h;
        for (int j = 0; j < n; ++j) {
            const double dy = std::min(j, n - j) * h;
            if (dx * dx + dy * dy <= r2) mask[static_cast<size_t>(i) * n + j] = 1.0;
        }
    }
    SpectralField out(grid);
    fft.forward(mask, out.c);
    return out;
}

ConcentrationValue concentration_function(GridSpec grid, const std::vector<double>& absw,
                                          double R, Fft& fft,
                                          const SpectralField* mask_spectrum) {
    if (absw.size() != grid.nodal_count())
        throw ConfigError("field size does not match grid");
    SpectralField local(grid);
    const SpectralField* mask = mask_spectrum;
    if (mask == nullptr) {
        local = disk_mask_spectrum(grid, R, fft);
        mask = &local;
    } else if (!(R >= grid.h())) {
        throw ConfigError("concentration radius must be at least h");
    }
    std::vector<cplx> absw_hat(grid.spectral_count());
    fft.forward(absw, absw_hat);
    std::vector<cplx> cbuf(grid.spectral_count());
    std::vector<double> nbuf(grid.nodal_count());
    return correlate_and_scan(grid, absw_hat, *mask, fft, cbuf, nbuf);
}

SplitRecord mollifier_split(const SpectralField& omega, double eta, double nu, Fft& fft) {
    if (!(eta > 0.0) || !(nu > 0.0)) throw ConfigError("split requires eta > 0 and nu > 0");
    const GridSpec grid = omega.grid;
    const double alpha_eff = std::min(eta * std::sqrt(nu), kPiHalf * 2.0);

    const auto kernel = bump_kernel_nodal(grid, alpha_eff);
    const KernelStats ks = kernel_stats(grid, kernel, alpha_eff);
    SpectralField kspec(grid);
    fft.forward(kernel, kspec.c);

    const auto nodal = inverse_transform(omega, fft);
    std::vector<double> absw(nodal.size());
    for (size_t p = 0; p < nodal.size(); ++p) absw[p] = std::abs(nodal[p]);
    const double l1 = nodal_norms(grid, nodal).l1;
    const double grad_sq = h1_seminorm_sq(omega);
    double conc = kNaN;
    if (alpha_eff >= grid.h())
        conc = concentration_function(grid, absw, alpha_eff, fft).value;

    SplitInputs in{&kspec, &ks, alpha_eff, l1, grad_sq, conc};
    return split_core(omega, eta, fft, in);
}

EquiProfile equi_integrability_profile(GridSpec grid, const std::vector<double>& f,
                                       const std::vector<double>& lambdas, BetaKind beta) {
    if (f.size() != grid.nodal_count()) throw ConfigError("field size does not match grid");
    for (size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] > 0.0)) throw ConfigError("thresholds must be positive");
        if (k > 0 && !(lambdas[k] > lambdas[k - 1]))
            throw ConfigError("thresholds must be strictly increasing");
    }
    EquiProfile out;
    const double h2 = grid.h() * grid.h();
    double bsum = 0.0;
    for (double v : f) bsum += beta_of(std::abs(v), beta);
    out.beta_value = bsum * h2;
    for (double lam : lambdas) {
        double tail = 0.0;
        for (double v : f)
            if (std::abs(v) > lam) tail += std::abs(v);
        out.tails.emplace_back(lam, tail * h2);
    }
    return out;
}

AprioriAudit apriori_bounds_audit(const DiagnosticsRecord& r, double u0_l2, double M) {
    AprioriAudit a;
    if (r.t > 0.0 && u0_l2 > 0.0) {
        a.decay_checked = true;
        a.decay_slack = std::sqrt(r.enstrophy * 2.0 * r.t * r.nu) / u0_l2 - 1.0;
        a.decay_ok = a.decay_slack <= 1e-6;
        if (std::isfinite(r.conc_sqrtnu)) {
            a.disk_checked = true;
            a.disk_slack = r.conc_sqrtnu * std::sqrt(2.0 * r.t) / u0_l2 - 1.0;
            a.disk_ok = a.disk_slack <= 1e-6;
        }
    }
    a.mass_ratio = M > 0.0 ? r.l1_vorticity / M : 0.0;
    a.mass_ok = a.mass_ratio <= 1.0 + 1e-4;
    return a;
}

double dissipation_integral(const std::vector<DiagnosticsRecord>& records, double nu,
                            double a, double b) {
    if (!(b > a)) throw ConfigError("dissipation window must have b > a");
    const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    size_t ia = records.size(), ib = records.size();
    for (size_t k = 0; k < records.size(); ++k) {
        if (std::abs(records[k].t - a) <= tol) ia = k;
        if (std::abs(records[k].t - b) <= tol) ib = k;
    }
    if (ia >= records.size() || ib >= records.size())
        throw ConfigError("dissipation window endpoints must be sample nodes");
    if (ib - ia + 1 < 3) throw ConfigError("dissipation window needs at least 3 samples");
    double sum = 0.0;
    for (size_t k = ia; k < ib; ++k)
        sum += 0.5 * (records[k].enstrophy + records[k + 1].enstrophy) *
               (records[k + 1].t - records[k].t);
    return nu * sum;
}

RightContinuityProbe energy_right_continuity_probe(const std::vector<DiagnosticsRecord>& records,
                                                   double delta) {
    if (records.empty()) throw ConfigError("right-continuity probe needs records");
    const double e0 = records.front().energy;
    RightContinuityProbe probe;
    size_t in_window = 0;
    probe.min_gap_all = 0.0;
    for (const auto& r : records) {
        const double gap = e0 - r.energy;
        probe.min_gap_all = std::min(probe.min_gap_all, gap);
        if (r.t <= delta * (1.0 + 1e-12)) {
            ++in_window;
            if (r.t > 0.0) probe.gaps.emplace_back(r.t, gap);
        }
    }
    if (in_window < 3) throw ConfigError("right-continuity probe needs 3 samples in [0, delta]");
    probe.fitted_gap0 = fit_intercept_slope(probe.gaps, &probe.fitted_slope);
    return probe;
}

std::vector<double> radius_ladder(GridSpec grid, double nu, double eta) {
    std::vector<double> out;
    const double h = grid.h();
    for (double r = 2.0 * h; r <= kPiHalf * (1.0 + 1e-12); r *= 2.0) out.push_back(r);
    if (out.empty() || out.back() < kPiHalf * (1.0 - 1e-12)) out.push_back(kPiHalf);
    const double rnu = std::sqrt(nu);
    const double ra = std::min(eta * rnu, two_pi / 2.0);
    if (rnu >= h * (1.0 - 1e-12)) out.push_back(rnu);
    if (ra >= h * (1.0 - 1e-12)) out.push_back(ra);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double x, double y) {
                              return std::abs(x - y) <= 1e-12 * std::max(x, y);
                          }),
              out.end());
    return out;
}

DiagnosticsEngine::DiagnosticsEngine(GridSpec grid, double nu,
                                     const DiagnosticsSettings& settings, Fft& fft)
    : grid_(grid), nu_(nu), settings_(settings), fft_(fft), kernel_spec_(grid) {
    if (!(nu > 0.0)) throw ConfigError("diagnostics require nu > 0");
    if (!(settings.eta > 0.0)) throw ConfigError("eta must be positive");
    ladder_ = radius_ladder(grid, nu, settings.eta);
    alpha_ = std::min(settings.eta * std::sqrt(nu), two_pi / 2.0);
    const auto kernel = bump_kernel_nodal(grid, alpha_);
    kernel_stats_ = kernel_stats(grid, kernel, alpha_);
    fft_.forward(kernel, kernel_spec_.c);
}

void DiagnosticsEngine::set_reference(const FlowState& s0, const InitialDatum& datum) {
    const auto nodal = inverse_transform(s0.omega, fft_);
    const auto nn = nodal_norms(grid_, nodal);
    e0_ = kinetic_energy_spectral(biot_savart(s0.omega));
    u0_l2_ = std::sqrt(2.0 * e0_);
    enstrophy0_ = l2_norm_sq(s0.omega);
    mass0_ = nn.l1;
    omega0_linf_ = nn.linf;
    double om = 0.0;
    for (double v : datum.Omega0) om = std::max(om, std::abs(v));
    Omega0_linf_ = om;
    have_reference_ = true;
}

DiagnosticsRecord DiagnosticsEngine::make_record(const FlowState& s,
                                                 const DiagnosticsRecord* prev) {
    if (!have_reference_) throw ConfigError("diagnostics reference not set");
    DiagnosticsRecord r;
    r.t = s.t;
    r.nu = nu_;

    const auto nodal = inverse_transform(s.omega, fft_);
    const auto nn = nodal_norms(grid_, nodal);
    r.l1_vorticity = nn.l1;
    r.linf_vorticity = nn.linf;
    r.enstrophy = l2_norm_sq(s.omega);
    r.grad_enstrophy = h1_seminorm_sq(s.omega);
    r.energy = kinetic_energy_spectral(biot_savart(s.omega));

    std::vector<double> absw(nodal.size());
    for (size_t p = 0; p < nodal.size(); ++p) absw[p] = std::abs(nodal[p]);
    std::vector<cplx> absw_hat(grid_.spectral_count());
    fft_.forward(absw, absw_hat);
    std::vector<cplx> cbuf(grid_.spectral_count());
    std::vector<double> nbuf(grid_.nodal_count());
    for (double R : ladder_) {
        auto it = mask_cache_.find(R);
        if (it == mask_cache_.end())
            it = mask_cache_.emplace(R, disk_mask_spectrum(grid_, R, fft_)).first;
        const auto cv = correlate_and_scan(grid_, absw_hat, it->second, fft_, cbuf, nbuf);
        r.concentration.emplace_back(R, cv.value);
    }
    auto lookup = [&](double R) {
        for (const auto& p : r.concentration)
            if (std::abs(p.first - R) <= 1e-12 * std::max(p.first, R)) return p.second;
        return kNaN;
    };
    r.conc_sqrtnu = lookup(std::sqrt(nu_));
    r.conc_eta_sqrtnu = lookup(alpha_);

    SplitInputs in{&kernel_spec_, &kernel_stats_, alpha_,
                   r.l1_vorticity, r.grad_enstrophy, r.conc_eta_sqrtnu};
    r.split = split_core(s.omega, settings_.eta, fft_, in);

    const auto f_nodal = inverse_transform(s.f, fft_);
    const auto O_nodal = inverse_transform(s.Omega, fft_);
    const auto fn = nodal_norms(grid_, f_nodal);
    const auto on = nodal_norms(grid_, O_nodal);
    r.f_norms = {fn.l1, fn.l2, fn.linf, fn.min};
    r.Omega_norms = {on.l1, on.l2, on.linf, on.min};
    double defect = 0.0;
    for (size_t p = 0; p < nodal.size(); ++p)
        defect = std::max(defect, std::abs(f_nodal[p] + O_nodal[p] - nodal[p]));
    r.split_linearity = defect;

    const auto prof =
        equi_integrability_profile(grid_, f_nodal, settings_.lambda_list, settings_.beta);
    r.beta_f = prof.beta_value;
    r.f_tails = prof.tails;

    r.tail_fraction = tail_spectrum_fraction(s.omega);
    r.resolved = r.tail_fraction <= 1e-6;

    r.int_enstrophy = s.int_enstrophy;
    r.int_grad_enstrophy = s.int_grad_enstrophy;

    r.res_energy = std::abs(e0_) > 0.0
                       ? (r.energy + nu_ * r.int_enstrophy - e0_) / e0_
                       : r.energy + nu_ * r.int_enstrophy - e0_;
    if (prev != nullptr) {
        const double dt = r.t - prev->t;
        r.res_enstrophy = ((r.enstrophy - prev->enstrophy) +
                           2.0 * nu_ * (r.int_grad_enstrophy - prev->int_grad_enstrophy)) /
                          dt;
    }
    r.res_mollifier_l1 = r.split.r1_l1;
    r.res_split_ratio = r.split.r2;
    if (r.t > 0.0 && u0_l2_ > 0.0) {
        r.res_decay = std::sqrt(r.enstrophy * 2.0 * r.t * nu_) / u0_l2_ - 1.0;
        if (std::isfinite(r.conc_sqrtnu))
            r.res_disk = r.conc_sqrtnu * std::sqrt(2.0 * r.t) / u0_l2_ - 1.0;
    }
    return r;
}

Trajectory run_trajectory(const SolverConfig& cfg, const InitialDatum& datum,
                          const DiagnosticsSettings& settings, const SampleHook& hook) {
    if (!(cfg.grid == datum.grid)) throw ConfigError("datum grid does not match config");
    cfg.validate();

    Fft fft(cfg.grid);
    FlowState state(cfg.grid);
    fft.forward(datum.omega0, state.omega.c);
    state.omega.at(0, 0) = cplx(0.0, 0.0);
    fft.forward(datum.f0, state.f.c);
    fft.forward(datum.Omega0, state.Omega.c);

    Stepper stepper(cfg.grid, cfg);
    DiagnosticsEngine engine(cfg.grid, cfg.nu, settings, fft);
    engine.set_reference(state, datum);

    Trajectory traj;
    traj.nu = cfg.nu;
    traj.config = cfg;
    traj.datum = datum.meta;
    traj.e0 = engine.e0();
    traj.u0_l2 = engine.u0_l2();
    traj.mass0 = engine.mass0();
    traj.omega0_linf = engine.omega0_linf();
    traj.flags.split_resolved =
        settings.eta * std::sqrt(cfg.nu) >= 2.0 * cfg.grid.h() * (1.0 - 1e-12);

    size_t idx = 0;
    try {
        integrate(cfg, state, stepper, [&](const FlowState& fs) {
            const DiagnosticsRecord* prev =
                traj.records.empty() ? nullptr : &traj.records.back();
            traj.records.push_back(engine.make_record(fs, prev));
            if (hook) hook(idx, fs);
            ++idx;
        });
    } catch (const BlowupError& e) {
        traj.flags.completed = false;
        traj.flags.blowup_t = e.t;
        traj.flags.blowup_dt = e.dt;
    }
    for (const auto& r : traj.records) traj.flags.resolved = traj.flags.resolved && r.resolved;
    return traj;
}

}  // namespace vvlab
