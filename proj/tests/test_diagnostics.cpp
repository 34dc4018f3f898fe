#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "diagnostics.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "initial_data.hpp"
#include "support/oracles.hpp"

using namespace vvlab;

namespace {
constexpr double kPi = 3.141592653589793;

SpectralField spectral_of(GridSpec g, const std::vector<double>& nodal, Fft& fft) {
    SpectralField f(g);
    fft.forward(nodal, f.c);
    return f;
}

std::vector<double> taylor_green_nodal(GridSpec g) {
    std::vector<double> w(g.nodal_count());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            w[static_cast<size_t>(i) * g.n + j] =
                -2.0 * std::cos(i * g.h()) * std::cos(j * g.h());
    return w;
}
}  // namespace

TEST_CASE("kinetic energy: cellular closed form, zero field, quadratic scaling") {
    const GridSpec g(64);
    Fft fft(g);
    SpectralField w = spectral_of(g, taylor_green_nodal(g), fft);
    w.at(0, 0) = cplx(0.0, 0.0);
    const VelocityField u = biot_savart(w);
    const double pi2 = kPi * kPi;
    CHECK(kinetic_energy(u, fft) == doctest::Approx(pi2).epsilon(1e-12));
    CHECK(kinetic_energy(u, fft) ==
          doctest::Approx(kinetic_energy_spectral(u)).epsilon(1e-12));

    VelocityField u2 = u;
    for (auto& z : u2.u1.c) z *= 2.0;
    for (auto& z : u2.u2.c) z *= 2.0;
    CHECK(kinetic_energy(u2, fft) == doctest::Approx(4.0 * pi2).epsilon(1e-12));

    const VelocityField z = biot_savart(SpectralField(g));
    CHECK(kinetic_energy(z, fft) == 0.0);
}

TEST_CASE("dissipation integral: closed form, zero field, split additivity, errors") {
    const double nu = 0.1;
    const int K = 128;
    std::vector<DiagnosticsRecord> recs(K + 1);
    for (int k = 0; k <= K; ++k) {
        recs[k].t = static_cast<double>(k) / K;
        recs[k].enstrophy = 4.0 * kPi * kPi * std::exp(-4.0 * nu * recs[k].t);
    }
    const double exact = kPi * kPi * (1.0 - std::exp(-0.4));
    const double got = dissipation_integral(recs, nu, 0.0, 1.0);
    CHECK(got == doctest::Approx(exact).epsilon(2e-6));

    const double left = dissipation_integral(recs, nu, 0.0, 0.5);
    const double right = dissipation_integral(recs, nu, 0.5, 1.0);
    CHECK(left + right == doctest::Approx(got).epsilon(1e-15));

    for (auto& r : recs) r.enstrophy = 0.0;
    CHECK(dissipation_integral(recs, nu, 0.0, 1.0) == 0.0);

    CHECK_THROWS_AS(dissipation_integral(recs, nu, 0.0, 0.503), ConfigError);
    CHECK_THROWS_AS(dissipation_integral(recs, nu, 0.0, 1.0 / K), ConfigError);
    CHECK_THROWS_AS(dissipation_integral(recs, nu, 0.7, 0.2), ConfigError);
}

TEST_CASE("concentration matches brute force on seeded fields") {
    for (int n : {16, 32}) {
        const GridSpec g(n);
        Fft fft(g);
        const auto f = oracle::seeded_field(g, 1234u + n);
        std::vector<double> absw(f.size());
        for (size_t p = 0; p < f.size(); ++p) absw[p] = std::abs(f[p]);
        for (double mult : {2.0, 4.0, 8.0}) {
            const double R = mult * g.h();
            const auto cv = concentration_function(g, absw, R, fft);
            const double bf = oracle::concentration_brute_force(g, absw, R);
            CHECK(cv.value == doctest::Approx(bf).epsilon(1e-12));
        }
    }
}

TEST_CASE("concentration captures a compact bump fully and is translation invariant") {
    const GridSpec g(64);
    Fft fft(g);
    const double m = 1.7;
    const InitialDatum d = h2_point_vortex(g, m, kPi, kPi, 0.4);
    std::vector<double> absO(d.Omega0.size());
    for (size_t p = 0; p < absO.size(); ++p) absO[p] = std::abs(d.Omega0[p]);
    const auto cv = concentration_function(g, absO, 0.9, fft);
    CHECK(cv.value == doctest::Approx(m).epsilon(1e-10));

    // Uniform field: every center equivalent; value = c * disk node count * h^2
    // and the reported center is the lexicographically smallest one.
    std::vector<double> unif(g.nodal_count(), 0.3);
    const double R = 5.0 * g.h();
    int count = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double dx = std::min(i, g.n - i) * g.h();
            const double dy = std::min(j, g.n - j) * g.h();
            if (dx * dx + dy * dy <= R * R) ++count;
        }
    const auto cu = concentration_function(g, unif, R, fft);
    CHECK(cu.value == doctest::Approx(0.3 * count * g.h() * g.h()).epsilon(1e-12));
    CHECK(cu.ci == 0);
    CHECK(cu.cj == 0);
}

TEST_CASE("concentration is monotone in R and bounded by total mass") {
    const GridSpec g(32);
    Fft fft(g);
    const auto f = oracle::seeded_field(g, 77u);
    std::vector<double> absw(f.size());
    double l1 = 0.0;
    for (size_t p = 0; p < f.size(); ++p) {
        absw[p] = std::abs(f[p]);
        l1 += absw[p];
    }
    l1 *= g.h() * g.h();
    double prev = 0.0;
    for (double mult : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const auto cv = concentration_function(g, absw, mult * g.h(), fft);
        CHECK(cv.value >= prev - 1e-12 * std::max(1.0, prev));
        CHECK(cv.value <= l1 * (1.0 + 1e-10));
        prev = cv.value;
    }
    CHECK_THROWS_AS(concentration_function(g, absw, 0.5 * g.h(), fft), ConfigError);
}

TEST_CASE("mollifier split reproduces the closed-form single-mode damping") {
    const GridSpec g(64);
    Fft fft(g);
    const double nu = 0.25, eta = 8.0 * g.h() / std::sqrt(nu);
    const double alpha = eta * std::sqrt(nu);

    std::vector<double> w(g.nodal_count());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            w[static_cast<size_t>(i) * g.n + j] = std::cos(3.0 * i * g.h());
    const SpectralField ws = spectral_of(g, w, fft);

    const auto kernel = bump_kernel_nodal(g, alpha);
    const double tau =
        two_pi * two_pi * oracle::dft_coeff_direct(g, kernel, 3, 0).real();

    const SplitRecord sr = mollifier_split(ws, eta, nu, fft);
    CHECK(sr.omega2_l2 / l2_norm(ws) == doctest::Approx(std::abs(1.0 - tau)).epsilon(1e-9));
    CHECK(sr.omega1_l2 / l2_norm(ws) == doctest::Approx(std::abs(tau)).epsilon(1e-9));
    CHECK(sr.resolved);
    CHECK(sr.alpha == doctest::Approx(alpha).epsilon(1e-15));
}

TEST_CASE("mollifier split satisfies the L1 and Linf inequalities on rough data") {
    const GridSpec g(128);
    Fft fft(g);
    const InitialDatum d = h2_point_vortex(g, 1.0, kPi, kPi, 0.2);
    SpectralField ws = spectral_of(g, d.omega0, fft);
    ws.at(0, 0) = cplx(0.0, 0.0);

    const double nu = 0.05, eta = 0.5;  // alpha = 0.1118 >= 2h = 0.0982
    const SplitRecord sr = mollifier_split(ws, eta, nu, fft);
    const auto nodal = inverse_transform(ws, fft);
    const double l1 = nodal_norms(g, nodal).l1;

    CHECK(sr.resolved);
    CHECK(sr.r1_l1 <= 1e-10 * l1);
    CHECK(sr.kernel_sup_scaled < 1.0);
    CHECK(sr.r1_linf <= 1e-10);
    CHECK(sr.r2 > 0.0);
    CHECK(std::isfinite(sr.r2));
}

TEST_CASE("mollifier split limiting regimes and sub-grid flagging") {
    const GridSpec g(64);
    Fft fft(g);
    std::vector<double> w(g.nodal_count());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            w[static_cast<size_t>(i) * g.n + j] = std::cos(6.0 * i * g.h());
    const SpectralField ws = spectral_of(g, w, fft);

    // Scale far above every feature: omega1 collapses toward the mean part.
    const SplitRecord wide = mollifier_split(ws, 4.0, 1.0, fft);
    CHECK(wide.omega2_l2 / l2_norm(ws) > 0.98);
    CHECK(wide.omega2_l2 / l2_norm(ws) < 1.0 + 1e-9);
    CHECK(wide.omega1_l2 < 0.02 * l2_norm(ws));

    // Sub-Kolmogorov scale: flagged, but all values finite.
    const SplitRecord tiny = mollifier_split(ws, 0.5, 1e-6, fft);
    CHECK_FALSE(tiny.resolved);
    CHECK(std::isfinite(tiny.omega1_l2));
    CHECK(std::isfinite(tiny.omega2_l2));
    // alpha = 5e-4 < h: the concentration comparison has no grid meaning.
    CHECK(std::isnan(tiny.r1_linf));
}

TEST_CASE("equi-integrability profile: plateau, bounded field, beta functional") {
    const GridSpec g(32);
    const double h2 = g.h() * g.h();

    std::vector<double> f(g.nodal_count(), 0.0);
    int count = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            f[static_cast<size_t>(i) * g.n + j] = 2.0;
            ++count;
        }
    const double area = count * h2;
    const auto prof = equi_integrability_profile(g, f, {1.0, 3.0}, BetaKind::slog);
    CHECK(prof.tails[0].second == doctest::Approx(2.0 * area).epsilon(1e-14));
    CHECK(prof.tails[1].second == 0.0);
    CHECK(prof.beta_value ==
          doctest::Approx(2.0 * std::log1p(2.0) * area).epsilon(1e-13));

    const std::vector<double> zero(g.nodal_count(), 0.0);
    CHECK(equi_integrability_profile(g, zero, {1.0}, BetaKind::slog).beta_value == 0.0);

    const auto sq = equi_integrability_profile(g, f, {1.0}, BetaKind::square);
    CHECK(sq.beta_value == doctest::Approx(4.0 * area).epsilon(1e-14));

    CHECK_THROWS_AS(equi_integrability_profile(g, f, {1.0, 1.0}, BetaKind::slog), ConfigError);
    CHECK_THROWS_AS(equi_integrability_profile(g, f, {-1.0}, BetaKind::slog), ConfigError);
}

TEST_CASE("a-priori bounds audit: closed form, degenerate t, constructed violation") {
    DiagnosticsRecord r;
    r.t = 1.0;
    r.nu = 0.1;
    const double u0 = kPi * std::sqrt(2.0);
    r.enstrophy = std::pow(2.0 * kPi * std::exp(-0.2), 2);
    r.conc_sqrtnu = 0.5;
    r.l1_vorticity = 30.0;

    const AprioriAudit a = apriori_bounds_audit(r, u0, 32.0);
    CHECK(a.decay_checked);
    CHECK(a.decay_ok);
    const double lhs = 2.0 * kPi * std::exp(-0.2);
    CHECK(a.decay_slack ==
          doctest::Approx(lhs * std::sqrt(0.2) / u0 - 1.0).epsilon(1e-12));
    CHECK(a.disk_checked);
    CHECK(a.disk_ok);
    CHECK(a.mass_ok);

    DiagnosticsRecord r0 = r;
    r0.t = 0.0;
    const AprioriAudit a0 = apriori_bounds_audit(r0, u0, 32.0);
    CHECK_FALSE(a0.decay_checked);
    CHECK_FALSE(a0.disk_checked);

    DiagnosticsRecord rbad = r;
    rbad.enstrophy *= 100.0;  // omega scaled by 10, u0 left alone
    const AprioriAudit ab = apriori_bounds_audit(rbad, u0, 32.0);
    CHECK_FALSE(ab.decay_ok);
    DiagnosticsRecord rmass = r;
    rmass.l1_vorticity = 40.0;
    CHECK_FALSE(apriori_bounds_audit(rmass, u0, 32.0).mass_ok);
}

TEST_CASE("right-continuity probe fits the early-time dissipation line") {
    const double nu = 0.1, e0 = kPi * kPi;
    std::vector<DiagnosticsRecord> recs(11);
    for (int k = 0; k <= 10; ++k) {
        recs[k].t = 0.01 * k;
        recs[k].energy = e0 * std::exp(-4.0 * nu * recs[k].t);
    }
    const auto probe = energy_right_continuity_probe(recs, 0.1);
    CHECK(probe.gaps.size() == 10);
    // gap(t) ~ (nu ||omega0||^2) t with a small quadratic correction.
    CHECK(probe.fitted_slope == doctest::Approx(0.4 * kPi * kPi).epsilon(0.03));
    CHECK(std::abs(probe.fitted_gap0) < 0.01 * e0);
    CHECK(probe.min_gap_all == 0.0);

    std::vector<DiagnosticsRecord> zero(4);
    for (int k = 0; k < 4; ++k) zero[k].t = 0.01 * k;
    const auto pz = energy_right_continuity_probe(zero, 0.1);
    CHECK(pz.fitted_slope == 0.0);
    CHECK(pz.fitted_gap0 == 0.0);

    std::vector<DiagnosticsRecord> few(2);
    few[0].t = 0.0;
    few[1].t = 0.05;
    CHECK_THROWS_AS(energy_right_continuity_probe(few, 0.1), ConfigError);
}

TEST_CASE("radius ladder spans 2h to pi/2 and includes the viscous scales") {
    const GridSpec g(64);
    auto contains = [](const std::vector<double>& ladder, double v) {
        for (double r : ladder)
            if (std::abs(r - v) <= 1e-12 * v) return true;
        return false;
    };

    // eta*sqrt(nu) = 0.1118 lies below 2h and becomes the smallest rung.
    const double nu = 0.05, eta = 0.5;
    const auto ladder = radius_ladder(g, nu, eta);
    REQUIRE(!ladder.empty());
    CHECK(ladder.front() == doctest::Approx(eta * std::sqrt(nu)).epsilon(1e-15));
    CHECK(ladder.back() == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    for (size_t k = 1; k < ladder.size(); ++k) CHECK(ladder[k] > ladder[k - 1]);
    CHECK(contains(ladder, 2.0 * g.h()));
    CHECK(contains(ladder, std::sqrt(nu)));
    CHECK(contains(ladder, eta * std::sqrt(nu)));

    // Both viscous scales above 2h: the dyadic base rung leads.
    const auto l2 = radius_ladder(g, 0.25, 0.5);
    CHECK(l2.front() == doctest::Approx(2.0 * g.h()).epsilon(1e-15));
    CHECK(contains(l2, 0.5));
    CHECK(contains(l2, 0.25));
}

TEST_CASE("trajectory records on the cellular flow satisfy every audit") {
    const GridSpec g(64);
    SolverConfig cfg;
    cfg.grid = g;
    cfg.nu = 0.1;
    cfg.t_end = 1.0;
    cfg.dt_policy = DtPolicy::fixed;
    cfg.dt_fixed = 2e-3;
    cfg.dt_max = 1.0;
    for (int k = 0; k <= 10; ++k) cfg.sample_times.push_back(0.1 * k);
    cfg.sample_times.back() = 1.0;

    DiagnosticsSettings settings;
    settings.eta = 1.0;  // alpha = sqrt(0.1) = 0.316 >= 2h
    const InitialDatum datum = smooth_control(g);
    const Trajectory traj = run_trajectory(cfg, datum, settings);

    REQUIRE(traj.records.size() == 11);
    CHECK(traj.flags.completed);
    CHECK(traj.flags.resolved);
    CHECK(traj.flags.split_resolved);
    CHECK(traj.e0 == doctest::Approx(kPi * kPi).epsilon(1e-10));
    CHECK(traj.u0_l2 == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(traj.mass0 > 31.0);
    CHECK(traj.mass0 < 33.0);

    const double ens0 = 4.0 * kPi * kPi;
    for (size_t k = 0; k < traj.records.size(); ++k) {
        const auto& r = traj.records[k];
        CHECK(r.energy ==
              doctest::Approx(kPi * kPi * std::exp(-0.4 * r.t)).epsilon(1e-7));
        CHECK(std::abs(r.res_energy) < 1e-10);
        CHECK(std::abs(r.res_enstrophy) < 1e-10 * ens0);
        if (r.t >= 0.01) {
            CHECK(r.res_decay <= 1e-6);
            CHECK(r.res_disk <= 1e-6);
        }
        double prevc = 0.0;
        for (const auto& pc : r.concentration) {
            CHECK(pc.second >= prevc - 1e-12);
            CHECK(pc.second <= r.l1_vorticity * (1.0 + 1e-10));
            prevc = pc.second;
        }
        CHECK(r.split.r1_l1 <= 1e-10 * r.l1_vorticity);
        CHECK(r.split.r1_linf <= 1e-10);
        CHECK(r.split.r2 > 0.0);
        CHECK(r.split.r2 < 2.0);
        CHECK(r.split_linearity <= 1e-10 * traj.omega0_linf);
        CHECK(r.Omega_norms.min >= -1e-12);
        CHECK(r.beta_f > 0.0);
        const AprioriAudit audit = apriori_bounds_audit(r, traj.u0_l2, traj.mass0);
        CHECK(audit.decay_ok);
        CHECK(audit.disk_ok);
        CHECK(audit.mass_ok);
    }

    const auto probe = energy_right_continuity_probe(traj.records, 0.3);
    const double slope_expect = cfg.nu * ens0;
    CHECK(probe.fitted_slope > 0.8 * slope_expect);
    CHECK(probe.fitted_slope < 1.0 * slope_expect * (1.0 + 1e-9));
    CHECK(probe.min_gap_all >= -1e-12 * traj.e0);

    // Stage-accumulated dissipation agrees with the trapezoid op at its
    // own accuracy level on this smooth, slowly varying run.
    const double d_records = dissipation_integral(traj.records, cfg.nu, 0.0, 1.0);
    const double d_stage = cfg.nu * traj.records.back().int_enstrophy;
    CHECK(d_records == doctest::Approx(d_stage).epsilon(2e-4));
    CHECK(d_stage ==
          doctest::Approx(kPi * kPi * (1.0 - std::exp(-0.4))).epsilon(1e-10));
}

TEST_CASE("trajectory blow-up is caught and reported with partial records") {
    const GridSpec g(32);
    SolverConfig cfg;
    cfg.grid = g;
    cfg.nu = 1e-6;
    cfg.t_end = 2e3;
    cfg.dt_policy = DtPolicy::fixed;
    cfg.dt_fixed = 1e3;
    cfg.dt_max = 1e9;
    cfg.sample_times = {0.0, 2e3};

    InitialDatum d = smooth_control(g);
    for (auto& v : d.omega0) v *= 1e80;
    for (auto& v : d.f0) v *= 1e80;

    DiagnosticsSettings settings;
    const Trajectory traj = run_trajectory(cfg, d, settings);
    CHECK_FALSE(traj.flags.completed);
    CHECK(traj.records.size() == 1);
    CHECK(traj.flags.blowup_t == 0.0);
    CHECK(traj.flags.blowup_dt == 1e3);
}

TEST_CASE("sample hook sees every sample index") {
    const GridSpec g(32);
    SolverConfig cfg;
    cfg.grid = g;
    cfg.nu = 0.05;
    cfg.t_end = 0.2;
    cfg.sample_times = {0.0, 0.1, 0.2};

    std::vector<size_t> seen;
    const Trajectory traj =
        run_trajectory(cfg, smooth_control(g), DiagnosticsSettings{},
                       [&](size_t idx, const FlowState& fs) {
                           seen.push_back(idx);
                           CHECK(fs.t == cfg.sample_times[idx]);
                       });
    CHECK(seen == std::vector<size_t>{0, 1, 2});
    CHECK(traj.records.size() == 3);
}
