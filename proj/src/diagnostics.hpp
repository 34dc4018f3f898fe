#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "initial_data.hpp"
#include "mollifier.hpp"
#include "solver.hpp"

namespace vvlab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- Standalone operators ------------------------------------------------

// Physical-side kinetic energy (1/2) sum |u|^2 h^2. Identical to the
// spectral value by the Parseval convention; both paths are kept so the
// identity itself is testable.
double kinetic_energy(const VelocityField& u, Fft& fft);

struct ConcentrationValue {
    double value = 0.0;
    int ci = 0, cj = 0;  // maximizing center, lexicographically smallest tie
};

// Largest |omega| mass captured by a closed torus disk of radius R, over
// all n^2 grid centers, via FFT cross-correlation with the disk indicator.
// absw holds nodal |omega|. Requires R >= h.
ConcentrationValue concentration_function(GridSpec grid, const std::vector<double>& absw,
                                          double R, Fft& fft,
                                          const SpectralField* mask_spectrum = nullptr);

// Spectrum of the closed-disk indicator (forward transform of the 0/1 mask).
SpectralField disk_mask_spectrum(GridSpec grid, double R, Fft& fft);

struct SplitRecord {
    double eta = 0.0, alpha = 0.0;  // alpha = eta sqrt(nu)
    double omega1_l1 = 0.0, omega1_linf = 0.0, omega1_l2 = 0.0, omega2_l2 = 0.0;
    // r1_l1 = ||omega1||_1 - ||omega||_1           (Young: <= 0 up to roundoff)
    // r1_linf = ||omega1||_inf alpha^2 - C(alpha)  (kernel bound: <= 0; NaN if
    //                                               alpha < h so C undefined)
    // r2 = ||omega2||_2^2 / (alpha^2 ||grad omega||_2^2), the measured
    // mollification-rate constant.
    double r1_l1 = 0.0, r1_linf = kNaN, r2 = 0.0;
    double kernel_sup_scaled = 0.0, kernel_sup_over_mean = 0.0;
    bool resolved = true;  // alpha >= 2h
};

// Smooth/rough decomposition omega = omega1 + omega2 with omega1 the
// mollification at scale alpha = eta sqrt(nu). Values are computed even
// when alpha < 2h; the record is then flagged unresolved.
SplitRecord mollifier_split(const SpectralField& omega, double eta, double nu, Fft& fft);

struct ScalarNorms {
    double l1 = 0.0, l2 = 0.0, linf = 0.0, min = 0.0;
};

enum class BetaKind { slog, square };

struct EquiProfile {
    std::vector<std::pair<double, double>> tails;  // lambda -> mass of |f| above lambda
    double beta_value = 0.0;                       // sum beta(|f|) h^2
};

// Tail masses at each threshold plus the superlinear convex functional;
// beta(s) = s log(1+s) by default, s^2 as the configurable alternative.
EquiProfile equi_integrability_profile(GridSpec grid, const std::vector<double>& f,
                                       const std::vector<double>& lambdas, BetaKind beta);

// ---- Per-sample record -----------------------------------------------------

struct DiagnosticsRecord {
    double t = 0.0;
    double nu = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;       // ||omega||_L2^2
    double grad_enstrophy = 0.0;  // ||grad omega||_L2^2
    double l1_vorticity = 0.0;
    double linf_vorticity = 0.0;

    std::vector<std::pair<double, double>> concentration;  // (R, C(R)), R ascending
    double conc_sqrtnu = kNaN;      // C(sqrt(nu)); NaN when sqrt(nu) < h
    double conc_eta_sqrtnu = kNaN;  // C(eta sqrt(nu)); NaN when below h

    SplitRecord split;
    ScalarNorms f_norms, Omega_norms;
    double beta_f = 0.0;
    std::vector<std::pair<double, double>> f_tails;
    double split_linearity = 0.0;  // max node |f + Omega - omega|

    double tail_fraction = 0.0;  // modulus energy fraction beyond |k| = n/3
    bool resolved = true;        // tail_fraction <= 1e-6

    double int_enstrophy = 0.0, int_grad_enstrophy = 0.0;  // running integrals

    // Residuals. res_energy = (E + nu*int_enstrophy - E0)/E0 (absolute if
    // E0 = 0). res_enstrophy = (d/dt discrete) enstrophy + 2 nu d/dt
    // int_grad_enstrophy, raw. res_decay and res_disk are the relative
    // slacks of the two time-weighted a-priori bounds, NaN at t = 0.
    double res_energy = 0.0;
    double res_enstrophy = 0.0;
    double res_mollifier_l1 = 0.0;  // mirrors split.r1_l1
    double res_split_ratio = 0.0;   // mirrors split.r2
    double res_decay = kNaN;
    double res_disk = kNaN;
};

// ---- Audits over records ---------------------------------------------------

struct AprioriAudit {
    bool decay_checked = false;
    double decay_slack = kNaN;
    bool decay_ok = true;
    bool disk_checked = false;
    double disk_slack = kNaN;
    bool disk_ok = true;
    double mass_ratio = 0.0;  // ||omega(t)||_1 / M
    bool mass_ok = true;
};

// Checks the time-weighted decay bound ||omega||_2 <= ||u0||_2/sqrt(2 t nu),
// the sqrt(nu)-disk mass bound C(sqrt nu) <= ||u0||_2/sqrt(2t), and the
// uniform L1 bound against M. Time-weighted checks are skipped at t = 0.
AprioriAudit apriori_bounds_audit(const DiagnosticsRecord& r, double u0_l2, double M);

// nu * trapezoid of enstrophy over [a, b] on the record samples.
// Requires records to cover [a, b] with at least 3 samples inside and both
// endpoints present as sample nodes.
double dissipation_integral(const std::vector<DiagnosticsRecord>& records, double nu,
                            double a, double b);

struct RightContinuityProbe {
    std::vector<std::pair<double, double>> gaps;  // (t, E(0) - E(t)) for 0 < t <= delta
    double fitted_gap0 = 0.0;   // linear-fit intercept, the t -> 0+ limit
    double fitted_slope = 0.0;  // expected about nu * ||omega_0||^2
    double min_gap_all = 0.0;   // min over all records of E(0) - E(t)
};

// Requires at least 3 samples in [0, delta].
RightContinuityProbe energy_right_continuity_probe(const std::vector<DiagnosticsRecord>& records,
                                                   double delta);

// Geometric radius ladder {2h, 4h, ...} capped at pi/2 (always included),
// plus sqrt(nu) and eta*sqrt(nu) when they are >= h. Sorted, deduplicated.
std::vector<double> radius_ladder(GridSpec grid, double nu, double eta);

// ---- Engine and trajectory -------------------------------------------------

struct DiagnosticsSettings {
    double eta = 0.5;
    std::vector<double> lambda_list = {0.5, 1.0, 2.0, 4.0, 8.0};
    BetaKind beta = BetaKind::slog;
};

// Computes full records for one trajectory; owns mask/kernel caches keyed
// on the trajectory's fixed nu. Uses (but does not own) one Fft instance;
// single-threaded like the Fft itself.
class DiagnosticsEngine {
  public:
    DiagnosticsEngine(GridSpec grid, double nu, const DiagnosticsSettings& settings, Fft& fft);

    // Reference quantities frozen at t = 0 (E0, ||u0||_2, mass, sup norms).
    void set_reference(const FlowState& s0, const InitialDatum& datum);

    DiagnosticsRecord make_record(const FlowState& s, const DiagnosticsRecord* prev);

    const std::vector<double>& ladder() const { return ladder_; }
    double e0() const { return e0_; }
    double u0_l2() const { return u0_l2_; }
    double mass0() const { return mass0_; }
    double omega0_linf() const { return omega0_linf_; }
    double Omega0_linf() const { return Omega0_linf_; }

  private:
    GridSpec grid_;
    double nu_;
    DiagnosticsSettings settings_;
    Fft& fft_;
    std::vector<double> ladder_;
    std::map<double, SpectralField> mask_cache_;
    SpectralField kernel_spec_;
    KernelStats kernel_stats_;
    double alpha_ = 0.0;
    double e0_ = 0.0, u0_l2_ = 0.0, enstrophy0_ = 0.0, mass0_ = 0.0;
    double omega0_linf_ = 0.0, Omega0_linf_ = 0.0;
    bool have_reference_ = false;
};

struct TrajectoryFlags {
    bool completed = true;
    double blowup_t = kNaN, blowup_dt = kNaN;
    bool resolved = true;        // every sample spectrally resolved
    bool split_resolved = true;  // eta sqrt(nu) >= 2h
};

struct Trajectory {
    double nu = 0.0;
    SolverConfig config;
    DatumMeta datum;
    double e0 = 0.0, u0_l2 = 0.0, mass0 = 0.0, omega0_linf = 0.0;
    std::vector<DiagnosticsRecord> records;
    TrajectoryFlags flags;
};

// Optional per-sample state hook (sample index, state), e.g. to persist
// spectral snapshots for cross-trajectory distances.
using SampleHook = std::function<void(size_t, const FlowState&)>;

// Integrates the datum under the config and assembles records at sample
// times. Blow-up is caught: the trajectory is returned incomplete with the
// records collected so far and the failure time recorded.
Trajectory run_trajectory(const SolverConfig& cfg, const InitialDatum& datum,
                          const DiagnosticsSettings& settings, const SampleHook& hook = {});

}  // namespace vvlab
