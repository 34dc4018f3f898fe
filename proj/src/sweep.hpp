#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"

namespace vvlab {

inline constexpr const char* kVersionString = "vvlab 1.0.0";

// Per-viscosity scalars for the summary. Dissipation values come from the
// stage-accumulated enstrophy integral: d = nu * Ie(T), d_early = nu * Ie(delta),
// d_late = d - d_early so that the decomposition is exact by construction.
// d_late equals the symmetric-window integral nu * int_delta^T ||omega||^2 dt.
struct TrajectorySummary {
    double nu = 0.0;
    bool completed = false;
    double blowup_t = kNaN, blowup_dt = kNaN;
    double d = kNaN, d_early = kNaN, d_late = kNaN;
    double sym2_grad = kNaN;  // nu^2 int_delta^T ||grad omega||^2 dt
    double e0 = kNaN, e_final = kNaN, u0_l2 = kNaN, mass0 = kNaN;
    bool resolved = false, split_resolved = false;
};

struct Verdict {
    std::vector<double> dissipation_trend;  // d per nu, NaN on failed runs
    bool trend_monotone = false;
    double energy_gap = kNaN;         // E(0) - E(T) for the smallest completed nu
    double compactness_proxy = kNaN;  // max over samples, two smallest completed nu
    std::string text;
};

// Spectral vorticity at every sample time of one run.
struct SnapshotSet {
    GridSpec grid;
    std::vector<double> times;
    std::vector<std::vector<cplx>> omega_hat;  // [sample][coeff], empty if missed
};

struct CompactnessReport {
    std::vector<double> nus;  // completed members, sweep order
    std::vector<double> times;
    std::vector<std::vector<std::vector<double>>> matrices;  // [sample][i][j]
    double energy_gap = kNaN;
    double compactness_proxy = kNaN;
};

// Pairwise L2 velocity distances at every sample time across completed
// trajectories, plus the energy gap of the smallest-viscosity run. Needs at
// least two completed trajectories on one grid.
CompactnessReport compactness_report(const std::vector<Trajectory>& trajectories,
                                     const std::vector<SnapshotSet>& snapshots);

struct SweepResult {
    SweepConfig config;  // finalized
    std::vector<Trajectory> trajectories;
    std::vector<TrajectorySummary> summaries;
    std::vector<double> matrix_nus;  // axes of velocity_distance
    std::vector<std::vector<std::vector<double>>> velocity_distance;
    FamilyReport validation;
    Verdict verdict;
};

// One trajectory per viscosity, parallel across viscosities with a bounded
// worker pool; numerics are invariant under the worker count. Per-run
// blow-up leaves an incomplete entry; if every run blows up the sweep fails.
SweepResult run_sweep(const SweepConfig& cfg);

// Datum construction and hypothesis checks only, no time integration.
FamilyReport validate_family(const SweepConfig& cfg);

// Static-field concentration probe: normalized bumps of shrinking width
// against a fixed smooth control, no time dynamics.
struct AtomizationSpec {
    int n = 256;
    double mass = 1.0;
    std::vector<double> widths;
    std::vector<double> radii;
};

struct AtomizationTable {
    std::vector<double> widths, radii;
    std::vector<std::vector<double>> conc;  // [width][radius]
    std::vector<double> smooth_conc;        // per radius
    double smooth_slope = kNaN;             // log-log slope of smooth C(R)
};

AtomizationTable atomization_oracle(const AtomizationSpec& spec);

// Everything sweep.json holds; the serialization round-trips exactly.
struct SummaryDoc {
    std::string version;
    std::string config_echo;
    std::vector<double> sample_times;
    std::vector<TrajectorySummary> trajectories;
    std::vector<double> matrix_nus;
    std::vector<std::vector<std::vector<double>>> matrices;
    FamilyReport validation;
    Verdict verdict;
};

SummaryDoc summary_from_result(const SweepResult& result);
std::string serialize_summary(const SummaryDoc& doc);
SummaryDoc load_summary(const std::string& path);

// Standalone JSON documents for the oracle and validate entry points.
std::string serialize_atomization(const AtomizationTable& table);
std::string serialize_validation(const FamilyReport& report);

// Gnuplot-ready two-column table: nu, d(nu).
std::string serialize_dissipation_table(const SummaryDoc& doc);

// One CSV per trajectory (traj_<nu>.csv), the JSON summary, and the
// dissipation table, per the configured format. Creates the directory.
void emit(const SweepResult& result, const std::string& out_dir, OutputFormat format);

// Re-emission from a stored summary: sweep.json plus the dissipation table.
void emit_summary(const SummaryDoc& doc, const std::string& out_dir);

std::string trajectory_csv(const Trajectory& traj);
std::string trajectory_csv_name(double nu);

}  // namespace vvlab
