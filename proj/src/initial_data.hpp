#pragma once

#include <string>
#include <vector>

#include "field.hpp"

namespace vvlab {

struct DatumMeta {
    std::string family;
    double mass = 0.0;        // grid L1 norm of omega0
    double core_scale = 0.0;  // mollification / cutoff length, 0 if none
    double lp = 0.0;          // integrability exponent, lp_blob only
    double mean_abs = 0.0;    // |grid mean of omega0|
};

// Nodal initial data: omega0 together with the decomposition
// omega0 = f0 + Omega0 (bounded background plus nonnegative singular part).
struct InitialDatum {
    GridSpec grid;
    std::vector<double> omega0, f0, Omega0;
    DatumMeta meta;

    explicit InitialDatum(GridSpec g)
        : grid(g),
          omega0(g.nodal_count(), 0.0),
          f0(g.nodal_count(), 0.0),
          Omega0(g.nodal_count(), 0.0) {}
};

// Mollified point mass of circulation m at (cx, cy), discrete mass exactly m,
// plus the uniform compensating background f0 = -m/(2pi)^2.
// Requires m > 0 and eps0 >= 4h.
InitialDatum h2_point_vortex(GridSpec grid, double m, double cx, double cy, double eps0);

// Mollified uniform line measure of strength gamma along the straight
// segment from (x0,y0) with the minimal-image displacement to (x1,y1).
// Discrete mass of Omega0 is exactly gamma * length. Requires gamma > 0,
// positive length, eps0 >= 4h.
InitialDatum vortex_sheet(GridSpec grid, double x0, double y0, double x1, double y1,
                          double gamma, double eps0);

// Unbounded-at-the-origin profile amplitude * r^(-2/p), capped at the grid
// scale and cut off smoothly at radius `scale`, mean-subtracted; carried
// entirely by f0 (Omega0 = 0). Requires p > 1, amplitude > 0, 0 < scale <= pi.
InitialDatum lp_blob(GridSpec grid, double p, double amplitude, double scale,
                     double cx, double cy);

// Smooth reference datum omega0 = -2 cos x cos y with f0 = omega0.
InitialDatum smooth_control(GridSpec grid);

// Generator selection for a viscosity-indexed family.
struct FamilySpec {
    enum class Kind { point_vortex, vortex_sheet, lp_blob, smooth_control };
    enum class CoreScaling { fixed, sqrt_nu };

    Kind kind = Kind::point_vortex;
    double mass = 1.0;  // circulation m, or sheet strength gamma
    double core_radius = 0.2;
    double cx = 3.141592653589793, cy = 3.141592653589793;
    double sheet_x0 = 2.14, sheet_y0 = 3.14, sheet_x1 = 4.14, sheet_y1 = 3.14;
    double blob_p = 2.0, blob_amplitude = 1.0, blob_scale = 1.0;
    CoreScaling scaling = CoreScaling::fixed;
};

// Instantiates spec's generator for one viscosity. With sqrt_nu scaling the
// core radius shrinks as core_radius * sqrt(nu / nu_max), floored at 4h.
InitialDatum make_datum(GridSpec grid, const FamilySpec& spec, double nu, double nu_max);

struct MemberCheck {
    double nu = 0.0;
    double mass = 0.0;       // ||omega0||_L1
    double mean_abs = 0.0;
    double min_Omega = 0.0;  // most negative Omega0 value
    double linf = 0.0;
    double decomp_defect = 0.0;  // max |f0 + Omega0 - omega0|
    std::vector<std::pair<double, double>> f_tails;  // lambda -> mass of |f0| above lambda
    bool sign_ok = true, mean_ok = true, decomp_ok = true;
};

// Hypothesis audit for a family: uniform mass bound, sign of the singular
// part, vanishing mean, exactness of the decomposition, equi-integrability
// tail profile of the backgrounds, and pairwise L2 distances between the
// induced initial velocities.
struct FamilyReport {
    std::vector<MemberCheck> members;
    double sup_mass = 0.0;
    std::vector<std::vector<double>> u_dist;  // symmetric, zero diagonal
    double max_pair_dist = 0.0;
    bool uniform_ok = true;
};

FamilyReport validate_hypotheses(const std::vector<InitialDatum>& data,
                                 const std::vector<double>& nus,
                                 const std::vector<double>& lambda_list);

}  // namespace vvlab
