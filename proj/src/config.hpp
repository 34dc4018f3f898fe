#pragma once

#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "initial_data.hpp"
#include "solver.hpp"

namespace vvlab {

enum class OutputFormat { csv, json, both };

// Full laboratory configuration: one solver template instantiated per
// viscosity, a datum family, diagnostics settings, and output policy.
struct SweepConfig {
    SolverConfig solver;          // solver.nu is ignored; filled per run
    std::vector<double> nu_list;  // strictly decreasing, all positive
    FamilySpec family;
    DiagnosticsSettings diagnostics;
    double delta = -1.0;  // early/late split time; resolved to 0.1 * t_end
    std::string out_dir = ".";
    int workers = 1;
    OutputFormat format = OutputFormat::both;
    bool keep_snapshots = false;
    bool write_dat = true;

    // Static-field atomization probe (no dynamics).
    int oracle_n = 256;
    double oracle_mass = 1.0;
    std::vector<double> oracle_widths = {0.5, 0.25, 0.125, 0.0625};
    std::vector<double> oracle_radii = {0.3, 0.15, 0.075};

    // Fills defaults that depend on other fields (sample times, delta)
    // and validates everything. Must be called before use.
    void finalize();
};

// Validates only the static-field atomization keys; the probe needs no
// viscosities or solver settings.
void finalize_oracle_part(SweepConfig& cfg);

// Flat key = value text. '#' starts a comment; keys are single tokens;
// list values are comma separated. Unknown and duplicate keys are
// configuration errors.
SweepConfig parse_config_text(const std::string& text);
SweepConfig parse_config_file(const std::string& path);

// Syntax layer: split into ordered key/value pairs; duplicates rejected.
// Key knowledge lives in config_from_pairs.
std::vector<std::pair<std::string, std::string>> parse_config_pairs(const std::string& text);
SweepConfig config_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

std::string read_text_file(const std::string& path);

// The resolved configuration echoed back in config-file syntax. Parsing
// the echo reproduces the configuration exactly.
std::string config_echo(const SweepConfig& cfg);

}  // namespace vvlab
