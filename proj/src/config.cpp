#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace vvlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config key '" + key + "': empty list element");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += fmt_double(xs[i]);
    }
    return s;
}

const char* family_name(FamilySpec::Kind k) {
    switch (k) {
        case FamilySpec::Kind::point_vortex: return "point_vortex";
        case FamilySpec::Kind::vortex_sheet: return "vortex_sheet";
        case FamilySpec::Kind::lp_blob: return "lp_blob";
        case FamilySpec::Kind::smooth_control: return "smooth_control";
    }
    return "?";
}

}  // namespace

void SweepConfig::finalize() {
    if (nu_list.empty()) throw ConfigError("nu_list must not be empty");
    for (double nu : nu_list)
        if (!(nu > 0.0)) throw ConfigError("every viscosity must be positive");
    for (size_t k = 1; k < nu_list.size(); ++k)
        if (!(nu_list[k] < nu_list[k - 1]))
            throw ConfigError("nu_list must be strictly decreasing");
    if (!(diagnostics.eta > 0.0)) throw ConfigError("eta must be positive");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (!(solver.t_end > 0.0)) throw ConfigError("t_end must be positive");

    if (solver.sample_times.empty())
        throw ConfigError("sample times missing; set samples or sample_times");

    // delta must be one of the sample times so that the early/late
    // dissipation split reads the stage-accumulated integral exactly.
    // Unset delta targets 0.1 * t_end and snaps to the nearest positive
    // sample; an explicit delta must match a sample exactly.
    const bool explicit_delta = delta >= 0.0;
    const double want = explicit_delta ? delta : 0.1 * solver.t_end;
    const double tol = explicit_delta ? 1e-9 * std::max(1.0, solver.t_end)
                                      : std::numeric_limits<double>::infinity();
    bool snapped = false;
    double best_gap = tol;
    for (double ts : solver.sample_times) {
        if (ts > 0.0 && std::abs(ts - want) <= best_gap) {
            delta = ts;
            best_gap = std::abs(ts - want);
            snapped = true;
        }
    }
    if (!snapped)
        throw ConfigError("delta (" + fmt_double(want) + ") must equal a positive sample time");

    solver.nu = nu_list.front();
    solver.validate();

    for (double l : diagnostics.lambda_list)
        if (!(l > 0.0)) throw ConfigError("lambda_list entries must be positive");
    for (size_t k = 1; k < diagnostics.lambda_list.size(); ++k)
        if (!(diagnostics.lambda_list[k] > diagnostics.lambda_list[k - 1]))
            throw ConfigError("lambda_list must be strictly increasing");
}

void finalize_oracle_part(SweepConfig& cfg) {
    if (cfg.oracle_n < 8) throw ConfigError("oracle_n must be at least 8");
    if ((cfg.oracle_n & (cfg.oracle_n - 1)) != 0)
        throw ConfigError("oracle_n must be a power of two");
    if (cfg.oracle_widths.empty()) throw ConfigError("oracle_widths must not be empty");
    for (double w : cfg.oracle_widths)
        if (!(w > 0.0) || !(w <= two_pi / 4.0))
            throw ConfigError("oracle widths must lie in (0, pi/2]");
    if (cfg.oracle_radii.empty()) throw ConfigError("oracle_radii must not be empty");
    GridSpec g(cfg.oracle_n);
    for (double r : cfg.oracle_radii)
        if (!(r >= g.h()))
            throw ConfigError("oracle radii must be at least one grid spacing");
    if (!(cfg.oracle_mass >= 0.0)) throw ConfigError("oracle_mass must be non-negative");
}

std::vector<std::pair<std::string, std::string>> parse_config_pairs(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || key.find_first_of(" \t") != std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": malformed key");
        if (val.empty())
            throw ConfigError("config key '" + key + "': empty value");
        if (!seen.insert(key).second)
            throw ConfigError("config key '" + key + "': duplicated");
        pairs.emplace_back(key, val);
    }
    return pairs;
}

SweepConfig config_from_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
    SweepConfig cfg;
    cfg.solver.grid = GridSpec(256);
    cfg.solver.t_end = 1.0;
    std::map<std::string, std::string> kv;
    for (const auto& [key, val] : pairs) {
        if (!kv.emplace(key, val).second)
            throw ConfigError("config key '" + key + "': duplicated");
    }

    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    std::set<std::string> known;
    auto reg = [&](const char* key) {
        known.insert(key);
        return take(key);
    };

    if (const auto* v = reg("n")) cfg.solver.grid = GridSpec(parse_int("n", *v));
    if (const auto* v = reg("t_end")) cfg.solver.t_end = parse_double("t_end", *v);
    if (const auto* v = reg("dt_policy")) {
        if (*v == "cfl") cfg.solver.dt_policy = DtPolicy::cfl;
        else if (*v == "fixed") cfg.solver.dt_policy = DtPolicy::fixed;
        else throw ConfigError("config key 'dt_policy': expected cfl or fixed");
    }
    if (const auto* v = reg("dt_fixed")) cfg.solver.dt_fixed = parse_double("dt_fixed", *v);
    if (const auto* v = reg("cfl_safety")) cfg.solver.cfl_safety = parse_double("cfl_safety", *v);
    if (const auto* v = reg("dt_max")) cfg.solver.dt_max = parse_double("dt_max", *v);
    if (const auto* v = reg("dealias")) cfg.solver.dealias = parse_bool("dealias", *v);
    if (const auto* v = reg("advect")) cfg.solver.advect = parse_bool("advect", *v);

    const auto* samples = reg("samples");
    const auto* sample_times = reg("sample_times");
    if (samples && sample_times)
        throw ConfigError("set either samples or sample_times, not both");
    if (sample_times) {
        cfg.solver.sample_times = parse_list("sample_times", *sample_times);
    } else {
        int count = samples ? parse_int("samples", *samples) : 11;
        if (count < 2) throw ConfigError("config key 'samples': need at least 2");
        cfg.solver.sample_times.resize(static_cast<size_t>(count));
        for (int k = 0; k < count; ++k)
            cfg.solver.sample_times[static_cast<size_t>(k)] =
                cfg.solver.t_end * (static_cast<double>(k) / (count - 1));
    }

    const auto* nu = reg("nu");
    const auto* nu_list = reg("nu_list");
    const auto* nu_max = reg("nu_max");
    const auto* nu_count = reg("nu_count");
    if ((nu && nu_list) || (nu && nu_max) || (nu_list && nu_max))
        throw ConfigError("set exactly one of nu, nu_list, or nu_max with nu_count");
    if (nu) cfg.nu_list = {parse_double("nu", *nu)};
    if (nu_list) cfg.nu_list = parse_list("nu_list", *nu_list);
    if (nu_max) {
        if (!nu_count) throw ConfigError("nu_max requires nu_count");
        const int count = parse_int("nu_count", *nu_count);
        if (count < 1) throw ConfigError("config key 'nu_count': need at least 1");
        double v = parse_double("nu_max", *nu_max);
        for (int k = 0; k < count; ++k, v *= 0.5) cfg.nu_list.push_back(v);
    } else if (nu_count) {
        throw ConfigError("nu_count requires nu_max");
    }

    if (const auto* v = reg("delta")) cfg.delta = parse_double("delta", *v);
    if (const auto* v = reg("eta")) cfg.diagnostics.eta = parse_double("eta", *v);
    if (const auto* v = reg("lambda_list"))
        cfg.diagnostics.lambda_list = parse_list("lambda_list", *v);
    if (const auto* v = reg("beta")) {
        if (*v == "slog") cfg.diagnostics.beta = BetaKind::slog;
        else if (*v == "square") cfg.diagnostics.beta = BetaKind::square;
        else throw ConfigError("config key 'beta': expected slog or square");
    }

    if (const auto* v = reg("family")) {
        if (*v == "point_vortex") cfg.family.kind = FamilySpec::Kind::point_vortex;
        else if (*v == "vortex_sheet") cfg.family.kind = FamilySpec::Kind::vortex_sheet;
        else if (*v == "lp_blob") cfg.family.kind = FamilySpec::Kind::lp_blob;
        else if (*v == "smooth_control") cfg.family.kind = FamilySpec::Kind::smooth_control;
        else throw ConfigError("config key 'family': unknown generator '" + *v + "'");
    }
    if (const auto* v = reg("mass")) cfg.family.mass = parse_double("mass", *v);
    if (const auto* v = reg("core_radius")) cfg.family.core_radius = parse_double("core_radius", *v);
    if (const auto* v = reg("center_x")) cfg.family.cx = parse_double("center_x", *v);
    if (const auto* v = reg("center_y")) cfg.family.cy = parse_double("center_y", *v);
    if (const auto* v = reg("sheet_x0")) cfg.family.sheet_x0 = parse_double("sheet_x0", *v);
    if (const auto* v = reg("sheet_y0")) cfg.family.sheet_y0 = parse_double("sheet_y0", *v);
    if (const auto* v = reg("sheet_x1")) cfg.family.sheet_x1 = parse_double("sheet_x1", *v);
    if (const auto* v = reg("sheet_y1")) cfg.family.sheet_y1 = parse_double("sheet_y1", *v);
    if (const auto* v = reg("blob_p")) cfg.family.blob_p = parse_double("blob_p", *v);
    if (const auto* v = reg("blob_amplitude"))
        cfg.family.blob_amplitude = parse_double("blob_amplitude", *v);
    if (const auto* v = reg("blob_scale")) cfg.family.blob_scale = parse_double("blob_scale", *v);
    if (const auto* v = reg("core_scaling")) {
        if (*v == "fixed") cfg.family.scaling = FamilySpec::CoreScaling::fixed;
        else if (*v == "sqrt_nu") cfg.family.scaling = FamilySpec::CoreScaling::sqrt_nu;
        else throw ConfigError("config key 'core_scaling': expected fixed or sqrt_nu");
    }

    if (const auto* v = reg("out")) cfg.out_dir = *v;
    if (const auto* v = reg("workers")) cfg.workers = parse_int("workers", *v);
    if (const auto* v = reg("format")) {
        if (*v == "csv") cfg.format = OutputFormat::csv;
        else if (*v == "json") cfg.format = OutputFormat::json;
        else if (*v == "both") cfg.format = OutputFormat::both;
        else throw ConfigError("config key 'format': expected csv, json, or both");
    }
    if (const auto* v = reg("keep_snapshots")) cfg.keep_snapshots = parse_bool("keep_snapshots", *v);
    if (const auto* v = reg("write_dat")) cfg.write_dat = parse_bool("write_dat", *v);

    if (const auto* v = reg("oracle_n")) cfg.oracle_n = parse_int("oracle_n", *v);
    if (const auto* v = reg("oracle_mass")) cfg.oracle_mass = parse_double("oracle_mass", *v);
    if (const auto* v = reg("oracle_widths")) cfg.oracle_widths = parse_list("oracle_widths", *v);
    if (const auto* v = reg("oracle_radii")) cfg.oracle_radii = parse_list("oracle_radii", *v);

    for (const auto& [key, val] : kv) {
        (void)val;
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

SweepConfig parse_config_text(const std::string& text) {
    return config_from_pairs(parse_config_pairs(text));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

std::string config_echo(const SweepConfig& cfg) {
    std::string s;
    auto put = [&](const char* key, const std::string& val) {
        s += key;
        s += " = ";
        s += val;
        s += "\n";
    };
    put("n", std::to_string(cfg.solver.grid.n));
    put("t_end", fmt_double(cfg.solver.t_end));
    put("dt_policy", cfg.solver.dt_policy == DtPolicy::cfl ? "cfl" : "fixed");
    if (cfg.solver.dt_policy == DtPolicy::fixed) put("dt_fixed", fmt_double(cfg.solver.dt_fixed));
    put("cfl_safety", fmt_double(cfg.solver.cfl_safety));
    put("dt_max", fmt_double(cfg.solver.dt_max));
    put("dealias", cfg.solver.dealias ? "true" : "false");
    put("advect", cfg.solver.advect ? "true" : "false");
    put("sample_times", fmt_list(cfg.solver.sample_times));
    put("nu_list", fmt_list(cfg.nu_list));
    put("delta", fmt_double(cfg.delta));
    put("eta", fmt_double(cfg.diagnostics.eta));
    put("lambda_list", fmt_list(cfg.diagnostics.lambda_list));
    put("beta", cfg.diagnostics.beta == BetaKind::slog ? "slog" : "square");
    put("family", family_name(cfg.family.kind));
    put("mass", fmt_double(cfg.family.mass));
    put("core_radius", fmt_double(cfg.family.core_radius));
    put("center_x", fmt_double(cfg.family.cx));
    put("center_y", fmt_double(cfg.family.cy));
    put("sheet_x0", fmt_double(cfg.family.sheet_x0));
    put("sheet_y0", fmt_double(cfg.family.sheet_y0));
    put("sheet_x1", fmt_double(cfg.family.sheet_x1));
    put("sheet_y1", fmt_double(cfg.family.sheet_y1));
    put("blob_p", fmt_double(cfg.family.blob_p));
    put("blob_amplitude", fmt_double(cfg.family.blob_amplitude));
    put("blob_scale", fmt_double(cfg.family.blob_scale));
    put("core_scaling",
        cfg.family.scaling == FamilySpec::CoreScaling::fixed ? "fixed" : "sqrt_nu");
    put("out", cfg.out_dir);
    put("workers", std::to_string(cfg.workers));
    put("format", cfg.format == OutputFormat::csv    ? "csv"
                  : cfg.format == OutputFormat::json ? "json"
                                                     : "both");
    put("keep_snapshots", cfg.keep_snapshots ? "true" : "false");
    put("write_dat", cfg.write_dat ? "true" : "false");
    put("oracle_n", std::to_string(cfg.oracle_n));
    put("oracle_mass", fmt_double(cfg.oracle_mass));
    put("oracle_widths", fmt_list(cfg.oracle_widths));
    put("oracle_radii", fmt_list(cfg.oracle_radii));
    return s;
}

}  // namespace vvlab
