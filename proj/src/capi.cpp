#include "vvlab.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "sweep.hpp"

namespace {

thread_local std::string g_last_error;

using vvlab::BlowupError;
using vvlab::ConfigError;
using vvlab::IoError;

vvlab_status fail(vvlab_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

vvlab_status usage(const char* what) {
    return fail(VVLAB_ERR_USAGE, std::string("null argument: ") + what);
}

// Maps library exceptions onto status codes; everything else is reported as
// a configuration failure rather than escaping across the C boundary.
template <typename Fn>
vvlab_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return VVLAB_OK;
    } catch (const BlowupError& e) {
        return fail(VVLAB_ERR_BLOWUP, e.what());
    } catch (const IoError& e) {
        return fail(VVLAB_ERR_IO, e.what());
    } catch (const ConfigError& e) {
        return fail(VVLAB_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(VVLAB_ERR_CONFIG, std::string("internal error: ") + e.what());
    }
}

char* copy_out(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

struct vvlab_config {
    std::vector<std::pair<std::string, std::string>> pairs;

    vvlab::SweepConfig build() const { return vvlab::config_from_pairs(pairs); }
};

struct vvlab_result {
    vvlab::SweepResult result;
};

extern "C" {

const char* vvlab_version(void) { return vvlab::kVersionString; }

const char* vvlab_last_error(void) { return g_last_error.c_str(); }

vvlab_status vvlab_config_from_string(const char* text, vvlab_config** out) {
    if (text == nullptr) return usage("text");
    if (out == nullptr) return usage("out");
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<vvlab_config>();
        cfg->pairs = vvlab::parse_config_pairs(text);
        cfg->build();
        *out = cfg.release();
    });
}

vvlab_status vvlab_config_load(const char* path, vvlab_config** out) {
    if (path == nullptr) return usage("path");
    if (out == nullptr) return usage("out");
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<vvlab_config>();
        cfg->pairs = vvlab::parse_config_pairs(vvlab::read_text_file(path));
        cfg->build();
        *out = cfg.release();
    });
}

vvlab_status vvlab_config_override(vvlab_config* cfg, const char* key, const char* value) {
    if (cfg == nullptr) return usage("cfg");
    if (key == nullptr) return usage("key");
    if (value == nullptr) return usage("value");
    return guarded([&] {
        auto pairs = cfg->pairs;
        bool replaced = false;
        for (auto& kv : pairs) {
            if (kv.first == key) {
                kv.second = value;
                replaced = true;
                break;
            }
        }
        if (!replaced) pairs.emplace_back(key, value);
        vvlab::config_from_pairs(pairs);
        cfg->pairs = std::move(pairs);
    });
}

void vvlab_config_free(vvlab_config* cfg) { delete cfg; }

vvlab_status vvlab_sweep(const vvlab_config* cfg, vvlab_result** out) {
    if (cfg == nullptr) return usage("cfg");
    if (out == nullptr) return usage("out");
    *out = nullptr;
    return guarded([&] {
        auto res = std::make_unique<vvlab_result>();
        res->result = vvlab::run_sweep(cfg->build());
        *out = res.release();
    });
}

vvlab_status vvlab_run(const vvlab_config* cfg, vvlab_result** out) {
    if (cfg == nullptr) return usage("cfg");
    if (out == nullptr) return usage("out");
    *out = nullptr;
    return guarded([&] {
        vvlab::SweepConfig sc = cfg->build();
        if (sc.nu_list.size() != 1)
            throw ConfigError("run requires exactly one viscosity; got " +
                              std::to_string(sc.nu_list.size()));
        auto res = std::make_unique<vvlab_result>();
        res->result = vvlab::run_sweep(sc);
        *out = res.release();
    });
}

vvlab_status vvlab_result_summary(const vvlab_result* res, char** out_json) {
    if (res == nullptr) return usage("res");
    if (out_json == nullptr) return usage("out_json");
    *out_json = nullptr;
    return guarded([&] {
        *out_json = copy_out(vvlab::serialize_summary(vvlab::summary_from_result(res->result)));
    });
}

vvlab_status vvlab_result_emit(const vvlab_result* res, const char* out_dir, const char* format) {
    if (res == nullptr) return usage("res");
    return guarded([&] {
        const std::string dir = out_dir ? out_dir : res->result.config.out_dir;
        vvlab::OutputFormat fmt = res->result.config.format;
        if (format != nullptr) {
            const std::string f = format;
            if (f == "csv") fmt = vvlab::OutputFormat::csv;
            else if (f == "json") fmt = vvlab::OutputFormat::json;
            else if (f == "both") fmt = vvlab::OutputFormat::both;
            else throw ConfigError("format: expected csv, json, or both");
        }
        vvlab::emit(res->result, dir, fmt);
    });
}

void vvlab_result_free(vvlab_result* res) { delete res; }

vvlab_status vvlab_oracle(const vvlab_config* cfg, char** out_json) {
    if (cfg == nullptr) return usage("cfg");
    if (out_json == nullptr) return usage("out_json");
    *out_json = nullptr;
    return guarded([&] {
        vvlab::SweepConfig sc = cfg->build();
        vvlab::finalize_oracle_part(sc);
        vvlab::AtomizationSpec spec;
        spec.n = sc.oracle_n;
        spec.mass = sc.oracle_mass;
        spec.widths = sc.oracle_widths;
        spec.radii = sc.oracle_radii;
        *out_json = copy_out(vvlab::serialize_atomization(vvlab::atomization_oracle(spec)));
    });
}

vvlab_status vvlab_validate(const vvlab_config* cfg, char** out_json) {
    if (cfg == nullptr) return usage("cfg");
    if (out_json == nullptr) return usage("out_json");
    *out_json = nullptr;
    return guarded([&] {
        *out_json = copy_out(vvlab::serialize_validation(vvlab::validate_family(cfg->build())));
    });
}

vvlab_status vvlab_report(const char* summary_path, const char* out_dir) {
    if (summary_path == nullptr) return usage("summary_path");
    if (out_dir == nullptr) return usage("out_dir");
    return guarded([&] { vvlab::emit_summary(vvlab::load_summary(summary_path), out_dir); });
}

void vvlab_free_string(char* s) { std::free(s); }

}  // extern "C"
