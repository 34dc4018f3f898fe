// Command line front end. Links only the C interface.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vvlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitIo = 3;

int exit_code(vvlab_status st) {
    switch (st) {
        case VVLAB_OK: return kExitOk;
        case VVLAB_ERR_BLOWUP: return kExitBlowup;
        case VVLAB_ERR_IO: return kExitIo;
        default: return kExitConfig;
    }
}

int report_failure(vvlab_status st) {
    std::fprintf(stderr, "error: %s\n", vvlab_last_error());
    return exit_code(st);
}

struct Options {
    std::string config;
    std::string out;
    std::string format;
    int workers = 0;
};

using ConfigPtr = std::unique_ptr<vvlab_config, decltype(&vvlab_config_free)>;
using ResultPtr = std::unique_ptr<vvlab_result, decltype(&vvlab_result_free)>;
using StringPtr = std::unique_ptr<char, decltype(&vvlab_free_string)>;

// Loads the configuration and applies flag overrides so the stored summary
// echoes exactly what ran.
int load_config(const Options& opt, ConfigPtr& cfg) {
    vvlab_config* raw = nullptr;
    vvlab_status st = vvlab_config_load(opt.config.c_str(), &raw);
    if (st != VVLAB_OK) return report_failure(st);
    cfg.reset(raw);
    if (!opt.out.empty() &&
        (st = vvlab_config_override(cfg.get(), "out", opt.out.c_str())) != VVLAB_OK)
        return report_failure(st);
    if (!opt.format.empty() &&
        (st = vvlab_config_override(cfg.get(), "format", opt.format.c_str())) != VVLAB_OK)
        return report_failure(st);
    if (opt.workers > 0 &&
        (st = vvlab_config_override(cfg.get(), "workers", std::to_string(opt.workers).c_str())) !=
            VVLAB_OK)
        return report_failure(st);
    return kExitOk;
}

// Per-trajectory conditions worth a loud line: a mollification scale the
// grid cannot resolve, and runs that blew up (the sweep itself continues).
void print_warnings(const vvlab_result* res) {
    char* raw = nullptr;
    if (vvlab_result_summary(res, &raw) != VVLAB_OK) return;
    StringPtr json(raw, &vvlab_free_string);
    const auto doc = nlohmann::json::parse(json.get(), nullptr, false);
    if (doc.is_discarded()) return;
    for (const auto& t : doc.at("trajectories")) {
        const double nu = t.at("nu").get<double>();
        if (!t.at("split_resolved").get<bool>())
            std::fprintf(stderr,
                         "warning: nu=%g: mollifier scale eta*sqrt(nu) is below 2h, split "
                         "diagnostics under-resolved\n",
                         nu);
        if (!t.at("completed").get<bool>())
            std::fprintf(stderr, "warning: nu=%g: trajectory blew up at t=%g (dt=%g)\n", nu,
                         t.at("blowup_t").is_null() ? 0.0 : t.at("blowup_t").get<double>(),
                         t.at("blowup_dt").is_null() ? 0.0 : t.at("blowup_dt").get<double>());
    }
}

int integrate(const Options& opt, bool single) {
    ConfigPtr cfg(nullptr, &vvlab_config_free);
    if (int rc = load_config(opt, cfg); rc != kExitOk) return rc;

    vvlab_result* raw = nullptr;
    vvlab_status st = single ? vvlab_run(cfg.get(), &raw) : vvlab_sweep(cfg.get(), &raw);
    if (st != VVLAB_OK) return report_failure(st);
    ResultPtr res(raw, &vvlab_result_free);
    print_warnings(res.get());

    st = vvlab_result_emit(res.get(), nullptr, nullptr);
    if (st != VVLAB_OK) return report_failure(st);
    return kExitOk;
}

// Prints the JSON document and mirrors it into <out>/<name> when set.
int emit_document(const Options& opt, const char* name,
                  vvlab_status (*produce)(const vvlab_config*, char**)) {
    ConfigPtr cfg(nullptr, &vvlab_config_free);
    if (int rc = load_config(opt, cfg); rc != kExitOk) return rc;

    char* raw = nullptr;
    vvlab_status st = produce(cfg.get(), &raw);
    if (st != VVLAB_OK) return report_failure(st);
    StringPtr json(raw, &vvlab_free_string);

    std::fputs(json.get(), stdout);
    if (!opt.out.empty()) {
        const std::string path = opt.out + "/" + name;
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (f == nullptr || std::fputs(json.get(), f) == EOF || std::fclose(f) == EOF) {
            if (f != nullptr) std::fclose(f);
            std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
            return kExitIo;
        }
    }
    return kExitOk;
}

int run_report(const Options& opt) {
    const std::string out = opt.out.empty() ? "." : opt.out;
    vvlab_status st = vvlab_report(opt.config.c_str(), out.c_str());
    if (st != VVLAB_OK) return report_failure(st);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(vvlab_version()) +
                 " - vanishing-viscosity sweeps on the periodic torus"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool config_is_summary) {
        sub->add_option("--config", opt.config,
                        config_is_summary ? "stored sweep.json summary" : "flat key = value file")
            ->required();
        sub->add_option("--out", opt.out, "output directory override");
        sub->add_option("--workers", opt.workers, "parallel trajectory workers");
        sub->add_option("--format", opt.format, "csv, json, or both")
            ->check(CLI::IsMember({"csv", "json", "both"}));
    };

    CLI::App* run = app.add_subcommand("run", "integrate a single viscosity");
    add_common(run, false);
    CLI::App* sweep = app.add_subcommand("sweep", "integrate the whole viscosity list");
    add_common(sweep, false);
    CLI::App* oracle = app.add_subcommand("oracle", "static concentration table");
    add_common(oracle, false);
    CLI::App* validate = app.add_subcommand("validate", "initial-data hypothesis checks");
    add_common(validate, false);
    CLI::App* report = app.add_subcommand("report", "re-emit outputs from a stored summary");
    add_common(report, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return integrate(opt, true);
    if (sweep->parsed()) return integrate(opt, false);
    if (oracle->parsed()) return emit_document(opt, "atomization.json", &vvlab_oracle);
    if (validate->parsed()) return emit_document(opt, "validation.json", &vvlab_validate);
    if (report->parsed()) return run_report(opt);
    return kExitConfig;
}
