#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "json.hpp"

namespace vvlab {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string jnum(double x) { return std::isfinite(x) ? fmt17(x) : "null"; }

const char* jbool(bool b) { return b ? "true" : "false"; }

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string jarr(const std::vector<double>& xs) {
    std::string s = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += jnum(xs[i]);
    }
    return s + "]";
}

std::string jmat(const std::vector<std::vector<double>>& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) s += ", ";
        s += jarr(m[i]);
    }
    return s + "]";
}

std::string jpairs(const std::vector<std::pair<double, double>>& ps) {
    std::string s = "[";
    for (size_t i = 0; i < ps.size(); ++i) {
        if (i) s += ", ";
        s += "[" + jnum(ps[i].first) + ", " + jnum(ps[i].second) + "]";
    }
    return s + "]";
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed", path);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory", dir);
}

double nan_from_json(const nlohmann::json& v) {
    return v.is_null() ? kNaN : v.get<double>();
}

void fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double* slope) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double det = n * sxx - sx * sx;
    *slope = det != 0.0 ? (n * sxy - sx * sy) / det : kNaN;
}

void write_snapshots(const std::string& dir, const std::vector<double>& nus,
                     const std::vector<SnapshotSet>& snaps) {
    ensure_dir(dir);
    for (size_t i = 0; i < snaps.size(); ++i) {
        std::string bytes = "vvsnap 1\n";
        const int32_t n = snaps[i].grid.n;
        auto put = [&bytes](const void* p, size_t len) {
            bytes.append(static_cast<const char*>(p), len);
        };
        int32_t count = 0;
        for (const auto& c : snaps[i].omega_hat)
            if (!c.empty()) ++count;
        put(&n, sizeof n);
        put(&count, sizeof count);
        for (size_t s = 0; s < snaps[i].omega_hat.size(); ++s) {
            const auto& c = snaps[i].omega_hat[s];
            if (c.empty()) continue;
            const double t = snaps[i].times[s];
            put(&t, sizeof t);
            put(c.data(), c.size() * sizeof(cplx));
        }
        write_file(dir + "/snap_" + fmt_short(nus[i]) + ".bin", bytes);
    }
}

}  // namespace

CompactnessReport compactness_report(const std::vector<Trajectory>& trajectories,
                                     const std::vector<SnapshotSet>& snapshots) {
    if (trajectories.size() != snapshots.size())
        throw ConfigError("trajectory and snapshot counts differ");
    std::vector<size_t> live;
    for (size_t i = 0; i < trajectories.size(); ++i)
        if (trajectories[i].flags.completed) live.push_back(i);
    if (live.size() < 2)
        throw ConfigError("compactness report needs at least two completed trajectories");

    const GridSpec grid = snapshots[live[0]].grid;
    const size_t nsamp = snapshots[live[0]].omega_hat.size();
    for (size_t i : live) {
        if (snapshots[i].grid.n != grid.n)
            throw ConfigError("compactness report: mismatched grids");
        if (snapshots[i].omega_hat.size() != nsamp)
            throw ConfigError("compactness report: mismatched sample counts");
        for (const auto& c : snapshots[i].omega_hat)
            if (c.empty()) throw ConfigError("compactness report: missing snapshot");
    }

    CompactnessReport rep;
    rep.times = snapshots[live[0]].times;
    for (size_t i : live) rep.nus.push_back(trajectories[i].nu);

    const size_t q = live.size();
    rep.matrices.assign(nsamp, std::vector<std::vector<double>>(q, std::vector<double>(q, 0.0)));
    for (size_t s = 0; s < nsamp; ++s)
        for (size_t a = 0; a < q; ++a)
            for (size_t b = a + 1; b < q; ++b) {
                const double d = velocity_distance(grid, snapshots[live[a]].omega_hat[s],
                                                   snapshots[live[b]].omega_hat[s]);
                rep.matrices[s][a][b] = rep.matrices[s][b][a] = d;
            }

    // Viscosities arrive in decreasing order: the last two live entries are
    // the two smallest.
    rep.compactness_proxy = 0.0;
    for (size_t s = 0; s < nsamp; ++s)
        rep.compactness_proxy = std::max(rep.compactness_proxy, rep.matrices[s][q - 2][q - 1]);

    const Trajectory& smallest = trajectories[live.back()];
    if (!smallest.records.empty())
        rep.energy_gap = smallest.e0 - smallest.records.back().energy;
    return rep;
}

SweepResult run_sweep(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    cfg.finalize();
    const size_t m = cfg.nu_list.size();
    const GridSpec grid = cfg.solver.grid;
    const double nu_max = cfg.nu_list.front();

    SweepResult result;
    result.config = cfg;

    std::vector<InitialDatum> datums;
    datums.reserve(m);
    for (double nu : cfg.nu_list) datums.push_back(make_datum(grid, cfg.family, nu, nu_max));
    result.validation = validate_hypotheses(datums, cfg.nu_list, cfg.diagnostics.lambda_list);

    const size_t nsamp = cfg.solver.sample_times.size();
    std::vector<Trajectory> trajs(m);
    std::vector<SnapshotSet> snaps(m);
    for (size_t i = 0; i < m; ++i) {
        snaps[i].grid = grid;
        snaps[i].times = cfg.solver.sample_times;
        snaps[i].omega_hat.assign(nsamp, {});
    }

    std::atomic<size_t> next{0};
    std::mutex err_mtx;
    std::vector<std::string> worker_errors;
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= m) return;
            try {
                SolverConfig scfg = cfg.solver;
                scfg.nu = cfg.nu_list[i];
                SnapshotSet& snap = snaps[i];
                trajs[i] = run_trajectory(scfg, datums[i], cfg.diagnostics,
                                          [&snap](size_t idx, const FlowState& fs) {
                                              snap.omega_hat[idx] = fs.omega.c;
                                          });
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mtx);
                worker_errors.emplace_back(e.what());
            }
        }
    };
    const size_t pool = std::min(static_cast<size_t>(cfg.workers), m);
    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (size_t k = 0; k < pool; ++k) threads.emplace_back(work);
        for (auto& th : threads) th.join();
    }
    if (!worker_errors.empty())
        throw ConfigError("sweep worker failed: " + worker_errors.front());

    const double delta_tol = 1e-9 * std::max(1.0, cfg.solver.t_end);
    size_t completed = 0;
    for (size_t i = 0; i < m; ++i) {
        const Trajectory& tr = trajs[i];
        TrajectorySummary s;
        s.nu = cfg.nu_list[i];
        s.completed = tr.flags.completed;
        s.blowup_t = tr.flags.blowup_t;
        s.blowup_dt = tr.flags.blowup_dt;
        s.e0 = tr.e0;
        s.u0_l2 = tr.u0_l2;
        s.mass0 = tr.mass0;
        s.resolved = tr.flags.resolved;
        s.split_resolved = tr.flags.split_resolved;
        if (tr.flags.completed) {
            const DiagnosticsRecord* at_delta = nullptr;
            for (const auto& r : tr.records)
                if (std::abs(r.t - cfg.delta) <= delta_tol) at_delta = &r;
            if (at_delta == nullptr) throw ConfigError("no record at the delta sample");
            const DiagnosticsRecord& last = tr.records.back();
            s.d = s.nu * last.int_enstrophy;
            s.d_early = s.nu * at_delta->int_enstrophy;
            s.d_late = s.d - s.d_early;
            s.sym2_grad =
                s.nu * s.nu * (last.int_grad_enstrophy - at_delta->int_grad_enstrophy);
            s.e_final = last.energy;
            ++completed;
        }
        result.summaries.push_back(s);
    }
    if (completed == 0) {
        for (const auto& tr : trajs)
            if (!tr.flags.completed) throw BlowupError(tr.flags.blowup_t, tr.flags.blowup_dt);
    }

    if (completed >= 2) {
        CompactnessReport rep = compactness_report(trajs, snaps);
        result.matrix_nus = rep.nus;
        result.velocity_distance = rep.matrices;
        result.verdict.energy_gap = rep.energy_gap;
        result.verdict.compactness_proxy = rep.compactness_proxy;
    } else {
        for (const auto& s : result.summaries)
            if (s.completed) result.verdict.energy_gap = s.e0 - s.e_final;
    }

    bool monotone = true;
    double prev = kNaN;
    for (const auto& s : result.summaries) {
        result.verdict.dissipation_trend.push_back(s.d);
        if (!s.completed || !std::isfinite(s.d)) monotone = false;
        if (std::isfinite(prev) && std::isfinite(s.d) && !(s.d < prev)) monotone = false;
        prev = s.d;
    }
    result.verdict.trend_monotone = monotone && m >= 2;
    result.verdict.text =
        std::string(result.verdict.trend_monotone
                        ? "Dissipation decreased monotonically along the viscosity sweep. "
                        : "Dissipation was not monotone along the viscosity sweep. ") +
        "With vanishing dissipation, energy conservation of the limit is equivalent to "
        "strong L2 compactness of the velocity family; energy_gap and compactness_proxy "
        "quantify the two sides and neither is asserted.";

    if (cfg.keep_snapshots) write_snapshots(cfg.out_dir, cfg.nu_list, snaps);

    result.trajectories = std::move(trajs);
    return result;
}

FamilyReport validate_family(const SweepConfig& cfg_in) {
    SweepConfig cfg = cfg_in;
    cfg.finalize();
    const double nu_max = cfg.nu_list.front();
    std::vector<InitialDatum> datums;
    datums.reserve(cfg.nu_list.size());
    for (double nu : cfg.nu_list)
        datums.push_back(make_datum(cfg.solver.grid, cfg.family, nu, nu_max));
    return validate_hypotheses(datums, cfg.nu_list, cfg.diagnostics.lambda_list);
}

AtomizationTable atomization_oracle(const AtomizationSpec& spec) {
    GridSpec grid(spec.n);
    const double h = grid.h();
    if (spec.widths.empty()) throw ConfigError("atomization: widths must not be empty");
    for (double w : spec.widths)
        if (!(w > 0.0) || !(w <= two_pi / 4.0))
            throw ConfigError("atomization: widths must lie in (0, pi/2]");
    if (spec.radii.empty()) throw ConfigError("atomization: radii must not be empty");
    for (double r : spec.radii)
        if (!(r >= h)) throw ConfigError("atomization: radii must be at least one grid spacing");
    if (!(spec.mass >= 0.0)) throw ConfigError("atomization: mass must be non-negative");

    Fft fft(grid);
    const int n = grid.n;
    AtomizationTable table;
    table.widths = spec.widths;
    table.radii = spec.radii;

    std::vector<double> field(grid.nodal_count());
    for (double w : spec.widths) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const int di = std::abs(i - n / 2);
            const double dx = std::min(di, n - di) * h;
            for (int j = 0; j < n; ++j) {
                const int dj = std::abs(j - n / 2);
                const double dy = std::min(dj, n - dj) * h;
                const double r = std::sqrt(dx * dx + dy * dy);
                double v = 0.0;
                if (r < w) {
                    const double xi = r / w;
                    v = std::exp(1.0 - 1.0 / (1.0 - xi * xi));
                }
                field[static_cast<size_t>(i) * n + j] = v;
                sum += v;
            }
        }
        const double total = sum * h * h;
        const double scale = (total > 0.0 && spec.mass > 0.0) ? spec.mass / total : 0.0;
        for (auto& v : field) v *= scale;
        std::vector<double> row;
        for (double R : spec.radii)
            row.push_back(concentration_function(grid, field, R, fft).value);
        table.conc.push_back(std::move(row));
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            field[static_cast<size_t>(i) * n + j] =
                std::abs(-2.0 * std::cos(i * h) * std::cos(j * h));
    for (double R : spec.radii)
        table.smooth_conc.push_back(concentration_function(grid, field, R, fft).value);
    if (spec.radii.size() >= 2) {
        bool pos = true;
        for (double c : table.smooth_conc) pos = pos && c > 0.0;
        if (pos) fit_loglog(table.radii, table.smooth_conc, &table.smooth_slope);
    }
    return table;
}

std::string trajectory_csv_name(double nu) {
    return "traj_" + fmt_short(nu) + ".csv";
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string s =
        "t,energy,enstrophy,grad_enstrophy,l1_vorticity,conc_R_sqrtnu,conc_R_eta_sqrtnu,"
        "omega1_linf,omega2_l2sq,res_energy,res_enstrophy,res_prop25,res_kolmogorov\n";
    for (const auto& r : traj.records) {
        const double cols[13] = {r.t,
                                 r.energy,
                                 r.enstrophy,
                                 r.grad_enstrophy,
                                 r.l1_vorticity,
                                 r.conc_sqrtnu,
                                 r.conc_eta_sqrtnu,
                                 r.split.omega1_linf,
                                 r.split.omega2_l2 * r.split.omega2_l2,
                                 r.res_energy,
                                 r.res_enstrophy,
                                 r.res_decay,
                                 r.res_disk};
        for (int c = 0; c < 13; ++c) {
            if (c) s += ',';
            s += fmt17(cols[c]);
        }
        s += '\n';
    }
    return s;
}

namespace {

// ind is the indentation of the line the opening brace sits on.
std::string validation_json(const FamilyReport& v, const std::string& ind) {
    std::string s = "{\n";
    s += ind + "  \"sup_mass\": " + jnum(v.sup_mass) + ",\n";
    s += ind + "  \"max_pair_dist\": " + jnum(v.max_pair_dist) + ",\n";
    s += ind + "  \"uniform_ok\": " + std::string(jbool(v.uniform_ok)) + ",\n";
    s += ind + "  \"u_dist\": " + jmat(v.u_dist) + ",\n";
    s += ind + "  \"members\": [";
    for (size_t i = 0; i < v.members.size(); ++i) {
        const MemberCheck& mc = v.members[i];
        s += i ? ", {\n" : "{\n";
        s += ind + "    \"nu\": " + jnum(mc.nu) + ",\n";
        s += ind + "    \"mass\": " + jnum(mc.mass) + ",\n";
        s += ind + "    \"mean_abs\": " + jnum(mc.mean_abs) + ",\n";
        s += ind + "    \"min_Omega\": " + jnum(mc.min_Omega) + ",\n";
        s += ind + "    \"linf\": " + jnum(mc.linf) + ",\n";
        s += ind + "    \"decomp_defect\": " + jnum(mc.decomp_defect) + ",\n";
        s += ind + "    \"f_tails\": " + jpairs(mc.f_tails) + ",\n";
        s += ind + "    \"sign_ok\": " + std::string(jbool(mc.sign_ok)) + ",\n";
        s += ind + "    \"mean_ok\": " + std::string(jbool(mc.mean_ok)) + ",\n";
        s += ind + "    \"decomp_ok\": " + std::string(jbool(mc.decomp_ok)) + "\n";
        s += ind + "  }";
    }
    s += "]\n";
    s += ind + "}";
    return s;
}

}  // namespace

std::string serialize_atomization(const AtomizationTable& table) {
    std::string s = "{\n";
    s += "  \"widths\": " + jarr(table.widths) + ",\n";
    s += "  \"radii\": " + jarr(table.radii) + ",\n";
    s += "  \"concentration\": " + jmat(table.conc) + ",\n";
    s += "  \"smooth_concentration\": " + jarr(table.smooth_conc) + ",\n";
    s += "  \"smooth_slope\": " + jnum(table.smooth_slope) + "\n";
    s += "}\n";
    return s;
}

std::string serialize_validation(const FamilyReport& report) {
    return validation_json(report, "") + "\n";
}

SummaryDoc summary_from_result(const SweepResult& result) {
    SummaryDoc doc;
    doc.version = kVersionString;
    doc.config_echo = config_echo(result.config);
    doc.sample_times = result.config.solver.sample_times;
    doc.trajectories = result.summaries;
    doc.matrix_nus = result.matrix_nus;
    doc.matrices = result.velocity_distance;
    doc.validation = result.validation;
    doc.verdict = result.verdict;
    return doc;
}

std::string serialize_summary(const SummaryDoc& doc) {
    std::string s;
    s += "{\n";
    s += "  \"version\": " + jstr(doc.version) + ",\n";
    s += "  \"config_echo\": " + jstr(doc.config_echo) + ",\n";
    s += "  \"sample_times\": " + jarr(doc.sample_times) + ",\n";

    s += "  \"trajectories\": [";
    for (size_t i = 0; i < doc.trajectories.size(); ++i) {
        const TrajectorySummary& t = doc.trajectories[i];
        s += i ? ", {\n" : "{\n";
        s += "    \"nu\": " + jnum(t.nu) + ",\n";
        s += "    \"completed\": " + std::string(jbool(t.completed)) + ",\n";
        s += "    \"blowup_t\": " + jnum(t.blowup_t) + ",\n";
        s += "    \"blowup_dt\": " + jnum(t.blowup_dt) + ",\n";
        s += "    \"d\": " + jnum(t.d) + ",\n";
        s += "    \"d_early\": " + jnum(t.d_early) + ",\n";
        s += "    \"d_late\": " + jnum(t.d_late) + ",\n";
        s += "    \"sym2_grad\": " + jnum(t.sym2_grad) + ",\n";
        s += "    \"e0\": " + jnum(t.e0) + ",\n";
        s += "    \"e_final\": " + jnum(t.e_final) + ",\n";
        s += "    \"u0_l2\": " + jnum(t.u0_l2) + ",\n";
        s += "    \"mass0\": " + jnum(t.mass0) + ",\n";
        s += "    \"resolved\": " + std::string(jbool(t.resolved)) + ",\n";
        s += "    \"split_resolved\": " + std::string(jbool(t.split_resolved)) + "\n";
        s += "  }";
    }
    s += "],\n";

    s += "  \"velocity_distance\": {\n";
    s += "    \"nus\": " + jarr(doc.matrix_nus) + ",\n";
    s += "    \"matrices\": [";
    for (size_t m = 0; m < doc.matrices.size(); ++m) {
        if (m) s += ",";
        s += "\n      " + jmat(doc.matrices[m]);
    }
    s += doc.matrices.empty() ? "]\n" : "\n    ]\n";
    s += "  },\n";

    s += "  \"validation\": " + validation_json(doc.validation, "  ") + ",\n";

    const Verdict& w = doc.verdict;
    s += "  \"verdict\": {\n";
    s += "    \"dissipation_trend\": " + jarr(w.dissipation_trend) + ",\n";
    s += "    \"trend_monotone\": " + std::string(jbool(w.trend_monotone)) + ",\n";
    s += "    \"energy_gap\": " + jnum(w.energy_gap) + ",\n";
    s += "    \"compactness_proxy\": " + jnum(w.compactness_proxy) + ",\n";
    s += "    \"text\": " + jstr(w.text) + "\n";
    s += "  }\n";
    s += "}\n";
    return s;
}

SummaryDoc load_summary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open summary", path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("summary parse failed: " + std::string(e.what()));
    }
    try {
        SummaryDoc doc;
        doc.version = j.at("version").get<std::string>();
        doc.config_echo = j.at("config_echo").get<std::string>();
        for (const auto& v : j.at("sample_times")) doc.sample_times.push_back(nan_from_json(v));
        for (const auto& tj : j.at("trajectories")) {
            TrajectorySummary t;
            t.nu = nan_from_json(tj.at("nu"));
            t.completed = tj.at("completed").get<bool>();
            t.blowup_t = nan_from_json(tj.at("blowup_t"));
            t.blowup_dt = nan_from_json(tj.at("blowup_dt"));
            t.d = nan_from_json(tj.at("d"));
            t.d_early = nan_from_json(tj.at("d_early"));
            t.d_late = nan_from_json(tj.at("d_late"));
            t.sym2_grad = nan_from_json(tj.at("sym2_grad"));
            t.e0 = nan_from_json(tj.at("e0"));
            t.e_final = nan_from_json(tj.at("e_final"));
            t.u0_l2 = nan_from_json(tj.at("u0_l2"));
            t.mass0 = nan_from_json(tj.at("mass0"));
            t.resolved = tj.at("resolved").get<bool>();
            t.split_resolved = tj.at("split_resolved").get<bool>();
            doc.trajectories.push_back(t);
        }
        const auto& vd = j.at("velocity_distance");
        for (const auto& v : vd.at("nus")) doc.matrix_nus.push_back(nan_from_json(v));
        for (const auto& mj : vd.at("matrices")) {
            std::vector<std::vector<double>> mat;
            for (const auto& row : mj) {
                std::vector<double> r;
                for (const auto& v : row) r.push_back(nan_from_json(v));
                mat.push_back(std::move(r));
            }
            doc.matrices.push_back(std::move(mat));
        }
        const auto& vj = j.at("validation");
        doc.validation.sup_mass = nan_from_json(vj.at("sup_mass"));
        doc.validation.max_pair_dist = nan_from_json(vj.at("max_pair_dist"));
        doc.validation.uniform_ok = vj.at("uniform_ok").get<bool>();
        for (const auto& row : vj.at("u_dist")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(nan_from_json(v));
            doc.validation.u_dist.push_back(std::move(r));
        }
        for (const auto& mj : vj.at("members")) {
            MemberCheck mc;
            mc.nu = nan_from_json(mj.at("nu"));
            mc.mass = nan_from_json(mj.at("mass"));
            mc.mean_abs = nan_from_json(mj.at("mean_abs"));
            mc.min_Omega = nan_from_json(mj.at("min_Omega"));
            mc.linf = nan_from_json(mj.at("linf"));
            mc.decomp_defect = nan_from_json(mj.at("decomp_defect"));
            for (const auto& p : mj.at("f_tails"))
                mc.f_tails.emplace_back(nan_from_json(p.at(0)), nan_from_json(p.at(1)));
            mc.sign_ok = mj.at("sign_ok").get<bool>();
            mc.mean_ok = mj.at("mean_ok").get<bool>();
            mc.decomp_ok = mj.at("decomp_ok").get<bool>();
            doc.validation.members.push_back(std::move(mc));
        }
        const auto& wj = j.at("verdict");
        for (const auto& v : wj.at("dissipation_trend"))
            doc.verdict.dissipation_trend.push_back(nan_from_json(v));
        doc.verdict.trend_monotone = wj.at("trend_monotone").get<bool>();
        doc.verdict.energy_gap = nan_from_json(wj.at("energy_gap"));
        doc.verdict.compactness_proxy = nan_from_json(wj.at("compactness_proxy"));
        doc.verdict.text = wj.at("text").get<std::string>();
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("summary schema mismatch: " + std::string(e.what()));
    }
}

std::string serialize_dissipation_table(const SummaryDoc& doc) {
    std::string s = "# nu d\n";
    for (const auto& t : doc.trajectories)
        s += fmt17(t.nu) + " " + fmt17(t.d) + "\n";
    return s;
}

void emit(const SweepResult& result, const std::string& out_dir, OutputFormat format) {
    ensure_dir(out_dir);
    const SummaryDoc doc = summary_from_result(result);
    if (format != OutputFormat::json) {
        std::set<std::string> names;
        for (const auto& tr : result.trajectories) {
            const std::string name = trajectory_csv_name(tr.nu);
            if (!names.insert(name).second)
                throw ConfigError("trajectory file name collision: " + name);
            write_file(out_dir + "/" + name, trajectory_csv(tr));
        }
    }
    if (format != OutputFormat::csv)
        write_file(out_dir + "/sweep.json", serialize_summary(doc));
    if (result.config.write_dat)
        write_file(out_dir + "/dissipation_vs_nu.dat", serialize_dissipation_table(doc));
}

void emit_summary(const SummaryDoc& doc, const std::string& out_dir) {
    ensure_dir(out_dir);
    write_file(out_dir + "/sweep.json", serialize_summary(doc));
    write_file(out_dir + "/dissipation_vs_nu.dat", serialize_dissipation_table(doc));
}

}  // namespace vvlab
