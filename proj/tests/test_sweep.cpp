#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "sweep.hpp"

using namespace vvlab;

namespace {
constexpr double kPi = 3.141592653589793;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fresh_dir(const std::string& tag) {
    const std::string d = "sweep_test_out/" + tag;
    std::filesystem::remove_all(d);
    return d;
}

SweepConfig cellular_config(std::vector<double> nus, int n, double dt) {
    SweepConfig cfg;
    cfg.solver.grid = GridSpec(n);
    cfg.solver.t_end = 1.0;
    cfg.solver.dt_policy = DtPolicy::fixed;
    cfg.solver.dt_fixed = dt;
    cfg.solver.dt_max = 1.0;
    for (int k = 0; k <= 10; ++k)
        cfg.solver.sample_times.push_back(1.0 * (static_cast<double>(k) / 10));
    cfg.nu_list = std::move(nus);
    cfg.family.kind = FamilySpec::Kind::smooth_control;
    return cfg;
}
}  // namespace

TEST_CASE("config parsing: defaults, lists, and fail-fast errors") {
    SweepConfig cfg = parse_config_text("nu = 0.1\n");
    cfg.finalize();
    CHECK(cfg.solver.grid.n == 256);
    CHECK(cfg.solver.t_end == 1.0);
    CHECK(cfg.solver.sample_times.size() == 11);
    CHECK(cfg.solver.sample_times.back() == 1.0);
    CHECK(cfg.delta == cfg.solver.sample_times[1]);
    CHECK(cfg.diagnostics.eta == 0.5);
    CHECK(cfg.nu_list == std::vector<double>{0.1});
    CHECK(cfg.workers == 1);
    CHECK(cfg.format == OutputFormat::both);

    cfg = parse_config_text(
        "n = 64\nt_end = 2\nnu_list = 2e-3, 1e-3, 5e-4\n"
        "dt_policy = fixed\ndt_fixed = 1e-3\nsamples = 21\n"
        "eta = 0.75\nlambda_list = 1, 2\nbeta = square\n"
        "family = lp_blob\nblob_p = 3\ncore_scaling = sqrt_nu\n"
        "out = results\nworkers = 3\nformat = csv\nkeep_snapshots = true\n"
        "# trailing comment\n");
    cfg.finalize();
    CHECK(cfg.solver.grid.n == 64);
    CHECK(cfg.nu_list.size() == 3);
    CHECK(cfg.solver.sample_times.size() == 21);
    CHECK(cfg.delta == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(cfg.diagnostics.beta == BetaKind::square);
    CHECK(cfg.family.kind == FamilySpec::Kind::lp_blob);
    CHECK(cfg.family.blob_p == 3.0);
    CHECK(cfg.family.scaling == FamilySpec::CoreScaling::sqrt_nu);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.workers == 3);
    CHECK(cfg.format == OutputFormat::csv);
    CHECK(cfg.keep_snapshots);

    CHECK_THROWS_AS(parse_config_text("unknown_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu = 0.1\nnu = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu = \n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dealias = yes\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("beta = cube\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu = 0.1\nnu_list = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu_max = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nu_count = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("samples = 5\nsample_times = 0, 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("samples = 1\n"), ConfigError);
}

TEST_CASE("config finalize: viscosity list rules and delta snapping") {
    SweepConfig cfg = parse_config_text("t_end = 1\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);  // empty nu_list

    cfg = parse_config_text("nu_list = 1e-3, 2e-3\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);  // not decreasing

    cfg = parse_config_text("nu_list = 1e-3, -1e-4\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);

    cfg = parse_config_text("nu = 0.1\ndelta = 0.35\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);  // not a sample time

    cfg = parse_config_text("nu = 0.1\ndelta = 0.3\n");
    cfg.finalize();
    CHECK(cfg.delta == cfg.solver.sample_times[3]);

    cfg = parse_config_text("nu_max = 0.4\nnu_count = 3\n");
    cfg.finalize();
    CHECK(cfg.nu_list == std::vector<double>{0.4, 0.2, 0.1});

    cfg = parse_config_text("nu = 0.1\neta = -1\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);

    cfg = parse_config_text("nu = 0.1\nworkers = 0\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
}

TEST_CASE("config echo parses back to the same configuration") {
    SweepConfig cfg = parse_config_text(
        "n = 32\nnu_list = 0.2, 0.1\nt_end = 0.5\nsamples = 6\n"
        "family = vortex_sheet\nmass = 1.5\nworkers = 2\nout = some dir/x\n");
    cfg.finalize();
    const std::string echo = config_echo(cfg);
    SweepConfig back = parse_config_text(echo);
    back.finalize();
    CHECK(config_echo(back) == echo);
    CHECK(back.solver.sample_times == cfg.solver.sample_times);
    CHECK(back.nu_list == cfg.nu_list);
    CHECK(back.delta == cfg.delta);
    CHECK(back.out_dir == "some dir/x");
    CHECK(back.family.mass == 1.5);
}

TEST_CASE("single-viscosity cellular sweep reproduces the closed-form dissipation") {
    SweepConfig cfg = cellular_config({0.1}, 32, 5e-3);
    const SweepResult res = run_sweep(cfg);

    REQUIRE(res.summaries.size() == 1);
    const TrajectorySummary& s = res.summaries[0];
    CHECK(s.completed);
    const double exact = kPi * kPi * (1.0 - std::exp(-0.4));
    CHECK(s.d == doctest::Approx(exact).epsilon(1e-6));
    CHECK(s.d == s.d_early + s.d_late);  // exact by construction
    const double exact_early = kPi * kPi * (1.0 - std::exp(-0.04));
    CHECK(s.d_early == doctest::Approx(exact_early).epsilon(1e-6));
    CHECK(s.sym2_grad ==
          doctest::Approx(2.0 * 0.1 * (exact - exact_early)).epsilon(1e-6));
    CHECK(s.e_final == doctest::Approx(kPi * kPi * std::exp(-0.4)).epsilon(1e-7));

    CHECK(res.matrix_nus.empty());
    CHECK(res.verdict.energy_gap ==
          doctest::Approx(kPi * kPi * (1.0 - std::exp(-0.4))).epsilon(1e-6));
    CHECK_FALSE(res.verdict.trend_monotone);  // needs at least two viscosities
    REQUIRE(res.validation.members.size() == 1);
    CHECK(res.validation.uniform_ok);
}

TEST_CASE("two-viscosity cellular sweep matches the closed-form velocity distances") {
    SweepConfig cfg = cellular_config({0.2, 0.1}, 32, 5e-3);
    const SweepResult res = run_sweep(cfg);

    REQUIRE(res.matrix_nus.size() == 2);
    REQUIRE(res.velocity_distance.size() == cfg.solver.sample_times.size());
    for (size_t k = 0; k < res.velocity_distance.size(); ++k) {
        const double t = cfg.solver.sample_times[k];
        const double expect =
            kPi * std::sqrt(2.0) * std::abs(std::exp(-0.4 * t) - std::exp(-0.2 * t));
        CHECK(res.velocity_distance[k][0][1] == doctest::Approx(expect).epsilon(1e-8));
        CHECK(res.velocity_distance[k][0][1] == res.velocity_distance[k][1][0]);
        CHECK(res.velocity_distance[k][0][0] == 0.0);
    }
    const double expect_proxy =
        kPi * std::sqrt(2.0) * std::abs(std::exp(-0.4) - std::exp(-0.2));
    CHECK(res.verdict.compactness_proxy == doctest::Approx(expect_proxy).epsilon(1e-8));
    // D(nu) = pi^2 (1 - e^{-4 nu}) grows with nu, so it decreases along the list.
    CHECK(res.verdict.trend_monotone);
    CHECK(res.verdict.dissipation_trend.size() == 2);
    CHECK(res.verdict.dissipation_trend[0] > res.verdict.dissipation_trend[1]);
    // Energy gap belongs to the smallest viscosity.
    CHECK(res.verdict.energy_gap ==
          doctest::Approx(kPi * kPi * (1.0 - std::exp(-0.4))).epsilon(1e-6));
}

TEST_CASE("sweep numerics are invariant under the worker count") {
    SweepConfig cfg1 = cellular_config({0.2, 0.1}, 32, 1e-2);
    SweepConfig cfg3 = cfg1;
    cfg1.workers = 1;
    cfg3.workers = 3;
    const SweepResult r1 = run_sweep(cfg1);
    const SweepResult r3 = run_sweep(cfg3);

    SummaryDoc d1 = summary_from_result(r1);
    SummaryDoc d3 = summary_from_result(r3);
    // The echoes differ only in the workers line; strip it before comparing.
    d1.config_echo.clear();
    d3.config_echo.clear();
    CHECK(serialize_summary(d1) == serialize_summary(d3));
    REQUIRE(r1.trajectories.size() == r3.trajectories.size());
    for (size_t i = 0; i < r1.trajectories.size(); ++i)
        CHECK(trajectory_csv(r1.trajectories[i]) == trajectory_csv(r3.trajectories[i]));
}

TEST_CASE("emit writes the pinned artifact set and re-emission is byte-identical") {
    SweepConfig cfg = cellular_config({0.2, 0.1}, 32, 1e-2);
    const std::string dir_a = fresh_dir("emit_a");
    const std::string dir_b = fresh_dir("emit_b");
    cfg.out_dir = dir_a;
    const SweepResult res = run_sweep(cfg);
    emit(res, dir_a, OutputFormat::both);
    emit(res, dir_b, OutputFormat::both);

    for (const char* name :
         {"traj_0.2.csv", "traj_0.1.csv", "sweep.json", "dissipation_vs_nu.dat"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(dir_a + "/" + name));
        CHECK(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name));
    }

    const std::string csv = slurp(dir_a + "/traj_0.1.csv");
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "t,energy,enstrophy,grad_enstrophy,l1_vorticity,conc_R_sqrtnu,conc_R_eta_sqrtnu,"
          "omega1_linf,omega2_l2sq,res_energy,res_enstrophy,res_prop25,res_kolmogorov");
    const size_t rows = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == cfg.solver.sample_times.size() + 1);

    // Format selection.
    const std::string dir_c = fresh_dir("emit_csv");
    emit(res, dir_c, OutputFormat::csv);
    CHECK(std::filesystem::exists(dir_c + "/traj_0.2.csv"));
    CHECK_FALSE(std::filesystem::exists(dir_c + "/sweep.json"));
    const std::string dir_j = fresh_dir("emit_json");
    emit(res, dir_j, OutputFormat::json);
    CHECK(std::filesystem::exists(dir_j + "/sweep.json"));
    CHECK_FALSE(std::filesystem::exists(dir_j + "/traj_0.2.csv"));

    CHECK_THROWS_AS(emit(res, "/proc/version/nope", OutputFormat::both), IoError);
}

TEST_CASE("summary schema round-trips exactly") {
    SweepConfig cfg = cellular_config({0.2, 0.1}, 32, 1e-2);
    const std::string dir = fresh_dir("roundtrip");
    const SweepResult res = run_sweep(cfg);
    emit(res, dir, OutputFormat::json);

    const SummaryDoc doc = load_summary(dir + "/sweep.json");
    CHECK(serialize_summary(doc) == slurp(dir + "/sweep.json"));

    // Spot checks through an independent JSON parser.
    nlohmann::json j = nlohmann::json::parse(slurp(dir + "/sweep.json"));
    CHECK(j.at("version").get<std::string>() == kVersionString);
    CHECK(j.at("trajectories").size() == 2);
    CHECK(j.at("trajectories")[0].at("d").get<double>() == res.summaries[0].d);
    CHECK(j.at("trajectories")[1].at("e0").get<double>() == res.summaries[1].e0);
    CHECK(j.at("trajectories")[0].at("blowup_t").is_null());
    CHECK(j.at("verdict").at("compactness_proxy").get<double>() ==
          res.verdict.compactness_proxy);
    SweepConfig echoed = parse_config_text(j.at("config_echo").get<std::string>());
    echoed.finalize();
    CHECK(echoed.nu_list == cfg.nu_list);

    CHECK_THROWS_AS(load_summary(dir + "/absent.json"), IoError);
    const std::string bad = dir + "/bad.json";
    std::ofstream(bad) << "{\"version\": 3";
    CHECK_THROWS_AS(load_summary(bad), ConfigError);
    std::ofstream(bad) << "{\"version\": \"x\"}";
    CHECK_THROWS_AS(load_summary(bad), ConfigError);
}

TEST_CASE("empty result serializes to a valid, round-trippable summary") {
    SweepConfig cfg = cellular_config({0.1}, 32, 1e-2);
    cfg.finalize();
    SweepResult res;
    res.config = cfg;
    const SummaryDoc doc = summary_from_result(res);
    const std::string bytes = serialize_summary(doc);
    nlohmann::json j = nlohmann::json::parse(bytes);
    CHECK(j.at("trajectories").empty());
    CHECK(j.at("velocity_distance").at("matrices").empty());
    CHECK(j.at("verdict").at("energy_gap").is_null());

    const std::string dir = fresh_dir("empty");
    emit_summary(doc, dir);
    CHECK(serialize_summary(load_summary(dir + "/sweep.json")) == bytes);
}

TEST_CASE("snapshots are persisted on request") {
    SweepConfig cfg = cellular_config({0.1}, 32, 1e-2);
    const std::string dir = fresh_dir("snaps");
    cfg.out_dir = dir;
    cfg.keep_snapshots = true;
    run_sweep(cfg);
    const std::string path = dir + "/snap_0.1.bin";
    REQUIRE(std::filesystem::exists(path));
    const size_t spectral_bytes = 32 * 17 * 16;
    const size_t expect = 9 + 8 + cfg.solver.sample_times.size() * (8 + spectral_bytes);
    CHECK(std::filesystem::file_size(path) == expect);
}

TEST_CASE("a sweep whose every run blows up fails with the blow-up error") {
    SweepConfig cfg;
    cfg.solver.grid = GridSpec(32);
    cfg.solver.t_end = 2e3;
    cfg.solver.dt_policy = DtPolicy::fixed;
    cfg.solver.dt_fixed = 1e3;
    cfg.solver.dt_max = 1e9;
    cfg.solver.sample_times = {0.0, 2e3};
    cfg.delta = 2e3;
    cfg.nu_list = {1e-6};
    cfg.family.kind = FamilySpec::Kind::point_vortex;
    cfg.family.mass = 1e80;
    cfg.family.core_radius = 0.8;
    CHECK_THROWS_AS(run_sweep(cfg), BlowupError);
}

TEST_CASE("compactness report on constructed inputs") {
    const GridSpec g(32);
    Fft fft(g);
    const auto nodal = oracle::seeded_field(g, 3u);
    std::vector<cplx> what(g.spectral_count());
    fft.forward(nodal, what);
    what[0] = cplx(0.0, 0.0);

    auto mk_traj = [&](double nu) {
        Trajectory t;
        t.nu = nu;
        t.e0 = 2.0;
        t.flags.completed = true;
        DiagnosticsRecord r0, r1;
        r0.t = 0.0;
        r0.energy = 2.0;
        r1.t = 1.0;
        r1.energy = 1.5;
        t.records = {r0, r1};
        return t;
    };
    auto mk_snap = [&]() {
        SnapshotSet s;
        s.grid = g;
        s.times = {0.0, 1.0};
        s.omega_hat = {what, what};
        return s;
    };

    std::vector<Trajectory> trajs = {mk_traj(0.2), mk_traj(0.1)};
    std::vector<SnapshotSet> snaps = {mk_snap(), mk_snap()};
    const CompactnessReport rep = compactness_report(trajs, snaps);
    CHECK(rep.nus == std::vector<double>{0.2, 0.1});
    for (const auto& mat : rep.matrices)
        for (const auto& row : mat)
            for (double v : row) CHECK(v == 0.0);
    CHECK(rep.compactness_proxy == 0.0);
    CHECK(rep.energy_gap == doctest::Approx(0.5).epsilon(1e-15));

    trajs[0].flags.completed = false;
    CHECK_THROWS_AS(compactness_report(trajs, snaps), ConfigError);
    trajs[0].flags.completed = true;
    snaps[1].omega_hat[1].clear();
    CHECK_THROWS_AS(compactness_report(trajs, snaps), ConfigError);
}

TEST_CASE("atomization probe: shrinking bumps concentrate, smooth field scales with area") {
    AtomizationSpec spec;
    spec.n = 128;
    spec.widths = {0.5, 0.25, 0.125};
    spec.radii = {0.3, 0.15};
    const AtomizationTable table = atomization_oracle(spec);

    REQUIRE(table.conc.size() == 3);
    for (size_t wi = 1; wi < table.conc.size(); ++wi)
        CHECK(table.conc[wi][0] >= table.conc[wi - 1][0] - 1e-12);
    for (const auto& row : table.conc)
        for (double c : row) CHECK(c <= 1.0 + 1e-10);
    CHECK(table.conc.back()[0] == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(table.smooth_slope == doctest::Approx(2.0).epsilon(0.25));
    CHECK(table.smooth_conc[0] > table.smooth_conc[1]);

    AtomizationSpec zero = spec;
    zero.mass = 0.0;
    const AtomizationTable zt = atomization_oracle(zero);
    for (const auto& row : zt.conc)
        for (double c : row) CHECK(c == 0.0);

    AtomizationSpec bad = spec;
    bad.widths.clear();
    CHECK_THROWS_AS(atomization_oracle(bad), ConfigError);
    bad = spec;
    bad.radii = {1e-4};
    CHECK_THROWS_AS(atomization_oracle(bad), ConfigError);
    bad = spec;
    bad.widths = {7.0};
    CHECK_THROWS_AS(atomization_oracle(bad), ConfigError);
}
