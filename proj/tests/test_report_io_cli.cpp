// Scenario reports, sweeps, text/CSV serialization, and the process front end.
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "stokespec/io.hpp"
#include "stokespec/report.hpp"

using namespace stokespec;
using Catch::Approx;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(STOKESPEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("scenario report passes every applicable verdict", "[report_io_cli]") {
    ScenarioConfig cfg;
    cfg.n_x = cfg.n_y = 8;
    const StabilityReport rep = run_scenario(cfg);
    CHECK(rep.all_pass);
    CHECK(rep.verdicts.size() == 22);
    CHECK(rep.lambda1_h == Approx(19.539590865365683).epsilon(1e-12));
    CHECK(rep.lambda1_continuum == Approx(19.739208802178717).epsilon(1e-14));
    CHECK(rep.bottom == Approx(-0.984935250627058).margin(1e-9));

    std::set<std::string> names;
    for (const auto& v : rep.verdicts) {
        names.insert(v.name);
        // Every verdict is recomputable from its own recorded fields.
        CHECK(v.pass == (v.lhs <= v.rhs + v.tol));
        CHECK(v.margin == Approx(v.rhs + v.tol - v.lhs).margin(1e-15));
        if (v.name == "slab_meets_essential_bottom")
            CHECK_FALSE(v.applicable);  // hypothesis Re* >= 2 unmet here
        else
            CHECK(v.applicable);
    }
    CHECK(names.size() == rep.verdicts.size());  // no duplicate names
    for (const char* expected :
         {"lambda1_above_velocity_gap", "bottom_above_minus_vsq_nu", "tan_two_theta_vs_re",
          "stability_shifted_positive", "birman_schwinger_agreement", "alpha_symbol_identity",
          "geometric_mean_identity", "product_tracks_bottom"})
        CHECK(names.count(expected) == 1);
}

TEST_CASE("report serialization is deterministic and echoes the scenario", "[report_io_cli]") {
    ScenarioConfig cfg;
    cfg.n_x = 6;
    cfg.n_y = 5;
    cfg.nu = 2.0;
    cfg.v_star = 0.5;
    cfg.tau = 0.25;
    const StabilityReport a = run_scenario(cfg);
    const StabilityReport b = run_scenario(cfg);
    const auto ja = to_json(a), jb = to_json(b);
    CHECK(ja.dump(2) == jb.dump(2));

    CHECK(ja["schema_version"] == 1);
    CHECK(ja["scenario"]["n_x"] == 6);
    CHECK(ja["scenario"]["n_y"] == 5);
    CHECK(ja["scenario"]["nu"] == 2.0);
    CHECK(ja["scenario"]["v_star"] == 0.5);
    CHECK(ja["scenario"]["tau"] == 0.25);
    CHECK(ja["verdicts"].size() == a.verdicts.size());
    CHECK(ja["all_pass"] == a.all_pass);
}

TEST_CASE("strong coupling flips the stability-law verdicts to not-applicable",
          "[report_io_cli]") {
    ScenarioConfig cfg;
    cfg.n_x = cfg.n_y = 8;
    cfg.v_star = 5.0;  // Re*_h ~ 2.26: outside both critical bands
    const StabilityReport rep = run_scenario(cfg);
    CHECK(rep.re_star_h > 2.0);
    for (const auto& v : rep.verdicts) {
        if (v.name.rfind("stability_", 0) == 0 || v.name == "product_tracks_bottom" ||
            v.name == "subspace_subordination" || v.name == "alpha_below_twice_shifted")
            CHECK_FALSE(v.applicable);
        if (v.name == "slab_meets_essential_bottom") {
            CHECK(v.applicable);
            CHECK(v.pass);
        }
    }
    CHECK(rep.all_pass);  // the unconditional laws still hold out here
}

TEST_CASE("still fluid drops the kernel verdict", "[report_io_cli]") {
    ScenarioConfig cfg;
    cfg.n_x = cfg.n_y = 6;
    cfg.v_star = 0.0;
    const StabilityReport rep = run_scenario(cfg);
    CHECK(rep.decoupled);
    for (const auto& v : rep.verdicts)
        if (v.name == "kernel_zero_simple" || v.name == "product_tracks_bottom")
            CHECK_FALSE(v.applicable);
    CHECK(rep.all_pass);
}

TEST_CASE("sweep preserves partial results when a scenario fails", "[report_io_cli]") {
    ScenarioConfig base;
    base.n_x = base.n_y = 4;
    const SweepResult ok = run_sweep("nu", {1.0, 2.0}, base);
    CHECK_FALSE(ok.aborted);
    CHECK(ok.reports.size() == 2);
    CHECK(trend_rows(ok).size() == 2);
    CHECK(trend_header().size() == trend_rows(ok)[0].size());

    const SweepResult bad = run_sweep("tau", {1.0, -1.0}, base);
    CHECK(bad.aborted);
    CHECK(bad.reports.size() == 1);
    CHECK_FALSE(bad.error.empty());

    CHECK_THROWS_AS(run_sweep("spin", {1.0}, base), ValidationError);
    CHECK_THROWS_AS(run_sweep("nu", {}, base), ValidationError);
    CHECK_THROWS_AS(run_sweep("n", {1.5}, base), ValidationError);
}

TEST_CASE("verdict aggregation ignores inapplicable entries", "[report_io_cli]") {
    StabilityReport rep;
    detail::add_verdict(rep, "holds", 1.0, 2.0, 0.0);
    CHECK(rep.all_pass);
    detail::add_verdict(rep, "fails_but_na", 5.0, 2.0, 0.0, false);
    CHECK(rep.all_pass);
    CHECK_FALSE(rep.verdicts.back().pass);
    detail::add_verdict(rep, "fails", 5.0, 2.0, 0.0);
    CHECK_FALSE(rep.all_pass);
    CHECK(rep.verdicts[0].margin == 1.0);
}

TEST_CASE("matrix text serialization round-trips exactly", "[report_io_cli]") {
    const DiscreteOperators ops = assemble_operators(build_grid(make_rectangle(1.0, 1.0), 4, 3));

    std::ostringstream out;
    write_matrix_text(out, "G", ops.G);
    write_matrix_text(out, "L", ops.L);
    std::istringstream in(out.str());
    const NamedMatrix g = read_matrix_text(in);
    const NamedMatrix l = read_matrix_text(in);
    CHECK(g.name == "G");
    CHECK(l.name == "L");
    CHECK((g.dense - Eigen::MatrixXd(ops.G)).norm() == 0.0);
    CHECK((l.dense - ops.L).norm() == 0.0);

    std::ostringstream all;
    write_operators_text(all, ops);
    const std::string text = all.str();
    CHECK(text.rfind("grid ", 0) == 0);
    for (const char* name : {"matrix L ", "matrix G ", "matrix D ", "matrix Gs ", "matrix Gbold "})
        CHECK(text.find(name) != std::string::npos);
}

TEST_CASE("csv writers emit stable tables", "[report_io_cli]") {
    const BlockOperator s = assemble_stokes(
        assemble_operators(build_grid(make_rectangle(1.0, 1.0), 3, 3)), make_fluid_params(1.0, 1.0));
    const SpectrumResult spec = full_spectrum(s);
    std::ostringstream out;
    spectrum_csv(out, spec);
    std::size_t rows = 0, from = 0;
    const std::string text = out.str();
    while ((from = text.find('\n', from)) != std::string::npos) {
        ++rows;
        ++from;
    }
    CHECK(rows == static_cast<std::size_t>(spec.eigenvalues.size()) + 1);
    CHECK(text.rfind("index,eigenvalue,residual", 0) == 0);

    std::ostringstream trend;
    trend_csv(trend, {"a", "b"}, {{0.5, 0.25}, {1.0, 0.125}});
    CHECK(trend.str() == "a,b\n0.5,0.25\n1,0.125\n");

    std::ostringstream cloud;
    qnr_cloud_csv(cloud, {{-1.5, 2.5}}, "probe");
    CHECK(cloud.str() == "eig_low,eig_high,tag\n-1.5,2.5,probe\n");
}

TEST_CASE("process front end maps outcomes to exit codes", "[report_io_cli]") {
    const auto tmp = std::filesystem::temp_directory_path();
    const auto out1 = tmp / "stokespec_cli_a.json";
    const auto out2 = tmp / "stokespec_cli_b.json";

    CHECK(run_cli("stability-report --n 6 --out " + out1.string()) == 0);
    CHECK(run_cli("stability-report --n 6 --out " + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));  // byte-identical reruns

    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("lattice-check") == 0);
    CHECK(run_cli("spectrum --n 4 --definitely-not-a-flag 1") == 1);
    CHECK(run_cli("stability-report --n 1") == 1);    // below the smallest grid
    CHECK(run_cli("spectrum --n 4 --nu 0") == 1);     // invalid viscosity
    CHECK(run_cli("bogus-subcommand") == 1);

    if (std::filesystem::exists("/dev/full"))  // full device: open succeeds, flush fails
        CHECK(run_cli("stability-report --n 6 --out /dev/full") == 2);

    const auto svg = tmp / "stokespec_cli_d.svg";
    CHECK(run_cli("diagram --svg " + svg.string() + " --out " + (tmp / "d.json").string()) == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);

    const auto csv = tmp / "stokespec_cli_sweep.csv";
    CHECK(run_cli("sweep --axis nu --values 1,2 --n 4 --csv " + csv.string()) == 0);
    CHECK(slurp(csv).rfind("axis_value,", 0) == 0);

    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
    std::filesystem::remove(svg);
    std::filesystem::remove(tmp / "d.json");
    std::filesystem::remove(csv);
}
