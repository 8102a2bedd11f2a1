// Command-line front end: scenario runs, sweeps, quadratic-numerical-range
// experiments, lattice checks, and the stability-diagram emitter.
#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stokespec/blockop.hpp"
#include "stokespec/dimensional.hpp"
#include "stokespec/grid.hpp"
#include "stokespec/io.hpp"
#include "stokespec/qnr.hpp"
#include "stokespec/report.hpp"
#include "stokespec/subspace.hpp"
#include "stokespec/symbol.hpp"

namespace {

using nlohmann::ordered_json;

struct CliConfig {
    stokespec::ScenarioConfig scenario;
    int n = 16, n_x = 0, n_y = 0;  // --nx/--ny override --n when positive
    double mu = std::numeric_limits<double>::quiet_NaN();
    int random_forms = 50, samples = 256;
    bool complex_forms = false;
    std::vector<int> dims = {5, 4};
    std::string axis = "nu";
    std::vector<double> values;
    std::string out, csv, svg;
};

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw stokespec::ValidationError("cannot open for writing: " + path);
    f << content;
    f.flush();
    if (!f) throw stokespec::ComputeError("write failed: " + path);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void emit_json(const CliConfig& cli, const ordered_json& j) {
    if (cli.out.empty())
        std::cout << dump(j);
    else
        write_text_file(cli.out, dump(j));
}

ordered_json scenario_json(const stokespec::ScenarioConfig& c) {
    return {{"side_a", c.side_a}, {"side_b", c.side_b}, {"n_x", c.n_x}, {"n_y", c.n_y},
            {"nu", c.nu},         {"v_star", c.v_star}, {"tau", c.tau}, {"seed", c.seed}};
}

void finalize_grid_flags(CliConfig& cli) {
    cli.scenario.n_x = cli.n_x > 0 ? cli.n_x : cli.n;
    cli.scenario.n_y = cli.n_y > 0 ? cli.n_y : cli.n;
}

int run_spectrum(CliConfig& cli) {
    finalize_grid_flags(cli);
    const auto& sc = cli.scenario;
    const stokespec::Grid grid =
        stokespec::build_grid(stokespec::make_rectangle(sc.side_a, sc.side_b), sc.n_x, sc.n_y);
    const auto params = stokespec::make_fluid_params(sc.nu, sc.v_star);
    const auto ops = stokespec::assemble_operators(grid);
    const double mu = std::isnan(cli.mu) ? 0.0 : cli.mu;
    const auto op = stokespec::assemble_shifted(ops, params, mu);
    const auto spec = stokespec::full_spectrum(op);
    const auto ex = stokespec::classified_extremes(spec);

    ordered_json j;
    j["scenario"] = scenario_json(sc);
    j["mu"] = mu;
    j["lambda1_positive"] = ex.lambda1_positive;
    j["bottom"] = ex.bottom;
    j["op_norm"] = spec.op_norm;
    j["residual_norm"] = spec.residual_norm;
    j["counts"] = {spec.n_positive, spec.n_zero, spec.n_negative};
    if (mu == 0.0) {
        const auto inertia = stokespec::inertia_counts(op, spec);
        j["inertia_checked"] = {inertia[0], inertia[1], inertia[2]};
    }
    std::cout << "spectrum: dim=" << spec.eigenvalues.size() << " bottom=" << ex.bottom
              << " lambda1_positive=" << ex.lambda1_positive << " counts=(" << spec.n_positive
              << "," << spec.n_zero << "," << spec.n_negative << ")\n";
    if (!cli.csv.empty()) {
        std::ostringstream s;
        stokespec::spectrum_csv(s, spec);
        write_text_file(cli.csv, s.str());
    }
    if (!cli.out.empty()) write_text_file(cli.out, dump(j));
    return 0;
}

int run_angle(CliConfig& cli) {
    finalize_grid_flags(cli);
    const auto& sc = cli.scenario;
    const stokespec::Grid grid =
        stokespec::build_grid(stokespec::make_rectangle(sc.side_a, sc.side_b), sc.n_x, sc.n_y);
    const auto params = stokespec::make_fluid_params(sc.nu, sc.v_star);
    const auto ops = stokespec::assemble_operators(grid);
    const double lambda1_h = stokespec::dirichlet_lambda1(ops);
    const double re_star_h = stokespec::reynolds_number(params, lambda1_h);
    const auto op = stokespec::assemble_stokes(ops, params);
    const auto spec = stokespec::full_spectrum(op);
    const auto angle = stokespec::operator_angle_norm(op, spec);
    const double tan2 = std::tan(2.0 * angle.theta_norm);
    const double mu = std::isnan(cli.mu) ? 0.5 * params.nu * lambda1_h : cli.mu;
    const auto gamma = stokespec::gamma_estimate(ops, params, mu);

    ordered_json j;
    j["scenario"] = scenario_json(sc);
    j["lambda1_h"] = lambda1_h;
    j["re_star_h"] = re_star_h;
    j["theta_norm"] = angle.theta_norm;
    j["tan_two_theta"] = tan2;
    j["p_minus_q_norm"] = angle.p_minus_q_norm;
    j["half_arctan_re"] = 0.5 * std::atan(re_star_h);
    j["mu"] = mu;
    j["gamma_exact"] = gamma.exact;
    j["gamma_envelope"] = gamma.envelope;
    const bool bound_ok = tan2 <= re_star_h + 1e-6;
    j["tan_bound_holds"] = bound_ok;
    emit_json(cli, j);
    std::cout << "angle: theta_norm=" << angle.theta_norm << " tan(2*theta)=" << tan2
              << " re_star_h=" << re_star_h << (bound_ok ? " (bound holds)" : " (BOUND FAILS)")
              << "\n";
    if (!cli.csv.empty()) {
        std::ostringstream s;
        stokespec::angle_sweep_csv(
            s, {{re_star_h, angle.theta_norm, tan2, re_star_h, re_star_h - tan2}});
        write_text_file(cli.csv, s.str());
    }
    return bound_ok ? 0 : 3;
}

template <class Scalar>
int run_qnr_typed(CliConfig& cli) {
    std::mt19937_64 rng(cli.scenario.seed);
    stokespec::QnrBudget budget;
    budget.n_samples = cli.samples;
    ordered_json forms = ordered_json::array();
    int failures = 0;
    std::string cloud_csv;
    for (int f = 0; f < cli.random_forms; ++f) {
        const auto form =
            stokespec::random_saddle_form<Scalar>(cli.dims[0], cli.dims[1], rng);
        budget.seed = cli.scenario.seed + static_cast<unsigned long long>(f) + 1;
        const auto cert = stokespec::qnr_certificate(form, budget);
        ordered_json items = ordered_json::array();
        for (const auto& it : cert.items)
            items.push_back({{"name", it.name},
                             {"pass", it.pass},
                             {"applicable", it.applicable},
                             {"worst", it.worst}});
        forms.push_back({{"form_index", f},
                         {"all_pass", cert.all_pass},
                         {"inf_estimate", cert.envelope.inf_estimate},
                         {"sup_estimate", cert.envelope.sup_estimate},
                         {"alpha_plus", cert.alpha_plus},
                         {"alpha_minus", cert.alpha_minus},
                         {"items", items}});
        if (!cert.all_pass) ++failures;
        if (f == 0 && !cli.csv.empty()) {
            std::vector<std::pair<double, double>> cloud;
            for (const auto& s : cert.envelope.samples) cloud.emplace_back(s.eig_low, s.eig_high);
            std::ostringstream s;
            stokespec::qnr_cloud_csv(s, cloud, "form0");
            cloud_csv = s.str();
        }
    }
    ordered_json j;
    j["dims"] = {cli.dims[0], cli.dims[1]};
    j["random_forms"] = cli.random_forms;
    j["samples_per_form"] = cli.samples;
    j["seed"] = cli.scenario.seed;
    j["scalar"] = cli.complex_forms ? "complex" : "real";
    j["failures"] = failures;
    j["forms"] = forms;
    if (!cli.out.empty()) write_text_file(cli.out, dump(j));
    if (!cli.csv.empty()) write_text_file(cli.csv, cloud_csv);
    std::cout << "qnr: " << cli.random_forms << " random forms of dims (" << cli.dims[0] << ","
              << cli.dims[1] << "), failures=" << failures << "\n";
    return failures == 0 ? 0 : 3;
}

int run_qnr(CliConfig& cli) {
    if (cli.dims.size() != 2)
        throw stokespec::ValidationError("--dims expects exactly two entries, e.g. --dims 5,4");
    return cli.complex_forms ? run_qnr_typed<std::complex<double>>(cli)
                             : run_qnr_typed<double>(cli);
}

void print_verdicts(const stokespec::StabilityReport& rep) {
    for (const auto& v : rep.verdicts) {
        const char* tag = !v.applicable ? "[ n/a]" : (v.pass ? "[PASS]" : "[FAIL]");
        std::cout << tag << ' ' << v.name;
        if (v.applicable) std::cout << "  margin=" << v.margin;
        std::cout << "\n";
    }
}

int run_report(CliConfig& cli) {
    finalize_grid_flags(cli);
    const auto rep = stokespec::run_scenario(cli.scenario);
    emit_json(cli, stokespec::to_json(rep));
    std::cout << "scenario: nu=" << cli.scenario.nu << " v_star=" << cli.scenario.v_star
              << " grid=" << cli.scenario.n_x << "x" << cli.scenario.n_y
              << " re_star_h=" << rep.re_star_h << "\n"
              << "lambda1_h=" << rep.lambda1_h << " lambda1_positive=" << rep.lambda1_positive
              << " bottom=" << rep.bottom << " theta_norm=" << rep.theta_norm
              << " min_eig_shifted=" << rep.min_eig_shifted << "\n";
    print_verdicts(rep);
    std::cout << (rep.all_pass ? "ALL PASS" : "VERDICT FAILURES PRESENT") << "\n";
    return rep.all_pass ? 0 : 3;
}

int run_sweep_cmd(CliConfig& cli) {
    finalize_grid_flags(cli);
    if (cli.values.empty())
        throw stokespec::ValidationError("--values is required, e.g. --values 1,2,4");
    const auto sweep = stokespec::run_sweep(cli.axis, cli.values, cli.scenario);
    if (!cli.csv.empty()) {
        std::ostringstream s;
        stokespec::trend_csv(s, stokespec::trend_header(), stokespec::trend_rows(sweep));
        write_text_file(cli.csv, s.str());
    }
    ordered_json j;
    j["axis"] = sweep.axis;
    j["values"] = sweep.values;
    j["aborted"] = sweep.aborted;
    if (sweep.aborted) j["error"] = sweep.error;
    ordered_json reports = ordered_json::array();
    for (const auto& r : sweep.reports) reports.push_back(stokespec::to_json(r));
    j["reports"] = reports;
    if (!cli.out.empty()) write_text_file(cli.out, dump(j));
    int failing = 0;
    for (const auto& r : sweep.reports)
        if (!r.all_pass) ++failing;
    std::cout << "sweep over " << sweep.axis << ": " << sweep.reports.size() << "/"
              << cli.values.size() << " scenarios completed, " << failing << " with failures"
              << (sweep.aborted ? " (aborted: " + sweep.error + ")" : "") << "\n";
    if (sweep.aborted) return 2;
    return failing == 0 ? 0 : 3;
}

int run_diagram(CliConfig& cli) {
    const auto& sc = cli.scenario;
    const double pi = std::numbers::pi;
    const double lambda1 =
        pi * pi * (1.0 / (sc.side_a * sc.side_a) + 1.0 / (sc.side_b * sc.side_b));
    const auto scales = stokespec::make_scales(sc.nu, sc.v_star, lambda1, sc.tau);
    const auto dimless = stokespec::dimensionless_numbers(scales);
    const auto diagram = stokespec::stability_diagram(scales);
    ordered_json j;
    j["scenario"] = scenario_json(sc);
    j["lambda1_continuum"] = lambda1;
    j["dimensionless"] = {{"re_lower", dimless.re_lower}, {"re_star", dimless.re_star},
                          {"st_star", dimless.st_star},   {"product", dimless.product},
                          {"ratio", dimless.ratio},       {"degenerate", dimless.degenerate}};
    j["diagram"] = {{"left", diagram.left},
                    {"right", diagram.right},
                    {"apex", diagram.apex},
                    {"two_theta", diagram.two_theta},
                    {"geo_mean_residual", diagram.geo_mean_residual},
                    {"angle_residual", diagram.angle_residual}};
    emit_json(cli, j);
    if (!cli.svg.empty()) write_text_file(cli.svg, stokespec::diagram_svg(diagram));
    std::cout << "diagram: base [" << diagram.left << ", " << diagram.right << "] apex "
              << diagram.apex << " two_theta=" << diagram.two_theta << "\n";
    return 0;
}

int run_lattice(CliConfig& cli) {
    const auto rep = stokespec::lattice_certificate();
    ordered_json j;
    j["re_lower"] = rep.r;
    j["st_star"] = rep.s;
    j["product"] = rep.c;
    j["ratio"] = rep.d;
    j["orthogonal_rs"] = rep.orthogonal_rs;
    j["orthogonal_cd"] = rep.orthogonal_cd;
    j["planes_ok"] = rep.planes_ok;
    j["parity_ok"] = rep.parity_ok;
    j["checked_pairs"] = rep.checked_pairs;
    j["pass"] = rep.pass;
    if (!cli.out.empty()) write_text_file(cli.out, dump(j));
    std::cout << "lattice-check: " << rep.checked_pairs << " exponent pairs checked, "
              << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? 0 : 3;
}

void add_scenario_flags(CLI::App* cmd, CliConfig& cli, bool with_grid, bool with_mu) {
    cmd->add_option("--nu", cli.scenario.nu, "kinematic viscosity (> 0)");
    cmd->add_option("--v-star", cli.scenario.v_star, "velocity scale (>= 0)");
    cmd->add_option("--side-a", cli.scenario.side_a, "domain side length a (> 0)");
    cmd->add_option("--side-b", cli.scenario.side_b, "domain side length b (> 0)");
    cmd->add_option("--tau", cli.scenario.tau, "time scale (> 0)");
    cmd->add_option("--seed", cli.scenario.seed, "random seed recorded in outputs");
    if (with_grid) {
        cmd->add_option("--n", cli.n, "interior grid points per axis")->check(CLI::Range(2, 4096));
        cmd->add_option("--nx", cli.n_x, "override for the x axis")->check(CLI::Range(2, 4096));
        cmd->add_option("--ny", cli.n_y, "override for the y axis")->check(CLI::Range(2, 4096));
    }
    if (with_mu)
        cmd->add_option("--mu", cli.mu, "spectral shift (spectrum: default 0; angle: nu*lambda1_h/2)");
    cmd->add_option("--out", cli.out, "write JSON output to this path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite-dimensional certificates for saddle-point flow operators: spectra,\n"
        "subspace rotation angles, shifted positivity, quadratic numerical ranges,\n"
        "and dimensionless stability laws."};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 usage error, 2 computation error, 3 verdict failure.");

    CliConfig cli;
    int rc = 0;

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and inertia of one operator");
    add_scenario_flags(spectrum, cli, true, true);
    spectrum->add_option("--csv", cli.csv, "write the full spectrum as CSV");
    spectrum->callback([&] { rc = run_spectrum(cli); });

    auto* angle = app.add_subcommand("angle", "subspace rotation angle and shift estimates");
    add_scenario_flags(angle, cli, true, true);
    angle->add_option("--csv", cli.csv, "write the angle row as CSV");
    angle->callback([&] { rc = run_angle(cli); });

    auto* qnr = app.add_subcommand("qnr", "random saddle-form certificates");
    qnr->add_option("--random-forms", cli.random_forms, "number of random forms")
        ->check(CLI::Range(1, 100000));
    qnr->add_option("--dims", cli.dims, "component dimensions, e.g. 5,4")->delimiter(',');
    qnr->add_option("--samples", cli.samples, "random samples per form")
        ->check(CLI::Range(1, 1000000));
    qnr->add_flag("--complex", cli.complex_forms, "draw complex Hermitian forms");
    qnr->add_option("--seed", cli.scenario.seed, "random seed");
    qnr->add_option("--out", cli.out, "write JSON summary to this path");
    qnr->add_option("--csv", cli.csv, "write the first form's sample cloud as CSV");
    qnr->callback([&] { rc = run_qnr(cli); });

    auto* report = app.add_subcommand("stability-report", "full certificate suite for one scenario");
    add_scenario_flags(report, cli, true, false);
    report->callback([&] { rc = run_report(cli); });

    auto* sweep = app.add_subcommand("sweep", "scenario sweep along one parameter axis");
    add_scenario_flags(sweep, cli, true, false);
    sweep->add_option("--axis", cli.axis, "swept parameter")
        ->check(CLI::IsMember({"nu", "v_star", "n", "tau"}));
    sweep->add_option("--values", cli.values, "axis values, e.g. 1,2,4")->delimiter(',');
    sweep->add_option("--csv", cli.csv, "write the trend table as CSV");
    sweep->callback([&] { rc = run_sweep_cmd(cli); });

    auto* diagram = app.add_subcommand("diagram", "dimensionless stability triangle");
    add_scenario_flags(diagram, cli, false, false);
    diagram->add_option("--svg", cli.svg, "write the diagram as SVG");
    diagram->callback([&] { rc = run_diagram(cli); });

    auto* lattice = app.add_subcommand("lattice-check", "exponent-lattice certificate");
    lattice->add_option("--out", cli.out, "write JSON output to this path");
    lattice->callback([&] { rc = run_lattice(cli); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const stokespec::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
