// Scenario pipeline: run every certificate for one parameter set, aggregate
// verdicts with explicit margins, and drive parameter sweeps.
#pragma once
#include <json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "blockop.hpp"
#include "common.hpp"
#include "dimensional.hpp"
#include "grid.hpp"
#include "subspace.hpp"
#include "symbol.hpp"
#include "sym_eig.hpp"

namespace stokespec {

struct ScenarioConfig {
    double side_a = 1.0, side_b = 1.0;
    int n_x = 16, n_y = 16;
    double nu = 1.0, v_star = 1.0, tau = 1.0;
    unsigned long long seed = 0;  // recorded for reproducibility of derived runs
};

// One named inequality lhs <= rhs + tol. `applicable` distinguishes a verdict
// whose hypothesis is unmet from a failure; margin = rhs + tol - lhs.
struct Verdict {
    std::string name;
    double lhs = 0.0, rhs = 0.0, tol = 0.0, margin = 0.0;
    bool pass = true;
    bool applicable = true;
};

struct StabilityReport {
    ScenarioConfig config;

    // Geometry and classical numbers.
    double lambda1_h = 0.0;          // smallest Laplacian eigenvalue on the grid
    double lambda1_continuum = 0.0;  // pi^2 (1/a^2 + 1/b^2)
    double re_star_h = 0.0, re_star_continuum = 0.0;
    double mu_opt = 0.0;

    // Spectral block.
    double lambda1_positive = 0.0, bottom = 0.0;
    int inertia_pos = 0, inertia_zero = 0, inertia_neg = 0;
    double op_norm = 0.0, residual_norm = 0.0, tau_z = 0.0;
    double bracket_upper_x = 0.0, bracket_upper_y = 0.0;  // nu lambda1_h + v* |D f|/|f|

    // Angle block.
    double theta_norm = 0.0, tan_two_theta = 0.0, p_minus_q_norm = 0.0;

    // Shifted-operator block.
    double min_eig_shifted = 0.0, shifted_norm = 0.0;
    double slab_bound_h = 0.0, slab_bound_continuum = 0.0;
    double stability_lower_h = 0.0;  // nu lambda1_h (1 - Re*_h) / 2
    bool bs_all_consistent = true;
    std::vector<BsSample> bs_samples;

    // Symbol block.
    double lam_minus = 0.0, lam_plus = 0.0, ratio_bottom = 0.0, ratio_top = 0.0;
    double alpha_h = 0.0, symbol_min_doubled = 0.0, decay_ratio = 0.0;
    EssentialSpectra essential{};  // continuum-lambda1 closed forms

    // Dimensionless block.
    DimensionlessSet dimensionless_h{}, dimensionless_continuum{};
    DiagramData diagram{};

    bool decoupled = false;  // v* = 0
    std::vector<Verdict> verdicts;
    bool all_pass = true;
};

namespace detail {

inline void add_verdict(StabilityReport& rep, std::string name, double lhs, double rhs, double tol,
                        bool applicable = true) {
    Verdict v;
    v.name = std::move(name);
    v.lhs = lhs;
    v.rhs = rhs;
    v.tol = tol;
    v.margin = rhs + tol - lhs;
    v.pass = lhs <= rhs + tol;
    v.applicable = applicable;
    if (applicable) rep.all_pass = rep.all_pass && v.pass;
    rep.verdicts.push_back(std::move(v));
}

}  // namespace detail

inline StabilityReport run_scenario(const ScenarioConfig& cfg) {
    ensure(cfg.tau > 0, "run_scenario: tau must be positive");
    const Grid grid = build_grid(make_rectangle(cfg.side_a, cfg.side_b), cfg.n_x, cfg.n_y);
    const FluidParams params = make_fluid_params(cfg.nu, cfg.v_star);
    const DiscreteOperators ops = assemble_operators(grid);
    const double pi = std::numbers::pi;

    StabilityReport rep;
    rep.config = cfg;
    rep.decoupled = params.v_star == 0.0;
    rep.lambda1_h = dirichlet_lambda1(ops);
    rep.lambda1_continuum =
        pi * pi * (1.0 / (cfg.side_a * cfg.side_a) + 1.0 / (cfg.side_b * cfg.side_b));
    rep.re_star_h = reynolds_number(params, rep.lambda1_h);
    rep.re_star_continuum = reynolds_number(params, rep.lambda1_continuum);
    rep.mu_opt = 0.5 * params.nu * rep.lambda1_h;

    const BlockOperator stokes = assemble_stokes(ops, params);
    const SpectrumResult spec = full_spectrum(stokes);
    const Extremes ex = classified_extremes(spec);
    const auto inertia = inertia_counts(stokes, spec);
    rep.lambda1_positive = ex.lambda1_positive;
    rep.bottom = ex.bottom;
    rep.inertia_pos = inertia[0];
    rep.inertia_zero = inertia[1];
    rep.inertia_neg = inertia[2];
    rep.op_norm = spec.op_norm;
    rep.residual_norm = spec.residual_norm;
    rep.tau_z = spec.tau_z;

    {  // two-sided bracket from the ground velocity eigenvector, per component
        const EigResult leig = sym_eigensolve(ops.L, true);
        const Eigen::VectorXd phi = leig.vectors.col(0);
        Eigen::VectorXd f = Eigen::VectorXd::Zero(grid.n_velocity);
        f.head(grid.n_scalar) = phi;
        rep.bracket_upper_x =
            params.nu * rep.lambda1_h + params.v_star * (ops.D * f).norm() / f.norm();
        f.setZero();
        f.tail(grid.n_scalar) = phi;
        rep.bracket_upper_y =
            params.nu * rep.lambda1_h + params.v_star * (ops.D * f).norm() / f.norm();
    }

    const AngleResult angle = operator_angle_norm(stokes, spec);
    rep.theta_norm = angle.theta_norm;
    rep.tan_two_theta = std::tan(2.0 * angle.theta_norm);
    rep.p_minus_q_norm = angle.p_minus_q_norm;

    const BlockOperator shifted = assemble_shifted(ops, params, rep.mu_opt);
    {
        const EigResult eig = sym_eigensolve(shifted.matrix, false);
        rep.min_eig_shifted = eig.values(0);
        rep.shifted_norm =
            std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    }
    rep.slab_bound_h = essential_spectra(params, rep.lambda1_h).slab_bound;
    rep.stability_lower_h = 0.5 * params.nu * rep.lambda1_h * (1.0 - rep.re_star_h);
    const BsReport bs = birman_schwinger_check(ops, params);
    rep.bs_all_consistent = bs.all_consistent;
    rep.bs_samples = bs.samples;

    const SymbolComparisonRow sym = symbol_comparison(ops, params, spec);
    rep.lam_minus = sym.lam_minus;
    rep.lam_plus = sym.lam_plus;
    rep.ratio_bottom = sym.ratio_bottom;
    rep.ratio_top = sym.ratio_top;
    const DecayCheck decay = decay_exponent_relations(ops, params);
    rep.alpha_h = decay.alpha;
    rep.symbol_min_doubled = decay.symbol_min_doubled;
    rep.decay_ratio = decay.ratio;
    rep.essential = essential_spectra(params, rep.lambda1_continuum);

    rep.dimensionless_h =
        dimensionless_numbers(make_scales(cfg.nu, cfg.v_star, rep.lambda1_h, cfg.tau));
    rep.dimensionless_continuum =
        dimensionless_numbers(make_scales(cfg.nu, cfg.v_star, rep.lambda1_continuum, cfg.tau));
    rep.diagram = stability_diagram(make_scales(cfg.nu, cfg.v_star, rep.lambda1_continuum, cfg.tau),
                                    &rep.theta_norm);

    // Verdicts. Stability-law entries apply only below the critical Reynolds
    // number; near-boundary approach entries need a coupled, reasonably
    // resolved grid.
    const bool coupled = !rep.decoupled;
    const bool subcritical = rep.re_star_h < 1.0;
    const bool resolved = std::min(cfg.n_x, cfg.n_y) >= 8;
    const double tol_s = kResidualRel * rep.op_norm;
    const double tol_t = kZeroClassRel * rep.shifted_norm;
    detail::add_verdict(rep, "lambda1_above_velocity_gap", params.nu * rep.lambda1_h,
                        rep.lambda1_positive, tol_s);
    detail::add_verdict(rep, "lambda1_bracket_x", rep.lambda1_positive, rep.bracket_upper_x, tol_s);
    detail::add_verdict(rep, "lambda1_bracket_y", rep.lambda1_positive, rep.bracket_upper_y, tol_s);
    detail::add_verdict(rep, "bottom_above_minus_vsq_nu",
                        -params.v_star * params.v_star / params.nu, rep.bottom, tol_s);
    detail::add_verdict(rep, "bottom_within_quarter_resq", std::abs(rep.bottom),
                        0.25 * rep.re_star_h * rep.re_star_h * rep.lambda1_positive, tol_s);
    detail::add_verdict(rep, "kernel_zero_simple", std::abs(rep.inertia_zero - 1.0), 0.0, 0.0,
                        coupled);
    detail::add_verdict(rep, "tan_two_theta_vs_re", rep.tan_two_theta, rep.re_star_h, 1e-6);
    detail::add_verdict(rep, "theta_vs_half_arctan", rep.theta_norm,
                        0.5 * std::atan(rep.re_star_h), 1e-6);
    detail::add_verdict(rep, "sin_theta_matches_projection_gap",
                        std::abs(std::sin(rep.theta_norm) - rep.p_minus_q_norm), 0.0, 1e-8);
    detail::add_verdict(rep, "stability_bottom_quarter_gap", std::abs(rep.bottom),
                        0.25 * rep.lambda1_positive, 0.0, subcritical);
    detail::add_verdict(rep, "stability_angle_below_pi_8", rep.theta_norm, pi / 8.0, 0.0,
                        subcritical);
    detail::add_verdict(rep, "stability_shifted_positive", rep.stability_lower_h,
                        rep.min_eig_shifted, tol_t, subcritical);
    detail::add_verdict(rep, "slab_below_shifted", rep.slab_bound_h, rep.min_eig_shifted, tol_t);
    double bs_disagreements = 0.0;
    for (const auto& s : rep.bs_samples) bs_disagreements += s.consistent ? 0.0 : 1.0;
    detail::add_verdict(rep, "birman_schwinger_agreement", bs_disagreements, 0.0, 0.0);
    detail::add_verdict(rep, "alpha_below_twice_shifted", rep.alpha_h,
                        2.0 * rep.min_eig_shifted, tol_t, subcritical);
    detail::add_verdict(rep, "alpha_symbol_identity",
                        std::abs(rep.alpha_h - rep.symbol_min_doubled), 0.0,
                        1e-12 * std::max(1.0, params.nu * rep.lambda1_h));
    detail::add_verdict(rep, "subspace_subordination", std::abs(rep.bottom), rep.lambda1_positive,
                        tol_s, rep.re_star_h < 2.0);
    detail::add_verdict(rep, "geometric_mean_identity", rep.diagram.geo_mean_residual, 0.0,
                        1e-12 * std::max(1.0, rep.dimensionless_continuum.st_star *
                                                  rep.dimensionless_continuum.st_star));
    detail::add_verdict(rep, "diagram_angle_identity", rep.diagram.angle_residual, 0.0,
                        1e-12 * std::max(1.0, rep.dimensionless_continuum.re_star));
    detail::add_verdict(rep, "product_tracks_bottom",
                        std::abs(rep.dimensionless_h.product / cfg.tau - std::abs(rep.bottom)), 0.0,
                        0.05 * params.v_star * params.v_star / params.nu + 1e-12,
                        coupled && resolved && subcritical);
    detail::add_verdict(rep, "ratio_tracks_gap",
                        std::abs(rep.dimensionless_h.ratio / cfg.tau -
                                 params.nu * rep.lambda1_h), 0.0, 1e-9 * rep.op_norm);
    const bool high_re = rep.re_star_continuum >= 2.0;
    detail::add_verdict(rep, "slab_meets_essential_bottom",
                        std::abs(essential_spectra(params, rep.lambda1_continuum).slab_bound -
                                 essential_spectra(params, rep.lambda1_continuum).ess_t.first),
                        0.0, 1e-12 * std::max(1.0, params.nu * rep.lambda1_continuum), high_re);
    rep.slab_bound_continuum = rep.essential.slab_bound;
    return rep;
}

struct SweepResult {
    std::string axis;
    std::vector<double> values;
    std::vector<StabilityReport> reports;
    bool aborted = false;
    std::string error;
};

// Runs scenarios along one axis ("nu", "v_star", "n", "tau"); a failing
// scenario aborts the sweep but earlier reports are preserved.
inline SweepResult run_sweep(const std::string& axis, const std::vector<double>& values,
                             const ScenarioConfig& base) {
    ensure(!values.empty(), "run_sweep: need at least one value");
    ensure(axis == "nu" || axis == "v_star" || axis == "n" || axis == "tau",
           "run_sweep: unknown axis '" + axis + "'");
    SweepResult sweep;
    sweep.axis = axis;
    sweep.values = values;
    for (const double v : values) {
        ScenarioConfig cfg = base;
        if (axis == "nu")
            cfg.nu = v;
        else if (axis == "v_star")
            cfg.v_star = v;
        else if (axis == "tau")
            cfg.tau = v;
        else {
            ensure(v >= 2 && v == std::floor(v), "run_sweep: grid sizes must be integers >= 2");
            cfg.n_x = cfg.n_y = static_cast<int>(v);
        }
        try {
            sweep.reports.push_back(run_scenario(cfg));
        } catch (const std::exception& e) {
            sweep.aborted = true;
            sweep.error = e.what();
            break;
        }
    }
    return sweep;
}

// Trend table columns shared by all axes.
inline std::vector<std::string> trend_header() {
    return {"axis_value",   "lambda1_h",     "lambda1_positive", "bottom",
            "theta_norm",   "min_eig_shifted", "bottom_scaled",  "decay_ratio"};
}

inline std::vector<std::vector<double>> trend_rows(const SweepResult& sweep) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
        const StabilityReport& r = sweep.reports[i];
        const double vsq = r.config.v_star * r.config.v_star;
        rows.push_back({sweep.values[i], r.lambda1_h, r.lambda1_positive, r.bottom, r.theta_norm,
                        r.min_eig_shifted,
                        vsq > 0 ? std::abs(r.bottom) * r.config.nu / vsq : 0.0, r.decay_ratio});
    }
    return rows;
}

inline nlohmann::ordered_json to_json(const Verdict& v) {
    return {{"name", v.name}, {"lhs", v.lhs},   {"rhs", v.rhs},
            {"tol", v.tol},   {"margin", v.margin}, {"pass", v.pass},
            {"applicable", v.applicable}};
}

inline nlohmann::ordered_json to_json(const StabilityReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["scenario"] = {{"side_a", r.config.side_a}, {"side_b", r.config.side_b},
                     {"n_x", r.config.n_x},       {"n_y", r.config.n_y},
                     {"nu", r.config.nu},         {"v_star", r.config.v_star},
                     {"tau", r.config.tau},       {"seed", r.config.seed}};
    j["geometry"] = {{"lambda1_h", r.lambda1_h},
                     {"lambda1_continuum", r.lambda1_continuum},
                     {"re_star_h", r.re_star_h},
                     {"re_star_continuum", r.re_star_continuum},
                     {"mu_opt", r.mu_opt}};
    j["spectral"] = {{"lambda1_positive", r.lambda1_positive},
                     {"bottom", r.bottom},
                     {"inertia", {r.inertia_pos, r.inertia_zero, r.inertia_neg}},
                     {"op_norm", r.op_norm},
                     {"residual_norm", r.residual_norm},
                     {"tau_z", r.tau_z},
                     {"bracket_upper_x", r.bracket_upper_x},
                     {"bracket_upper_y", r.bracket_upper_y}};
    j["angles"] = {{"theta_norm", r.theta_norm},
                   {"tan_two_theta", r.tan_two_theta},
                   {"p_minus_q_norm", r.p_minus_q_norm}};
    nlohmann::ordered_json bs = nlohmann::ordered_json::array();
    for (const auto& s : r.bs_samples)
        bs.push_back({{"mu", s.mu},
                      {"gamma", s.gamma},
                      {"envelope", s.envelope},
                      {"min_eig_shifted", s.min_eig_shifted},
                      {"consistent", s.consistent}});
    j["shifted"] = {{"min_eig", r.min_eig_shifted},
                    {"norm", r.shifted_norm},
                    {"slab_bound_h", r.slab_bound_h},
                    {"slab_bound_continuum", r.slab_bound_continuum},
                    {"stability_lower_h", r.stability_lower_h},
                    {"birman_schwinger_consistent", r.bs_all_consistent},
                    {"birman_schwinger_samples", bs}};
    j["symbols"] = {{"lam_minus", r.lam_minus},
                    {"lam_plus", r.lam_plus},
                    {"ratio_bottom", r.ratio_bottom},
                    {"ratio_top", r.ratio_top},
                    {"alpha_h", r.alpha_h},
                    {"symbol_min_doubled", r.symbol_min_doubled},
                    {"decay_ratio", r.decay_ratio},
                    {"ess_s", {r.essential.ess_s.first, r.essential.ess_s.second}},
                    {"ess_t", {r.essential.ess_t.first, r.essential.ess_t.second}}};
    auto dimjson = [](const DimensionlessSet& d) {
        return nlohmann::ordered_json{{"re_lower", d.re_lower}, {"re_star", d.re_star},
                                      {"st_star", d.st_star},   {"product", d.product},
                                      {"ratio", d.ratio},       {"degenerate", d.degenerate}};
    };
    j["dimensionless"] = {{"grid", dimjson(r.dimensionless_h)},
                          {"continuum", dimjson(r.dimensionless_continuum)}};
    j["diagram"] = {{"left", r.diagram.left},
                    {"right", r.diagram.right},
                    {"apex", r.diagram.apex},
                    {"two_theta", r.diagram.two_theta},
                    {"two_theta_norm", r.diagram.two_theta_norm},
                    {"geo_mean_residual", r.diagram.geo_mean_residual},
                    {"angle_residual", r.diagram.angle_residual}};
    j["decoupled"] = r.decoupled;
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    j["verdicts"] = verdicts;
    j["all_pass"] = r.all_pass;
    return j;
}

}  // namespace stokespec
