// Closed-form 2x2 wave-number symbols, Reynolds/decay formulas, essential spectra.
#pragma once
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "blockop.hpp"
#include "common.hpp"
#include "grid.hpp"
#include "subspace.hpp"

namespace stokespec {

// Hermitian 2x2 symbol at wave number k:
//   plain:   [[nu k^2, i v* k], [-i v* k, 0]]
//   shifted: [[nu k^2 - nu lambda1/2, i v* k], [-i v* k, nu lambda1/2]]
struct SymbolMatrix {
    double nu = 1.0, v_star = 1.0;
    double k = 0.0;
    bool shifted = false;
    double lambda1_omega = 0.0;  // used only by the shifted variant
};

inline SymbolMatrix make_symbol(const FluidParams& p, double k) {
    ensure(k >= 0, "make_symbol: wave number must be nonnegative");
    return {p.nu, p.v_star, k, false, 0.0};
}

inline SymbolMatrix make_shifted_symbol(const FluidParams& p, double k, double lambda1_omega) {
    ensure(k >= 0, "make_shifted_symbol: wave number must be nonnegative");
    ensure(lambda1_omega > 0, "make_shifted_symbol: lambda1 must be positive");
    return {p.nu, p.v_star, k, true, lambda1_omega};
}

// Closed-form eigenvalue pair (low, high) of the symbol.
inline std::pair<double, double> symbol_eigenvalues(const SymbolMatrix& s) {
    const double shift = s.shifted ? 0.5 * s.nu * s.lambda1_omega : 0.0;
    return herm2_eigs(s.nu * s.k * s.k - shift, shift, {0.0, s.v_star * s.k});
}

// Rotation angle of the positive symbol eigenvector pair: arctan(Re*) / 2.
inline double symbol_angle(const FluidParams& p, double lambda1_omega) {
    return 0.5 * std::atan(reynolds_number(p, lambda1_omega));
}

// Exponential decay rate nu lambda1 (1 - Re*); negative in the unstable regime.
inline double decay_exponent(double nu, double lambda1_omega, double re_star) {
    ensure(lambda1_omega > 0, "decay_exponent: lambda1 must be positive");
    return nu * lambda1_omega * (1.0 - re_star);
}

struct EssentialSpectra {
    std::pair<double, double> ess_s;  // two-point essential spectrum of the plain operator
    std::pair<double, double> ess_t;  // its image under the optimal shift
    double slab_bound = 0.0;          // nu lambda1 (1 - Re* max(1, Re*/2)) / 2
};

inline EssentialSpectra essential_spectra(const FluidParams& p, double lambda1_omega) {
    ensure(lambda1_omega > 0, "essential_spectra: lambda1 must be positive");
    const double re = reynolds_number(p, lambda1_omega);
    const double mu_opt = 0.5 * p.nu * lambda1_omega;
    EssentialSpectra out;
    out.ess_s = {-p.v_star * p.v_star / p.nu, -0.5 * p.v_star * p.v_star / p.nu};
    out.ess_t = {mu_opt + out.ess_s.first, mu_opt + out.ess_s.second};
    out.slab_bound = mu_opt * (1.0 - re * std::max(1.0, 0.5 * re));
    return out;
}

struct SymbolComparisonRow {
    double bottom = 0.0, lam_minus = 0.0, ratio_bottom = 0.0;
    double lambda1_positive = 0.0, lam_plus = 0.0, ratio_top = 0.0;
    bool decoupled = false;  // v* = 0: ratios defined as 1 by continuity
};

// Ratios of the assembled operator's spectral extremes to the symbol
// eigenvalues evaluated at the wave number sqrt(lambda1_h).
inline SymbolComparisonRow symbol_comparison(const DiscreteOperators& ops,
                                                 const FluidParams& params,
                                                 const SpectrumResult& spec) {
    const double lambda1_h = fd_eigenvalue_oracle(ops.grid, 1, 1);
    const auto [lam_minus, lam_plus] =
        symbol_eigenvalues(make_symbol(params, std::sqrt(lambda1_h)));
    const Extremes ex = classified_extremes(spec);
    SymbolComparisonRow row;
    row.bottom = ex.bottom;
    row.lam_minus = lam_minus;
    row.lambda1_positive = ex.lambda1_positive;
    row.lam_plus = lam_plus;
    row.decoupled = params.v_star == 0.0;
    row.ratio_bottom = row.decoupled ? 1.0 : ex.bottom / lam_minus;
    row.ratio_top = ex.lambda1_positive / lam_plus;
    return row;
}

struct DecayCheck {
    double alpha = 0.0;                  // nu lambda1_h (1 - Re*_h)
    double symbol_min_doubled = 0.0;     // 2 * min eig of the shifted symbol at k = sqrt(lambda1_h)
    double identity_residual = 0.0;      // |alpha - symbol_min_doubled|
    double min_eig_shifted = 0.0;        // min eig of the assembled shifted operator
    double shifted_norm = 0.0;
    double ratio = 0.0;                  // alpha / (2 min eig shifted)
};

// The decay rate equals twice the shifted symbol's smallest eigenvalue exactly,
// and is bounded by twice the assembled shifted operator's smallest eigenvalue.
inline DecayCheck decay_exponent_relations(const DiscreteOperators& ops, const FluidParams& params) {
    const double lambda1_h = fd_eigenvalue_oracle(ops.grid, 1, 1);
    const double re_h = reynolds_number(params, lambda1_h);
    DecayCheck out;
    out.alpha = decay_exponent(params.nu, lambda1_h, re_h);
    const auto [lo, hi] =
        symbol_eigenvalues(make_shifted_symbol(params, std::sqrt(lambda1_h), lambda1_h));
    (void)hi;
    out.symbol_min_doubled = 2.0 * lo;
    out.identity_residual = std::abs(out.alpha - out.symbol_min_doubled);
    const BlockOperator shifted = assemble_shifted(ops, params, 0.5 * params.nu * lambda1_h);
    const EigResult eig = sym_eigensolve(shifted.matrix, false);
    out.min_eig_shifted = eig.values(0);
    out.shifted_norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    out.ratio = out.min_eig_shifted != 0.0 ? out.alpha / (2.0 * out.min_eig_shifted) : 0.0;
    return out;
}

}  // namespace stokespec
