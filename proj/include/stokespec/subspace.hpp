// Spectral projections, principal angles, and the shifted-operator coupling bound.
#pragma once
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "blockop.hpp"
#include "common.hpp"
#include "grid.hpp"
#include "sym_eig.hpp"

namespace stokespec {

struct SubspaceBasis {
    Eigen::MatrixXd columns;  // orthonormal, ambient_dim x subspace_dim
    std::string origin_tag;
};

// Orthonormal eigenvector basis of the part of the spectrum strictly inside
// (lo, hi). Finite endpoints must stay clear of every eigenvalue; the guard is
// slightly inside tau_z so that the canonical cut at lo = tau_z does not
// collide with the kernel eigenvalue it is designed to exclude.
inline SubspaceBasis spectral_projection_basis(const SpectrumResult& spec, double lo, double hi,
                                               std::string tag = "") {
    ensure(lo < hi, "spectral_projection_basis: need lo < hi");
    const double guard = 0.99 * spec.tau_z;
    for (int i = 0; i < spec.eigenvalues.size(); ++i) {
        const double ev = spec.eigenvalues(i);
        if ((std::isfinite(lo) && std::abs(ev - lo) < guard) ||
            (std::isfinite(hi) && std::abs(ev - hi) < guard))
            throw ComputeError("spectral_projection_basis: eigenvalue " + std::to_string(ev) +
                               " collides with interval endpoint");
    }
    std::vector<int> pick;
    for (int i = 0; i < spec.eigenvalues.size(); ++i)
        if (spec.eigenvalues(i) > lo && spec.eigenvalues(i) < hi) pick.push_back(i);
    SubspaceBasis basis;
    basis.columns.resize(spec.eigenvectors.rows(), static_cast<int>(pick.size()));
    for (int c = 0; c < static_cast<int>(pick.size()); ++c)
        basis.columns.col(c) = spec.eigenvectors.col(pick[c]);
    basis.origin_tag = tag.empty()
                           ? "E((" + std::to_string(lo) + ", " + std::to_string(hi) + "))"
                           : std::move(tag);
    return basis;
}

struct AngleResult {
    std::vector<double> principal_angles;  // ascending, radians in [0, pi/2]
    double theta_norm = 0.0;               // max principal angle
    double p_minus_q_norm = 0.0;           // operator norm of the projection difference
};

// Principal angles from two singular value decompositions: cosines from u^T v
// and sines from the residual (I - u u^T) v. Angles below pi/4 are taken from
// the sine route, where arccos of a near-unit cosine would lose half the
// digits. The projection-difference norm is computed independently from the
// assembled projectors.
inline AngleResult principal_angles(const SubspaceBasis& u, const SubspaceBasis& v) {
    ensure(u.columns.rows() == v.columns.rows(), "principal_angles: ambient dimensions differ");
    AngleResult out;
    if (u.columns.size() > 0 && v.columns.size() > 0) {
        const Eigen::MatrixXd cross = u.columns.transpose() * v.columns;
        const Eigen::VectorXd cosines = singular_values(cross);  // descending
        const Eigen::VectorXd sines =
            singular_values((v.columns - u.columns * cross).eval());  // descending
        const int k = static_cast<int>(cosines.size());
        std::vector<double> from_cos, from_sin;
        for (int i = 0; i < k; ++i)
            from_cos.push_back(std::acos(std::clamp(cosines(i), 0.0, 1.0)));
        std::sort(from_cos.begin(), from_cos.end());
        // Ascending sine-route angles; when the dimensions differ the surplus
        // angles are pi/2 and sort to the tail, leaving the k principal ones.
        for (Eigen::Index i = sines.size() - 1; i >= 0; --i)
            from_sin.push_back(std::asin(std::clamp(sines(i), 0.0, 1.0)));
        for (int i = 0; i < k; ++i)
            out.principal_angles.push_back(
                from_cos[i] > 0.25 * std::numbers::pi ? from_cos[i] : from_sin[i]);
    }
    out.theta_norm = out.principal_angles.empty() ? 0.0 : out.principal_angles.back();

    Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(u.columns.rows(), u.columns.rows());
    if (u.columns.size() > 0) diff.noalias() += u.columns * u.columns.transpose();
    if (v.columns.size() > 0) diff.noalias() -= v.columns * v.columns.transpose();
    const EigResult eig = sym_eigensolve(diff, false);
    out.p_minus_q_norm = diff.rows() == 0 ? 0.0
                                          : std::max(std::abs(eig.values(0)),
                                                     std::abs(eig.values(eig.values.size() - 1)));
    return out;
}

// Angle between the positive spectral subspace of the assembled operator and
// the canonical velocity subspace (first n_velocity coordinates).
inline AngleResult operator_angle_norm(const BlockOperator& op, const SpectrumResult& spec) {
    inertia_counts(op, spec);  // validates the dimension pattern, or throws
    const SubspaceBasis positive = spectral_projection_basis(
        spec, spec.tau_z, std::numeric_limits<double>::infinity(), "E((0,inf))");
    SubspaceBasis h_plus;
    h_plus.columns = Eigen::MatrixXd::Identity(op.dim(), op.n_velocity);
    h_plus.origin_tag = "H_plus";
    return principal_angles(h_plus, positive);
}

struct GammaEstimate {
    double exact = 0.0;     // largest singular value of the weighted coupling
    double envelope = 0.0;  // closed-form Poincare bound
};

// Relative coupling bound of the shifted operator: the exact value is
// (v*/sqrt(mu)) * sigma_max(D (nu diag(L,L) - mu I)^(-1/2)); the envelope is
// v* / sqrt((nu - mu/lambda1_h) mu).
inline GammaEstimate gamma_estimate(const DiscreteOperators& ops, const FluidParams& params, double mu) {
    const double lambda1_h = fd_eigenvalue_oracle(ops.grid, 1, 1);
    ensure(mu > 0 && mu < params.nu * lambda1_h,
           "gamma_estimate: mu must lie strictly inside (0, nu*lambda1_h)");
    GammaEstimate out;
    out.envelope = params.v_star / std::sqrt((params.nu - mu / lambda1_h) * mu);
    if (params.v_star == 0.0) return out;

    const EigResult eig = sym_eigensolve(ops.L, true);
    Eigen::VectorXd inv_sqrt(eig.values.size());
    for (int i = 0; i < eig.values.size(); ++i)
        inv_sqrt(i) = 1.0 / std::sqrt(params.nu * eig.values(i) - mu);
    const Eigen::MatrixXd w = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
    const int ns = ops.grid.n_scalar;
    Eigen::MatrixXd weighted(ops.grid.n_pressure, ops.grid.n_velocity);
    const Eigen::MatrixXd d_dense(ops.D);
    weighted.leftCols(ns) = d_dense.leftCols(ns) * w;
    weighted.rightCols(ns) = d_dense.rightCols(ns) * w;
    out.exact = params.v_star / std::sqrt(mu) * spectral_norm(weighted);
    return out;
}

struct BsSample {
    double mu = 0.0;
    double gamma = 0.0;
    double envelope = 0.0;
    double min_eig_shifted = 0.0;
    bool consistent = true;
};

struct BsReport {
    std::vector<BsSample> samples;
    bool all_consistent = true;
    double tolerance = 0.0;  // absolute slack granted around zero
};

// Sweeps 21 equispaced interior shifts and cross-checks the sign of the
// shifted operator's smallest eigenvalue against the coupling bound gamma < 1
// (the geometric Birman-Schwinger correspondence, exact in finite dimensions).
inline BsReport birman_schwinger_check(const DiscreteOperators& ops, const FluidParams& params) {
    const double lambda1_h = fd_eigenvalue_oracle(ops.grid, 1, 1);
    BsReport report;
    for (int k = 1; k <= 21; ++k) {
        BsSample s;
        s.mu = k * params.nu * lambda1_h / 22.0;
        const GammaEstimate gamma = gamma_estimate(ops, params, s.mu);
        s.gamma = gamma.exact;
        s.envelope = gamma.envelope;
        const BlockOperator shifted = assemble_shifted(ops, params, s.mu);
        const EigResult eig = sym_eigensolve(shifted.matrix, false);
        s.min_eig_shifted = eig.values(0);
        const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
        const double tol = kZeroClassRel * norm;
        report.tolerance = std::max(report.tolerance, tol);
        s.consistent = gamma.exact < 1.0 ? s.min_eig_shifted > -tol : s.min_eig_shifted < tol;
        report.all_consistent = report.all_consistent && s.consistent;
        report.samples.push_back(s);
    }
    return report;
}

}  // namespace stokespec
