// Assembly and spectral classification of the velocity/pressure block operator.
#pragma once
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "common.hpp"
#include "grid.hpp"
#include "sym_eig.hpp"

namespace stokespec {

struct FluidParams {
    double nu = 1.0;      // viscosity, length^2 / time
    double v_star = 1.0;  // characteristic velocity, length / time
};

inline FluidParams make_fluid_params(double nu, double v_star) {
    ensure(nu > 0, "FluidParams: nu must be positive");
    ensure(v_star >= 0, "FluidParams: v_star must be nonnegative");
    return {nu, v_star};
}

// Symmetric block matrix
//   [ nu*diag(L,L) - mu*I   v*G  ]
//   [ v*G^T                 mu*I ]
// i.e. the saddle-point operator for mu = 0 and its shifted variant otherwise
// (the shift acts as -mu on the velocity block and +mu on the pressure block).
struct BlockOperator {
    Eigen::MatrixXd matrix;
    int n_velocity = 0, n_pressure = 0;
    FluidParams params;
    double shift_mu = 0.0;
    int dim() const { return n_velocity + n_pressure; }
};

inline BlockOperator assemble_shifted(const DiscreteOperators& ops, const FluidParams& params, double mu) {
    const int nv = ops.grid.n_velocity, np = ops.grid.n_pressure;
    BlockOperator op;
    op.n_velocity = nv;
    op.n_pressure = np;
    op.params = params;
    op.shift_mu = mu;
    op.matrix = Eigen::MatrixXd::Zero(nv + np, nv + np);
    op.matrix.topLeftCorner(nv, nv) = params.nu * velocity_laplacian(ops);
    op.matrix.topLeftCorner(nv, nv).diagonal().array() -= mu;
    op.matrix.bottomRightCorner(np, np).diagonal().array() += mu;
    const Eigen::MatrixXd coupling = params.v_star * Eigen::MatrixXd(ops.G);
    op.matrix.topRightCorner(nv, np) = coupling;
    op.matrix.bottomLeftCorner(np, nv) = coupling.transpose();
    return op;
}

inline BlockOperator assemble_stokes(const DiscreteOperators& ops, const FluidParams& params) {
    return assemble_shifted(ops, params, 0.0);
}

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;
    int n_positive = 0, n_zero = 0, n_negative = 0;
    double tau_z = 0.0;            // zero-classification threshold
    double op_norm = 0.0;          // max |eigenvalue|
    double residual_norm = 0.0;    // max_i |A v_i - lambda_i v_i|
    Eigen::VectorXd residuals;     // per-pair |A v_i - lambda_i v_i|
};

// Full eigendecomposition with orthonormality and residual certificates.
inline SpectrumResult full_spectrum(const BlockOperator& op) {
    SpectrumResult res;
    EigResult eig = sym_eigensolve(op.matrix, true);
    res.eigenvalues = std::move(eig.values);
    res.eigenvectors = std::move(eig.vectors);
    const int n = static_cast<int>(res.eigenvalues.size());
    res.op_norm = std::max(std::abs(res.eigenvalues(0)), std::abs(res.eigenvalues(n - 1)));
    res.tau_z = kZeroClassRel * res.op_norm;

    Eigen::MatrixXd R = op.matrix * res.eigenvectors;
    R.noalias() -= res.eigenvectors * res.eigenvalues.asDiagonal();
    res.residuals = R.colwise().norm();
    res.residual_norm = res.residuals.maxCoeff();
    if (res.residual_norm > kResidualRel * std::max(res.op_norm, 1e-300))
        throw ComputeError("full_spectrum: residual " + std::to_string(res.residual_norm) +
                           " exceeds certificate budget");
    Eigen::MatrixXd gram = res.eigenvectors.transpose() * res.eigenvectors;
    gram.diagonal().array() -= 1.0;
    if (gram.cwiseAbs().maxCoeff() > kOrthoTol)
        throw ComputeError("full_spectrum: eigenvector orthonormality certificate failed");

    for (int i = 0; i < n; ++i) {
        if (res.eigenvalues(i) > res.tau_z)
            ++res.n_positive;
        else if (res.eigenvalues(i) < -res.tau_z)
            ++res.n_negative;
        else
            ++res.n_zero;
    }
    return res;
}

struct Extremes {
    double lambda1_positive = 0.0;  // smallest eigenvalue above tau_z
    double bottom = 0.0;            // minimum eigenvalue
};

inline Extremes classified_extremes(const SpectrumResult& spec) {
    if (spec.n_positive == 0)
        throw StructureError("classified_extremes: no eigenvalue above the zero threshold");
    const int first_positive = spec.n_negative + spec.n_zero;
    return {spec.eigenvalues(first_positive), spec.eigenvalues(0)};
}

// Checks the sign-count pattern of the unshifted assembly: (n_velocity, 1,
// n_pressure - 1) for a nonzero coupling, (n_velocity, n_pressure, 0) for the
// decoupled v* = 0 case.
inline std::array<int, 3> inertia_counts(const BlockOperator& op, const SpectrumResult& spec) {
    ensure(op.shift_mu == 0.0, "inertia_counts: expects the unshifted operator");
    const bool coupled = op.params.v_star > 0.0;
    const int want_pos = op.n_velocity;
    const int want_zero = coupled ? 1 : op.n_pressure;
    const int want_neg = coupled ? op.n_pressure - 1 : 0;
    if (spec.n_positive != want_pos || spec.n_zero != want_zero || spec.n_negative != want_neg) {
        std::ostringstream msg;
        msg << "inertia_counts: got (" << spec.n_positive << ", " << spec.n_zero << ", "
            << spec.n_negative << "), expected (" << want_pos << ", " << want_zero << ", "
            << want_neg << "); eigenvalues near the threshold:";
        for (int i = 0; i < spec.eigenvalues.size(); ++i)
            if (std::abs(spec.eigenvalues(i)) <= 10.0 * spec.tau_z)
                msg << ' ' << spec.eigenvalues(i);
        throw StructureError(msg.str());
    }
    return {spec.n_positive, spec.n_zero, spec.n_negative};
}

// Generalized Reynolds number 2 v* / (nu sqrt(lambda1)).
inline double reynolds_number(const FluidParams& params, double lambda1_omega) {
    ensure(lambda1_omega > 0, "reynolds_number: lambda1 must be positive");
    return 2.0 * params.v_star / (params.nu * std::sqrt(lambda1_omega));
}

}  // namespace stokespec
