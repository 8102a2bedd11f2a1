// Block operator assembly, spectra, inertia, and the coarse spectral bounds.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stokespec/blockop.hpp"
#include "stokespec/grid.hpp"
#include "stokespec/sym_eig.hpp"

using namespace stokespec;

namespace {
DiscreteOperators unit_ops(int nx, int ny) {
    return assemble_operators(build_grid(make_rectangle(1.0, 1.0), nx, ny));
}
}  // namespace

TEST_CASE("fluid parameters are validated", "[blockop]") {
    CHECK_THROWS_AS(make_fluid_params(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_fluid_params(-1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_fluid_params(1.0, -0.5), ValidationError);
    CHECK_NOTHROW(make_fluid_params(2.0, 0.0));
}

TEST_CASE("assembly lays out the blocks exactly", "[blockop]") {
    const DiscreteOperators ops = unit_ops(3, 3);
    const FluidParams params = make_fluid_params(2.0, 0.5);
    const int nv = ops.grid.n_velocity, np = ops.grid.n_pressure;
    const BlockOperator s = assemble_stokes(ops, params);
    REQUIRE(s.matrix.rows() == nv + np);
    CHECK(s.n_velocity == nv);
    CHECK(s.n_pressure == np);
    CHECK(s.shift_mu == 0.0);

    const Eigen::MatrixXd g(ops.G);
    CHECK((s.matrix.topLeftCorner(nv, nv) - 2.0 * velocity_laplacian(ops)).norm() == 0.0);
    CHECK((s.matrix.topRightCorner(nv, np) - 0.5 * g).norm() == 0.0);
    CHECK((s.matrix.bottomLeftCorner(np, nv) - 0.5 * g.transpose()).norm() == 0.0);
    CHECK(s.matrix.bottomRightCorner(np, np).norm() == 0.0);
    CHECK((s.matrix - s.matrix.transpose()).norm() == 0.0);

    const BlockOperator t = assemble_shifted(ops, params, 2.5);
    CHECK(t.shift_mu == 2.5);
    const Eigen::MatrixXd diff = t.matrix - s.matrix;
    CHECK((diff.topLeftCorner(nv, nv) + 2.5 * Eigen::MatrixXd::Identity(nv, nv)).norm() == 0.0);
    CHECK((diff.bottomRightCorner(np, np) - 2.5 * Eigen::MatrixXd::Identity(np, np)).norm() == 0.0);
    CHECK(diff.topRightCorner(nv, np).norm() == 0.0);
    CHECK((assemble_shifted(ops, params, 0.0).matrix - s.matrix).norm() == 0.0);
}

TEST_CASE("spectrum carries residual and orthonormality certificates", "[blockop]") {
    const DiscreteOperators ops = unit_ops(4, 3);
    const BlockOperator s = assemble_stokes(ops, make_fluid_params(1.0, 1.0));
    const SpectrumResult spec = full_spectrum(s);
    REQUIRE(spec.eigenvalues.size() == s.matrix.rows());
    for (int i = 1; i < spec.eigenvalues.size(); ++i)
        CHECK(spec.eigenvalues(i - 1) <= spec.eigenvalues(i));
    CHECK(spec.residual_norm <= kResidualRel * spec.op_norm);
    REQUIRE(spec.residuals.size() == spec.eigenvalues.size());
    for (int i = 0; i < spec.residuals.size(); ++i)
        CHECK(spec.residuals(i) <= kResidualRel * spec.op_norm);
    const Eigen::MatrixXd gram =
        spec.eigenvectors.transpose() * spec.eigenvectors -
        Eigen::MatrixXd::Identity(spec.eigenvalues.size(), spec.eigenvalues.size());
    CHECK(gram.norm() <= kOrthoTol * spec.eigenvalues.size());
    CHECK(spec.n_positive + spec.n_zero + spec.n_negative == spec.eigenvalues.size());
    CHECK(spec.tau_z == kZeroClassRel * spec.op_norm);
}

TEST_CASE("classified extremes match an independent reference", "[blockop]") {
    {
        const SpectrumResult spec =
            full_spectrum(assemble_stokes(unit_ops(4, 3), make_fluid_params(1.0, 1.0)));
        const Extremes ex = classified_extremes(spec);
        CHECK(ex.bottom == Catch::Approx(-0.8941528295146495).margin(1e-9));
        CHECK(ex.lambda1_positive == Catch::Approx(19.403832510032657).margin(1e-8));
    }
    {
        const SpectrumResult spec =
            full_spectrum(assemble_stokes(unit_ops(8, 8), make_fluid_params(1.0, 1.0)));
        const Extremes ex = classified_extremes(spec);
        CHECK(ex.bottom == Catch::Approx(-0.984935250627058).margin(1e-9));
        CHECK(ex.lambda1_positive == Catch::Approx(20.02585065350161).margin(1e-8));
    }
}

TEST_CASE("inertia follows the saddle-point pattern", "[blockop]") {
    const DiscreteOperators ops = unit_ops(4, 3);

    const BlockOperator coupled = assemble_stokes(ops, make_fluid_params(1.0, 1.0));
    const auto ci = inertia_counts(coupled, full_spectrum(coupled));
    CHECK(ci == std::array<int, 3>{24, 1, 11});

    const BlockOperator decoupled = assemble_stokes(ops, make_fluid_params(1.0, 0.0));
    const auto di = inertia_counts(decoupled, full_spectrum(decoupled));
    CHECK(di == std::array<int, 3>{24, 12, 0});

    const BlockOperator shifted = assemble_shifted(ops, make_fluid_params(1.0, 1.0), 1.0);
    CHECK_THROWS_AS(inertia_counts(shifted, full_spectrum(shifted)), ValidationError);
}

TEST_CASE("reynolds number closed form", "[blockop]") {
    CHECK(reynolds_number(make_fluid_params(1.0, 1.0), 19.739208802178717) ==
          Catch::Approx(0.45015815807855303).epsilon(1e-14));
    CHECK(reynolds_number(make_fluid_params(2.0, 0.0), 5.0) == 0.0);
    CHECK_THROWS_AS(reynolds_number(make_fluid_params(1.0, 1.0), 0.0), ValidationError);
}

TEST_CASE("velocity gap bound and ground-vector bracket", "[blockop]") {
    const DiscreteOperators ops = unit_ops(8, 8);
    const double lam1h = dirichlet_lambda1(ops);
    const EigResult leig = sym_eigensolve(ops.L, true);
    const Eigen::VectorXd phi = leig.vectors.col(0);

    for (const auto& [nu, vs] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {1.0, 2.0}, {4.0, 0.0}}) {
        const FluidParams params = make_fluid_params(nu, vs);
        const SpectrumResult spec = full_spectrum(assemble_stokes(ops, params));
        const Extremes ex = classified_extremes(spec);
        const double tol = 1e-9 * spec.op_norm;
        CHECK(ex.lambda1_positive >= nu * lam1h - tol);

        // Two-sided bracket via either axis-aligned embedding of the scalar
        // ground state.
        for (int axis = 0; axis < 2; ++axis) {
            Eigen::VectorXd f = Eigen::VectorXd::Zero(ops.grid.n_velocity);
            if (axis == 0)
                f.head(ops.grid.n_scalar) = phi;
            else
                f.tail(ops.grid.n_scalar) = phi;
            const double upper = nu * lam1h + vs * (ops.D * f).norm() / f.norm();
            CHECK(ex.lambda1_positive <= upper + tol);
        }
    }
}

TEST_CASE("bottom of the spectrum obeys both coarse bounds", "[blockop]") {
    const DiscreteOperators ops = unit_ops(8, 8);
    const double lam1h = dirichlet_lambda1(ops);
    for (const auto& [nu, vs] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {1.0, 2.0}}) {
        const FluidParams params = make_fluid_params(nu, vs);
        const SpectrumResult spec = full_spectrum(assemble_stokes(ops, params));
        const Extremes ex = classified_extremes(spec);
        const double tol = 1e-9 * spec.op_norm;
        CHECK(ex.bottom >= -vs * vs / nu - tol);
        const double re = reynolds_number(params, lam1h);
        CHECK(std::abs(ex.bottom) <= 0.25 * re * re * ex.lambda1_positive + tol);
    }
}
