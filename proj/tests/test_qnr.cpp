// Quadratic numerical range: samples, envelopes, and the exactness certificate.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "stokespec/blockop.hpp"
#include "stokespec/grid.hpp"
#include "stokespec/qnr.hpp"

using namespace stokespec;
using Catch::Approx;

TEST_CASE("saddle form construction is validated", "[qnr]") {
    Eigen::MatrixXd a2 = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd a1 = Eigen::MatrixXd::Identity(1, 1);

    Eigen::MatrixXd never_square(2, 3);
    never_square.setZero();
    CHECK_THROWS_AS(make_saddle_form<double>(never_square, a1, Eigen::MatrixXd::Zero(1, 2)),
                    ValidationError);

    Eigen::MatrixXd skew = a2;
    skew(0, 1) = 1.0;  // not symmetric
    CHECK_THROWS_AS(make_saddle_form<double>(skew, a1, Eigen::MatrixXd::Zero(1, 2)),
                    ValidationError);

    Eigen::MatrixXd indefinite = a2;
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(make_saddle_form<double>(indefinite, a1, Eigen::MatrixXd::Zero(1, 2)),
                    ValidationError);

    CHECK_THROWS_AS(make_saddle_form<double>(a2, a1, Eigen::MatrixXd::Zero(2, 1)),
                    ValidationError);  // coupling must be d_minus x d_plus
    CHECK_NOTHROW(make_saddle_form<double>(a2, a1, Eigen::MatrixXd::Zero(1, 2)));
}

TEST_CASE("hand-built three by three form", "[qnr]") {
    Eigen::MatrixXd ap(2, 2), am(1, 1), v(1, 2);
    ap << 2.0, 0.0, 0.0, 1.0;
    am << 1.0;
    v << 1.0, 0.0;
    const SaddleForm form = make_saddle_form<double>(ap, am, v);
    const Eigen::MatrixXd b = block_operator_of_form(form);
    Eigen::MatrixXd expect(3, 3);
    expect << 2.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0;
    CHECK((b - expect).norm() == 0.0);

    // Spectrum {(1 - sqrt 13)/2, 1, (1 + sqrt 13)/2}.
    const auto eig = detail::herm_eigensolve(b, false);
    CHECK(eig.values(0) == Approx(-1.302775637731995).epsilon(1e-14));
    CHECK(eig.values(1) == Approx(1.0).margin(1e-13));
    CHECK(eig.values(2) == Approx(2.302775637731995).epsilon(1e-14));

    const QnrEnvelope env = qnr_envelope(form, QnrBudget{128, 5, true});
    CHECK(env.inf_estimate == Approx(-1.302775637731995).margin(1e-8));
    CHECK(env.sup_estimate == Approx(2.302775637731995).margin(1e-8));

    const QnrCertificate cert = qnr_certificate(form, QnrBudget{128, 5, true});
    CHECK(cert.all_pass);
    CHECK(cert.alpha_plus == Approx(1.0).margin(1e-12));
    CHECK(cert.alpha_minus == Approx(1.0).margin(1e-12));
}

TEST_CASE("sample reproduces the two by two compression", "[qnr]") {
    Eigen::MatrixXd ap(2, 2), am(1, 1), v(1, 2);
    ap << 2.0, 0.0, 0.0, 1.0;
    am << 1.0;
    v << 1.0, 0.0;
    const SaddleForm form = make_saddle_form<double>(ap, am, v);
    Eigen::VectorXd xp(2), xm(1);
    xp << 1.0, 0.0;
    xm << 1.0;
    const QnrSample s = qnr_sample(form, xp, xm);
    Eigen::Matrix2d expect;
    expect << 2.0, 1.0, 1.0, -1.0;
    CHECK((s.matrix2 - expect).norm() == 0.0);
    CHECK(s.eig_low == Approx(-1.302775637731995).epsilon(1e-14));
    CHECK(s.eig_high == Approx(2.302775637731995).epsilon(1e-14));

    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(qnr_sample(form, zero, xm), ValidationError);
}

TEST_CASE("closed form of the two by two Hermitian eigenvalues", "[qnr]") {
    const auto [lo, hi] = herm2_eigs(3.0, -1.0, std::complex<double>(0.0, 2.0));
    CHECK(lo == Approx(-1.8284271247461903).epsilon(1e-14));
    CHECK(hi == Approx(3.8284271247461903).epsilon(1e-14));
    const auto [l2, h2] = herm2_eigs(-0.5, 2.0, std::complex<double>(0.0, 0.0));
    CHECK(l2 == Approx(-0.5).margin(0.0));
    CHECK(h2 == Approx(2.0).margin(0.0));
}

TEST_CASE("random real forms all certify", "[qnr]") {
    std::mt19937_64 rng(2026);
    for (int f = 0; f < 50; ++f) {
        const SaddleForm form = random_saddle_form<double>(5, 4, rng);
        const QnrCertificate cert =
            qnr_certificate(form, QnrBudget{256, 100ull + static_cast<unsigned>(f), true});
        INFO("form " << f);
        for (const auto& item : cert.items) {
            INFO(item.name << " worst " << item.worst);
            CHECK((item.pass || !item.applicable));
        }
        REQUIRE(cert.all_pass);
        const auto eig = detail::herm_eigensolve(block_operator_of_form(form), false);
        const double scale =
            std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
        CHECK(std::abs(cert.envelope.inf_estimate - eig.values(0)) <= 1e-8 * scale);
        CHECK(std::abs(cert.envelope.sup_estimate - eig.values(eig.values.size() - 1)) <=
              1e-8 * scale);
    }
}

TEST_CASE("random complex forms all certify", "[qnr]") {
    std::mt19937_64 rng(7);
    for (int f = 0; f < 20; ++f) {
        const SaddleFormC form = random_saddle_form<std::complex<double>>(4, 3, rng);
        const auto cert =
            qnr_certificate(form, QnrBudget{192, 500ull + static_cast<unsigned>(f), true});
        INFO("form " << f);
        REQUIRE(cert.all_pass);
    }
}

TEST_CASE("spectral gap between the diagonal bounds stays empty", "[qnr]") {
    std::mt19937_64 rng(99);
    const SaddleForm form = random_saddle_form<double>(6, 5, rng);
    const QnrCertificate cert = qnr_certificate(form, QnrBudget{128, 1, true});
    REQUIRE(cert.all_pass);
    CHECK(cert.alpha_plus > 0.0);
    CHECK(cert.alpha_minus > 0.0);
    const auto eig = detail::herm_eigensolve(block_operator_of_form(form), false);
    for (int i = 0; i < eig.values.size(); ++i) {
        const bool inside =
            eig.values(i) > -cert.alpha_minus + 1e-9 && eig.values(i) < cert.alpha_plus - 1e-9;
        CHECK(!inside);
    }
}

TEST_CASE("single-dimension components are handled", "[qnr]") {
    std::mt19937_64 rng(4);
    const SaddleForm form = random_saddle_form<double>(1, 1, rng);
    const QnrCertificate cert = qnr_certificate(form, QnrBudget{32, 2, true});
    CHECK(cert.all_pass);
    bool saw_na = false;
    for (const auto& item : cert.items)
        if (item.name == "diagonal_ranges_included") saw_na = !item.applicable;
    CHECK(saw_na);  // no orthogonal witness exists in dimension one
}

TEST_CASE("discrete flow operator viewed as a saddle form", "[qnr]") {
    const DiscreteOperators ops = assemble_operators(build_grid(make_rectangle(1.0, 1.0), 3, 3));
    const FluidParams params = make_fluid_params(1.0, 1.0);
    const BlockOperator s = assemble_stokes(ops, params);

    const Eigen::MatrixXd a_plus = params.nu * velocity_laplacian(ops);
    const Eigen::MatrixXd a_minus =
        Eigen::MatrixXd::Zero(ops.grid.n_pressure, ops.grid.n_pressure);
    const Eigen::MatrixXd coupling = params.v_star * Eigen::MatrixXd(ops.G).transpose();
    const SaddleForm form = make_saddle_form<double>(a_plus, a_minus, coupling);
    CHECK((block_operator_of_form(form) - s.matrix).norm() == 0.0);

    const SpectrumResult spec = full_spectrum(s);
    const QnrCertificate cert = qnr_certificate(form, QnrBudget{256, 12, true});
    REQUIRE(cert.all_pass);
    CHECK(std::abs(cert.envelope.inf_estimate - spec.eigenvalues(0)) <= 1e-8 * spec.op_norm);
    CHECK(std::abs(cert.envelope.sup_estimate -
                   spec.eigenvalues(spec.eigenvalues.size() - 1)) <= 1e-8 * spec.op_norm);
}
