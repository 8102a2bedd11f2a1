// Quadratic numerical range of saddle-point block forms, with exactness certificates.
#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "common.hpp"
#include "sym_eig.hpp"

namespace stokespec {

// Block form a_plus (+) (-a_minus) with coupling v mapping the plus component
// into the minus component; a_plus and a_minus are Hermitian positive
// semidefinite.
template <class Scalar>
struct SaddleFormT {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat a_plus, a_minus, v;
    int d_plus() const { return static_cast<int>(a_plus.rows()); }
    int d_minus() const { return static_cast<int>(a_minus.rows()); }
};

using SaddleForm = SaddleFormT<double>;
using SaddleFormC = SaddleFormT<std::complex<double>>;

namespace detail {

template <class Scalar>
struct HermEig {
    Eigen::VectorXd values;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

inline HermEig<double> herm_eigensolve(const Eigen::MatrixXd& a, bool with_vectors) {
    EigResult r = sym_eigensolve(a, with_vectors);
    return {std::move(r.values), std::move(r.vectors)};
}

inline HermEig<std::complex<double>> herm_eigensolve(const Eigen::MatrixXcd& a, bool with_vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        a, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ComputeError("herm_eigensolve: complex solver did not converge");
    HermEig<std::complex<double>> out;
    out.values = es.eigenvalues();
    if (with_vectors) out.vectors = es.eigenvectors();
    return out;
}

// std::conj(double) widens to complex; this keeps the scalar type.
inline double conj_s(double x) { return x; }
inline std::complex<double> conj_s(const std::complex<double>& x) { return std::conj(x); }

template <class Scalar>
double herm_norm(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    if (a.rows() == 0) return 0.0;
    const auto eig = herm_eigensolve(a, false);
    return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(dim);
    do {
        for (int i = 0; i < dim; ++i) {
            if constexpr (std::is_same_v<Scalar, double>)
                x(i) = gauss(rng);
            else
                x(i) = Scalar(gauss(rng), gauss(rng));
        }
    } while (x.norm() == 0.0);
    return x / x.norm();
}

// A unit vector orthogonal to u (dim >= 2); free choice when u = 0.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> orthogonal_unit(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u) {
    const int dim = static_cast<int>(u.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dim);
    if (u.norm() == 0.0) {
        x(0) = Scalar(1);
        return x;
    }
    int j = 0;  // canonical direction with the smallest overlap
    for (int i = 1; i < dim; ++i)
        if (std::abs(u(i)) < std::abs(u(j))) j = i;
    x(j) = Scalar(1);
    x -= u * (conj_s(u(j)) / u.squaredNorm());
    return x / x.norm();
}

}  // namespace detail

template <class Scalar>
SaddleFormT<Scalar> make_saddle_form(typename SaddleFormT<Scalar>::Mat a_plus,
                                     typename SaddleFormT<Scalar>::Mat a_minus,
                                     typename SaddleFormT<Scalar>::Mat v) {
    ensure(a_plus.rows() == a_plus.cols() && a_minus.rows() == a_minus.cols(),
           "make_saddle_form: diagonal blocks must be square");
    ensure(v.rows() == a_minus.rows() && v.cols() == a_plus.rows(),
           "make_saddle_form: coupling shape must be d_minus x d_plus");
    ensure((a_plus - a_plus.adjoint()).norm() == 0.0 && (a_minus - a_minus.adjoint()).norm() == 0.0,
           "make_saddle_form: diagonal blocks must be Hermitian");
    for (const auto* block : {&a_plus, &a_minus}) {
        if (block->rows() == 0) continue;
        const auto eig = detail::herm_eigensolve(*block, false);
        const double scale = std::max(std::abs(eig.values(eig.values.size() - 1)), 1.0);
        if (eig.values(0) < -1e-12 * scale)
            throw ValidationError("make_saddle_form: diagonal block is not positive semidefinite");
    }
    return {std::move(a_plus), std::move(a_minus), std::move(v)};
}

// The Hermitian matrix [[a_plus, v^H], [v, -a_minus]] represented by the form.
template <class Scalar>
typename SaddleFormT<Scalar>::Mat block_operator_of_form(const SaddleFormT<Scalar>& form) {
    const int dp = form.d_plus(), dm = form.d_minus();
    typename SaddleFormT<Scalar>::Mat b(dp + dm, dp + dm);
    b.topLeftCorner(dp, dp) = form.a_plus;
    b.topRightCorner(dp, dm) = form.v.adjoint();
    b.bottomLeftCorner(dm, dp) = form.v;
    b.bottomRightCorner(dm, dm) = -form.a_minus;
    return b;
}

template <class Scalar>
struct QnrSampleT {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x_plus, x_minus;  // unit vectors
    Eigen::Matrix<Scalar, 2, 2> matrix2;
    double eig_low = 0.0, eig_high = 0.0;
};

using QnrSample = QnrSampleT<double>;

// The 2x2 compression [[a_plus[x+], conj(v[x+,x-])], [v[x+,x-], -a_minus[x-]]]
// at a unit component pair; its two eigenvalues are range points.
template <class Scalar>
QnrSampleT<Scalar> qnr_sample(const SaddleFormT<Scalar>& form,
                              Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x_plus,
                              Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x_minus) {
    ensure(x_plus.size() == form.d_plus() && x_minus.size() == form.d_minus(),
           "qnr_sample: component dimensions do not match the form");
    ensure(x_plus.norm() > 0 && x_minus.norm() > 0, "qnr_sample: zero component vector");
    QnrSampleT<Scalar> s;
    s.x_plus = x_plus / x_plus.norm();
    s.x_minus = x_minus / x_minus.norm();
    const double p = std::real(Scalar(s.x_plus.adjoint() * form.a_plus * s.x_plus));
    const double q = -std::real(Scalar(s.x_minus.adjoint() * form.a_minus * s.x_minus));
    const Scalar w = Scalar(s.x_minus.adjoint() * form.v * s.x_plus);
    s.matrix2 << Scalar(p), detail::conj_s(w), w, Scalar(q);
    std::complex<double> wc;
    if constexpr (std::is_same_v<Scalar, double>)
        wc = std::complex<double>(w, 0.0);
    else
        wc = w;
    std::tie(s.eig_low, s.eig_high) = herm2_eigs(p, q, wc);
    return s;
}

struct QnrBudget {
    int n_samples = 256;
    unsigned long long seed = 0;
    bool refine = true;  // append samples seeded by extreme eigenvectors
};

template <class Scalar>
struct QnrEnvelopeT {
    double inf_estimate = 0.0, sup_estimate = 0.0;
    std::vector<QnrSampleT<Scalar>> samples;  // random draws first, refined seeds last
};

using QnrEnvelope = QnrEnvelopeT<double>;

namespace detail {

// Splits an eigenvector of the block operator into normalized components,
// replacing a vanishing component by the first canonical direction.
template <class Scalar>
QnrSampleT<Scalar> seeded_sample(const SaddleFormT<Scalar>& form,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& z) {
    const int dp = form.d_plus();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> zp = z.head(dp), zm = z.tail(form.d_minus());
    const double scale = z.norm();
    if (zp.norm() <= 1e-14 * scale) {
        zp.setZero();
        zp(0) = Scalar(1);
    }
    if (zm.norm() <= 1e-14 * scale) {
        zm.setZero();
        zm(0) = Scalar(1);
    }
    return qnr_sample(form, zp, zm);
}

}  // namespace detail

// Inf/sup of the quadratic numerical range: random unit-pair sampling plus
// refinement seeded by the extreme eigenvectors of the block operator. The
// seeded samples attain the spectral extremes exactly (up to rounding), since
// an eigenvector's normalized components generate a 2x2 compression having the
// eigenvalue itself in its spectrum.
template <class Scalar>
QnrEnvelopeT<Scalar> qnr_envelope(const SaddleFormT<Scalar>& form, const QnrBudget& budget) {
    ensure(budget.n_samples > 0, "qnr_envelope: sample budget must be positive");
    QnrEnvelopeT<Scalar> env;
    std::mt19937_64 rng(budget.seed);
    for (int i = 0; i < budget.n_samples; ++i) {
        auto xp = detail::random_unit_vector<Scalar>(form.d_plus(), rng);
        auto xm = detail::random_unit_vector<Scalar>(form.d_minus(), rng);
        env.samples.push_back(qnr_sample(form, std::move(xp), std::move(xm)));
    }
    if (budget.refine) {
        const auto eig = detail::herm_eigensolve(block_operator_of_form(form), true);
        env.samples.push_back(detail::seeded_sample(form, eig.vectors.col(0).eval()));
        env.samples.push_back(
            detail::seeded_sample(form, eig.vectors.col(eig.vectors.cols() - 1).eval()));
    }
    env.inf_estimate = env.samples.front().eig_low;
    env.sup_estimate = env.samples.front().eig_high;
    for (const auto& s : env.samples) {
        env.inf_estimate = std::min(env.inf_estimate, s.eig_low);
        env.sup_estimate = std::max(env.sup_estimate, s.eig_high);
    }
    return env;
}

struct CertificateItem {
    std::string name;
    bool pass = true;
    bool applicable = true;
    double worst = 0.0;  // largest observed defect, 0 when clean
};

template <class Scalar>
struct QnrCertificateT {
    std::vector<CertificateItem> items;
    bool all_pass = true;
    QnrEnvelopeT<Scalar> envelope;
    double alpha_plus = 0.0, alpha_minus = 0.0;  // diagonal-block lower bounds used by the gap item
};

using QnrCertificate = QnrCertificateT<double>;

// Certifies the classical range properties of the form: the spectrum lies in
// the sampled range, range points are attained by combined vectors, sampled
// extremes match the spectral extremes, diagonal-block numerical ranges embed
// when the opposite component has dimension > 1, and the spectral gap
// determined by the diagonal lower bounds is free of eigenvalues.
template <class Scalar>
QnrCertificateT<Scalar> qnr_certificate(const SaddleFormT<Scalar>& form, const QnrBudget& budget) {
    QnrCertificateT<Scalar> cert;
    const auto b = block_operator_of_form(form);
    const auto eig = detail::herm_eigensolve(b, true);
    const double bnorm =
        std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    const double scale = std::max(bnorm, 1.0);
    cert.envelope = qnr_envelope(form, budget);

    auto push = [&cert](std::string name, bool pass, double worst, bool applicable = true) {
        cert.items.push_back({std::move(name), pass, applicable, worst});
        cert.all_pass = cert.all_pass && (pass || !applicable);
    };

    {  // every eigenvalue is reproduced by its own component-split sample
        double worst = 0.0;
        for (int i = 0; i < eig.values.size(); ++i) {
            const auto s = detail::seeded_sample(form, eig.vectors.col(i).eval());
            worst = std::max(worst, std::min(std::abs(s.eig_low - eig.values(i)),
                                             std::abs(s.eig_high - eig.values(i))));
        }
        push("spectrum_in_range", worst <= 1e-6 * scale, worst);
    }
    {  // sampled range points and Rayleigh quotients stay inside the spectral hull
        std::mt19937_64 rng(budget.seed + 1);
        const double slack = 1e-10 * scale;
        const double lo = eig.values(0) - slack, hi = eig.values(eig.values.size() - 1) + slack;
        double worst = 0.0;
        for (int i = 0; i < budget.n_samples; ++i) {
            const auto z = detail::random_unit_vector<Scalar>(form.d_plus() + form.d_minus(), rng);
            const double rayleigh = std::real(Scalar(z.adjoint() * b * z));
            worst = std::max({worst, lo - rayleigh, rayleigh - hi});
        }
        for (const auto& s : cert.envelope.samples)
            worst = std::max({worst, lo - s.eig_low, s.eig_high - hi});
        push("numerical_range_hull", worst <= 0.0, std::max(worst, 0.0));
    }
    {  // each sampled range point is a Rayleigh quotient of a combined vector
        double worst = 0.0;
        for (const auto& s : cert.envelope.samples) {
            for (const double target : {s.eig_low, s.eig_high}) {
                const double p = std::real(s.matrix2(0, 0)), q = std::real(s.matrix2(1, 1));
                const Scalar w = s.matrix2(1, 0);
                // Eigenvector of the 2x2 compression for `target`, from whichever
                // row construction is better conditioned.
                Eigen::Matrix<Scalar, 2, 1> ca, cb, c;
                ca << Scalar(target - q), w;
                cb << detail::conj_s(w), Scalar(target - p);
                c = ca.norm() >= cb.norm() ? ca : cb;
                if (c.norm() == 0.0) c << Scalar(1), Scalar(0);
                c /= c.norm();
                Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z(form.d_plus() + form.d_minus());
                z.head(form.d_plus()) = c(0) * s.x_plus;
                z.tail(form.d_minus()) = c(1) * s.x_minus;
                worst = std::max(worst, std::abs(std::real(Scalar(z.adjoint() * b * z)) - target));
            }
        }
        push("range_points_attained", worst <= 1e-10 * scale, worst);
    }
    {  // sampled inf/sup agree with the spectral extremes
        const double worst = std::max(std::abs(cert.envelope.inf_estimate - eig.values(0)),
                                      std::abs(cert.envelope.sup_estimate -
                                               eig.values(eig.values.size() - 1)));
        push("extremes_match_spectrum", worst <= 1e-8 * scale, worst);
    }
    {  // diagonal-block values are attained by decoupling the other component
        const bool applicable = form.d_minus() > 1 || form.d_plus() > 1;
        std::mt19937_64 rng(budget.seed + 2);
        double worst = 0.0;
        const int rounds = std::min(budget.n_samples, 32);
        for (int i = 0; i < rounds; ++i) {
            if (form.d_minus() > 1) {
                const auto xp = detail::random_unit_vector<Scalar>(form.d_plus(), rng);
                const auto xm = detail::orthogonal_unit<Scalar>((form.v * xp).eval());
                const auto s = qnr_sample(form, xp, xm);
                const double target = std::real(Scalar(xp.adjoint() * form.a_plus * xp));
                worst = std::max(worst, std::abs(s.eig_high - target));
            }
            if (form.d_plus() > 1) {
                const auto xm = detail::random_unit_vector<Scalar>(form.d_minus(), rng);
                const auto xp = detail::orthogonal_unit<Scalar>((form.v.adjoint() * xm).eval());
                const auto s = qnr_sample(form, xp, xm);
                const double target = -std::real(Scalar(xm.adjoint() * form.a_minus * xm));
                worst = std::max(worst, std::abs(s.eig_low - target));
            }
        }
        push("diagonal_ranges_included", worst <= 1e-10 * scale, worst, applicable);
    }
    {  // the interval between the diagonal lower bounds is free of spectrum
        cert.alpha_plus = form.d_plus() > 0 ? detail::herm_eigensolve(form.a_plus, false).values(0) : 0.0;
        cert.alpha_minus =
            form.d_minus() > 0 ? detail::herm_eigensolve(form.a_minus, false).values(0) : 0.0;
        const double lo = -cert.alpha_minus + 1e-10 * scale, hi = cert.alpha_plus - 1e-10 * scale;
        double worst = 0.0;
        for (int i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > lo && eig.values(i) < hi)
                worst = std::max(worst, std::min(eig.values(i) - lo, hi - eig.values(i)));
        push("spectral_gap_exclusion", worst == 0.0, worst);
    }
    return cert;
}

// Seeded dense random instance: positive definite diagonal blocks R^H R and an
// unstructured coupling, for stress-testing the certificate.
template <class Scalar>
SaddleFormT<Scalar> random_saddle_form(int d_plus, int d_minus, std::mt19937_64& rng) {
    ensure(d_plus > 0 && d_minus > 0, "random_saddle_form: dimensions must be positive");
    using Mat = typename SaddleFormT<Scalar>::Mat;
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&](int rows, int cols) {
        Mat m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) {
                if constexpr (std::is_same_v<Scalar, double>)
                    m(i, j) = gauss(rng);
                else
                    m(i, j) = Scalar(gauss(rng), gauss(rng));
            }
        return m;
    };
    const Mat rp = draw(d_plus, d_plus), rm = draw(d_minus, d_minus);
    Mat a_plus = rp.adjoint() * rp, a_minus = rm.adjoint() * rm;
    a_plus = Mat((a_plus + Mat(a_plus.adjoint())) / Scalar(2));
    a_minus = Mat((a_minus + Mat(a_minus.adjoint())) / Scalar(2));
    return make_saddle_form<Scalar>(std::move(a_plus), std::move(a_minus), draw(d_minus, d_plus));
}

}  // namespace stokespec
