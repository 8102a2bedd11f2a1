// Dense symmetric eigensolves and singular values (LAPACK backed).
#pragma once
#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace stokespec {

// Eigensolver failure carrying the tridiagonal reduction of the input so the
// caller can diagnose which part of the spectrum stalled.
struct EigenSolveError : ComputeError {
    int info;
    std::vector<double> tridiag_main, tridiag_sub;
    EigenSolveError(const std::string& msg, int info_, std::vector<double> d, std::vector<double> e)
        : ComputeError(msg), info(info_), tridiag_main(std::move(d)), tridiag_sub(std::move(e)) {}
};

struct EigResult {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXd vectors;   // empty when not requested
};

namespace detail {
// Householder tridiagonalization of a copy of A, for failure diagnostics.
inline std::pair<std::vector<double>, std::vector<double>> tridiagonal_of(const Eigen::MatrixXd& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    Eigen::MatrixXd work = A;
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0), tau(n > 1 ? n - 1 : 1);
    LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, work.data(), n, d.data(), e.data(), tau.data());
    return {std::move(d), std::move(e)};
}
}  // namespace detail

// Full eigendecomposition of a real symmetric matrix (divide and conquer).
inline EigResult sym_eigensolve(const Eigen::MatrixXd& A, bool with_vectors = true) {
    ensure(A.rows() == A.cols(), "sym_eigensolve: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(A.rows());
    EigResult r;
    r.values.resize(n);
    Eigen::MatrixXd work = A;
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                                    work.data(), std::max<lapack_int>(n, 1), r.values.data());
    if (info != 0) {
        auto [d, e] = detail::tridiagonal_of(A);
        throw EigenSolveError("sym_eigensolve: dsyevd failed with info=" + std::to_string(info),
                              info, std::move(d), std::move(e));
    }
    if (with_vectors) r.vectors = std::move(work);
    return r;
}

// Singular values of a general real matrix, descending.
inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
    const lapack_int m = static_cast<lapack_int>(A.rows());
    const lapack_int n = static_cast<lapack_int>(A.cols());
    Eigen::VectorXd s(std::min(m, n));
    if (s.size() == 0) return s;
    Eigen::MatrixXd work = A;
    const int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(),
                                    std::max<lapack_int>(m, 1), s.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw ComputeError("singular_values: dgesdd failed with info=" + std::to_string(info));
    return s;
}

// Largest singular value; 0 for an empty matrix.
inline double spectral_norm(const Eigen::MatrixXd& A) {
    if (A.size() == 0) return 0.0;
    return singular_values(A)(0);
}

// Eigenvalues (low, high) of the Hermitian 2x2 [[p, conj(w)], [w, q]].
inline std::pair<double, double> herm2_eigs(double p, double q, std::complex<double> w) {
    const double mean = 0.5 * (p + q);
    const double rad = std::hypot(0.5 * (p - q), std::abs(w));
    return {mean - rad, mean + rad};
}

}  // namespace stokespec
