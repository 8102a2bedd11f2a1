// Rectangle grids with the Dirichlet Laplacian, pressure gradient, and divergence.
#pragma once
#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "common.hpp"
#include "sym_eig.hpp"

namespace stokespec {

struct Rectangle {
    double side_a = 1.0, side_b = 1.0;
};

inline Rectangle make_rectangle(double a, double b) {
    ensure(a > 0 && b > 0, "Rectangle sides must be positive");
    return {a, b};
}

// Uniform tensor grid of interior nodes; velocity fields are eliminated on the
// boundary, the pressure field carries no boundary condition.
struct Grid {
    Rectangle rectangle;
    int n_x = 0, n_y = 0;        // interior points per axis
    double h_x = 0.0, h_y = 0.0;
    int n_scalar = 0;            // n_x * n_y
    int n_velocity = 0;          // 2 * n_scalar
    int n_pressure = 0;          // n_scalar
    // Row-major scalar dof index, x fastest.
    int index(int i, int j) const { return j * n_x + i; }
};

inline Grid build_grid(const Rectangle& rect, int n_x, int n_y) {
    ensure(rect.side_a > 0 && rect.side_b > 0, "build_grid: sides must be positive");
    ensure(n_x >= 2 && n_y >= 2, "build_grid: need at least 2 interior points per axis");
    Grid g;
    g.rectangle = rect;
    g.n_x = n_x;
    g.n_y = n_y;
    g.h_x = rect.side_a / (n_x + 1);
    g.h_y = rect.side_b / (n_y + 1);
    g.n_scalar = n_x * n_y;
    g.n_velocity = 2 * g.n_scalar;
    g.n_pressure = g.n_scalar;
    return g;
}

// Exact eigenvalue of the 5-point Dirichlet Laplacian for the tensor sine mode (j, k).
inline double fd_eigenvalue_oracle(const Grid& g, int j, int k) {
    ensure(j >= 1 && j <= g.n_x && k >= 1 && k <= g.n_y, "fd_eigenvalue_oracle: mode index out of range");
    const double pi = std::numbers::pi;
    const double sx = std::sin(j * pi * g.h_x / (2.0 * g.rectangle.side_a));
    const double sy = std::sin(k * pi * g.h_y / (2.0 * g.rectangle.side_b));
    return 4.0 / (g.h_x * g.h_x) * sx * sx + 4.0 / (g.h_y * g.h_y) * sy * sy;
}

struct DiscreteOperators {
    Grid grid;
    Eigen::MatrixXd L;                  // scalar Dirichlet Laplacian, n_s x n_s
    Eigen::SparseMatrix<double> G;      // pressure gradient, n_velocity x n_pressure
    Eigen::SparseMatrix<double> D;      // divergence, D = -G^T entrywise
    Eigen::SparseMatrix<double> Gs;     // scalar edge gradient (boundary edges kept), L = Gs^T Gs
    Eigen::SparseMatrix<double> Gbold;  // componentwise velocity gradient = diag(Gs, Gs)
};

namespace detail {

// 1D derivative factor of the pressure gradient. Column m of the cosine basis
// (the m-th Neumann mode, m = 0 constant) is mapped to the m-th Dirichlet sine
// mode scaled by sqrt of the m-th 1D Dirichlet FD eigenvalue. Constants are
// annihilated, and both products D1*D1^T and D1^T*D1 are dominated by the 1D
// Dirichlet Laplacian: the first because its eigenvalues are a subset, the
// second because sqrt-eigenvalue scaling keeps it below the Neumann Laplacian,
// which differs from the Dirichlet one by a nonnegative diagonal. That makes
// the assembled div-grad comparison |div v| <= |grad v| hold with a margin
// instead of only approximately.
inline Eigen::MatrixXd modal_derivative_1d(int n, double h) {
    const double pi = std::numbers::pi;
    Eigen::MatrixXd S(n, n - 1);  // unit Dirichlet sine modes 1..n-1
    Eigen::MatrixXd C(n, n - 1);  // unit Neumann cosine modes 1..n-1
    Eigen::VectorXd xi(n - 1);    // derivative strengths
    for (int m = 1; m < n; ++m) {
        for (int i = 0; i < n; ++i) {
            S(i, m - 1) = std::sqrt(2.0 / (n + 1)) * std::sin((i + 1) * m * pi / (n + 1));
            C(i, m - 1) = std::sqrt(2.0 / n) * std::cos(m * pi * (i + 0.5) / n);
        }
        xi(m - 1) = 2.0 / h * std::sin(m * pi / (2.0 * (n + 1)));
    }
    return S * xi.asDiagonal() * C.transpose();
}

}  // namespace detail

inline DiscreteOperators assemble_operators(const Grid& g) {
    DiscreteOperators ops;
    ops.grid = g;
    const int nx = g.n_x, ny = g.n_y, ns = g.n_scalar;
    const double ix2 = 1.0 / (g.h_x * g.h_x), iy2 = 1.0 / (g.h_y * g.h_y);

    // Scalar 5-point Dirichlet Laplacian.
    ops.L = Eigen::MatrixXd::Zero(ns, ns);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int r = g.index(i, j);
            ops.L(r, r) = 2.0 * ix2 + 2.0 * iy2;
            if (i > 0) ops.L(r, g.index(i - 1, j)) = -ix2;
            if (i < nx - 1) ops.L(r, g.index(i + 1, j)) = -ix2;
            if (j > 0) ops.L(r, g.index(i, j - 1)) = -iy2;
            if (j < ny - 1) ops.L(r, g.index(i, j + 1)) = -iy2;
        }

    // Pressure gradient: tensor products of the 1D modal derivative factors.
    const Eigen::MatrixXd dx = detail::modal_derivative_1d(nx, g.h_x);
    const Eigen::MatrixXd dy = detail::modal_derivative_1d(ny, g.h_y);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(ns) * (nx + ny));
    for (int j = 0; j < ny; ++j)  // x-derivative block: I_y (x) dx
        for (int c = 0; c < nx; ++c)
            for (int r = 0; r < nx; ++r)
                trip.emplace_back(j * nx + r, j * nx + c, dx(r, c));
    for (int jc = 0; jc < ny; ++jc)  // y-derivative block: dy (x) I_x
        for (int jr = 0; jr < ny; ++jr)
            for (int i = 0; i < nx; ++i)
                trip.emplace_back(ns + jr * nx + i, jc * nx + i, dy(jr, jc));
    ops.G.resize(g.n_velocity, g.n_pressure);
    ops.G.setFromTriplets(trip.begin(), trip.end());
    ops.G.makeCompressed();
    ops.D = (-ops.G.transpose()).eval();
    ops.D.makeCompressed();

    // Scalar edge gradient with boundary edges: (nx+1)*ny + nx*(ny+1) rows.
    const int m_edges = (nx + 1) * ny + nx * (ny + 1);
    trip.clear();
    trip.reserve(static_cast<std::size_t>(2 * m_edges));
    int row = 0;
    const double ihx = 1.0 / g.h_x, ihy = 1.0 / g.h_y;
    for (int j = 0; j < ny; ++j)
        for (int k = 0; k <= nx; ++k, ++row) {
            if (k < nx) trip.emplace_back(row, g.index(k, j), ihx);
            if (k > 0) trip.emplace_back(row, g.index(k - 1, j), -ihx);
        }
    for (int k = 0; k <= ny; ++k)
        for (int i = 0; i < nx; ++i, ++row) {
            if (k < ny) trip.emplace_back(row, g.index(i, k), ihy);
            if (k > 0) trip.emplace_back(row, g.index(i, k - 1), -ihy);
        }
    ops.Gs.resize(m_edges, ns);
    ops.Gs.setFromTriplets(trip.begin(), trip.end());
    ops.Gs.makeCompressed();

    trip.clear();
    for (int k = 0; k < ops.Gs.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(ops.Gs, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
            trip.emplace_back(static_cast<int>(it.row()) + m_edges,
                              static_cast<int>(it.col()) + ns, it.value());
        }
    ops.Gbold.resize(2 * m_edges, g.n_velocity);
    ops.Gbold.setFromTriplets(trip.begin(), trip.end());
    ops.Gbold.makeCompressed();
    return ops;
}

// Componentwise velocity Laplacian diag(L, L).
inline Eigen::MatrixXd velocity_laplacian(const DiscreteOperators& ops) {
    const int ns = ops.grid.n_scalar;
    Eigen::MatrixXd lv = Eigen::MatrixXd::Zero(2 * ns, 2 * ns);
    lv.topLeftCorner(ns, ns) = ops.L;
    lv.bottomRightCorner(ns, ns) = ops.L;
    return lv;
}

// Smallest eigenvalue of L with a residual certificate on the computed pair.
inline double dirichlet_lambda1(const DiscreteOperators& ops) {
    const EigResult eig = sym_eigensolve(ops.L, true);
    const double lambda1 = eig.values(0);
    const double norm = eig.values(eig.values.size() - 1);
    const Eigen::VectorXd p = eig.vectors.col(0);
    const double residual = (ops.L * p - lambda1 * p).norm();
    if (residual > 1e-10 * norm)
        throw ComputeError("dirichlet_lambda1: residual " + std::to_string(residual) +
                           " exceeds certificate budget");
    return lambda1;
}

}  // namespace stokespec
