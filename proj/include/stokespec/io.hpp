// Text serialization: coordinate-triplet operator format and CSV tables.
#pragma once
#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "blockop.hpp"
#include "common.hpp"
#include "grid.hpp"

namespace stokespec {

// Shortest exact decimal form of a double (round-trips bit for bit).
inline std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// One named matrix: a header line "matrix <name> <rows> <cols> <nnz>" followed
// by nnz lines "row col value" in column-major order, zero-based indices.
inline void write_matrix_text(std::ostream& out, const std::string& name,
                              const Eigen::SparseMatrix<double>& m) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << num17(it.value()) << '\n';
}

inline void write_matrix_text(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
    std::vector<std::string> lines;
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r)
            if (m(r, c) != 0.0)
                lines.push_back(std::to_string(r) + ' ' + std::to_string(c) + ' ' + num17(m(r, c)));
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << ' ' << lines.size() << '\n';
    for (const auto& l : lines) out << l << '\n';
}

struct NamedMatrix {
    std::string name;
    Eigen::MatrixXd dense;
};

inline NamedMatrix read_matrix_text(std::istream& in) {
    std::string keyword;
    NamedMatrix out;
    long rows = 0, cols = 0, nnz = 0;
    in >> keyword >> out.name >> rows >> cols >> nnz;
    if (!in || keyword != "matrix")
        throw ComputeError("read_matrix_text: malformed header");
    out.dense = Eigen::MatrixXd::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
        long r = 0, c = 0;
        double v = 0.0;
        in >> r >> c >> v;
        if (!in || r < 0 || r >= rows || c < 0 || c >= cols)
            throw ComputeError("read_matrix_text: malformed entry");
        out.dense(r, c) = v;
    }
    return out;
}

// Full operator set with a grid header for cross-implementation diffing.
inline void write_operators_text(std::ostream& out, const DiscreteOperators& ops) {
    out << "grid " << num17(ops.grid.rectangle.side_a) << ' ' << num17(ops.grid.rectangle.side_b)
        << ' ' << ops.grid.n_x << ' ' << ops.grid.n_y << '\n';
    write_matrix_text(out, "L", ops.L);
    write_matrix_text(out, "G", ops.G);
    write_matrix_text(out, "D", ops.D);
    write_matrix_text(out, "Gs", ops.Gs);
    write_matrix_text(out, "Gbold", ops.Gbold);
}

inline void spectrum_csv(std::ostream& out, const SpectrumResult& spec) {
    out << "index,eigenvalue,residual\n";
    for (int i = 0; i < spec.eigenvalues.size(); ++i)
        out << i << ',' << num17(spec.eigenvalues(i)) << ',' << num17(spec.residuals(i)) << '\n';
}

struct AngleSweepRow {
    double re_star_h = 0.0;
    double theta_norm = 0.0;
    double tan_two_theta = 0.0;
    double bound = 0.0;   // the admissible tangent value
    double margin = 0.0;  // bound - tan_two_theta
};

inline void angle_sweep_csv(std::ostream& out, const std::vector<AngleSweepRow>& rows) {
    out << "re_star,theta_norm,tan_two_theta,bound,margin\n";
    for (const auto& r : rows)
        out << num17(r.re_star_h) << ',' << num17(r.theta_norm) << ',' << num17(r.tan_two_theta)
            << ',' << num17(r.bound) << ',' << num17(r.margin) << '\n';
}

inline void qnr_cloud_csv(std::ostream& out,
                          const std::vector<std::pair<double, double>>& cloud,
                          const std::string& tag) {
    out << "eig_low,eig_high,tag\n";
    for (const auto& [lo, hi] : cloud)
        out << num17(lo) << ',' << num17(hi) << ',' << tag << '\n';
}

// Generic trend table: one labeled row per swept value.
inline void trend_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << num17(row[i]) << (i + 1 < row.size() ? ',' : '\n');
}

}  // namespace stokespec
