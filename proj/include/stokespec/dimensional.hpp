// Dimensionless groups, the exponent-lattice certificate, and the stability diagram.
#pragma once
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "common.hpp"

namespace stokespec {

struct ScenarioScales {
    double nu = 1.0;
    double v_star = 1.0;
    double lambda1_omega = 1.0;  // 1 / length^2
    double tau = 1.0;            // time scale, free parameter
};

inline ScenarioScales make_scales(double nu, double v_star, double lambda1_omega, double tau) {
    ensure(nu > 0 && lambda1_omega > 0 && tau > 0, "ScenarioScales: nu, lambda1, tau must be positive");
    ensure(v_star >= 0, "ScenarioScales: v_star must be nonnegative");
    return {nu, v_star, lambda1_omega, tau};
}

struct DimensionlessSet {
    double re_lower = 0.0;  // v* / (nu sqrt(lambda1))
    double re_star = 0.0;   // 2 re_lower
    double st_star = 0.0;   // tau v* sqrt(lambda1)
    double product = 0.0;   // st_star * re_lower = tau v*^2 / nu
    double ratio = 0.0;     // st_star / re_lower = tau nu lambda1
    bool degenerate = false;  // v* = 0: ratio supplied by its algebraic identity
};

inline DimensionlessSet dimensionless_numbers(const ScenarioScales& s) {
    const double root = std::sqrt(s.lambda1_omega);
    DimensionlessSet d;
    d.re_lower = s.v_star / (s.nu * root);
    d.re_star = 2.0 * d.re_lower;
    d.st_star = s.tau * s.v_star * root;
    d.product = d.st_star * d.re_lower;
    d.degenerate = s.v_star == 0.0;
    d.ratio = d.degenerate ? s.tau * s.nu * s.lambda1_omega : d.st_star / d.re_lower;
    const double scale = std::max({1.0, std::abs(d.product), std::abs(d.ratio)});
    if (std::abs(d.product - s.tau * s.v_star * s.v_star / s.nu) > 1e-12 * scale ||
        std::abs(d.ratio - s.tau * s.nu * s.lambda1_omega) > 1e-12 * scale)
        throw ComputeError("dimensionless_numbers: algebraic identity check failed");
    return d;
}

// Exponent-lattice certificate: the two generator vectors are orthogonal, the
// sum/difference pair spans an index-2 sublattice, every generator satisfies
// both defining plane equations, and membership in the sublattice is exactly
// the parity rule m = n (mod 2).
struct LatticeReport {
    std::array<int, 4> r{}, s{}, c{}, d{};
    bool orthogonal_rs = false, orthogonal_cd = false;
    bool planes_ok = false;
    bool parity_ok = false;
    int checked_pairs = 0;
    bool pass = false;
};

inline LatticeReport lattice_certificate() {
    LatticeReport rep;
    rep.r = {0, 1, -1, 1};
    rep.s = {1, 1, 0, -1};
    for (int i = 0; i < 4; ++i) {
        rep.c[i] = rep.s[i] + rep.r[i];
        rep.d[i] = rep.s[i] - rep.r[i];
    }
    auto dot = [](const std::array<int, 4>& a, const std::array<int, 4>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    auto on_planes = [](const std::array<int, 4>& v) {
        return v[0] - v[1] - v[2] == 0 && v[1] + 2 * v[2] + v[3] == 0;
    };
    rep.orthogonal_rs = dot(rep.r, rep.s) == 0;
    rep.orthogonal_cd = dot(rep.c, rep.d) == 0;
    rep.planes_ok = on_planes(rep.r) && on_planes(rep.s) && on_planes(rep.c) && on_planes(rep.d);

    rep.parity_ok = true;
    for (int m = -10; m <= 10; ++m)
        for (int n = -10; n <= 10; ++n) {
            ++rep.checked_pairs;
            const bool parity = ((m - n) % 2) == 0;
            // Exhaustive membership search: any integer solution of
            // p c + q d = m s + n r has |p|, |q| <= |m| + |n|, so the window
            // below cannot miss one.
            bool member = false;
            for (int p = -20; p <= 20 && !member; ++p)
                for (int q = -20; q <= 20 && !member; ++q) {
                    bool hit = true;
                    for (int i = 0; i < 4; ++i)
                        hit = hit && (p * rep.c[i] + q * rep.d[i] == m * rep.s[i] + n * rep.r[i]);
                    member = hit;
                }
            rep.parity_ok = rep.parity_ok && (member == parity);
        }
    rep.pass = rep.orthogonal_rs && rep.orthogonal_cd && rep.planes_ok && rep.parity_ok;
    return rep;
}

// Triangle geometry behind the Strouhal-Reynolds-rotation angle picture: base
// interval endpoints -2 St Re and St/Re / 2, apex of height St over the
// origin, with the apex height the geometric mean of the endpoint distances.
struct DiagramData {
    double left = 0.0, right = 0.0, apex = 0.0;
    double two_theta = 0.0;       // angle at the right endpoint
    double two_theta_norm = 0.0;  // optional measured subspace angle, doubled
    bool has_theta_norm = false;
    double geo_mean_residual = 0.0;
    double angle_residual = 0.0;  // |tan(two_theta) - re_star|
};

inline DiagramData stability_diagram(const ScenarioScales& s, const double* theta_norm_opt = nullptr) {
    const DimensionlessSet d = dimensionless_numbers(s);
    DiagramData out;
    out.left = -2.0 * d.product;
    out.right = 0.5 * d.ratio;
    out.apex = d.st_star;
    out.two_theta = std::atan2(out.apex, out.right);
    if (theta_norm_opt) {
        out.two_theta_norm = 2.0 * *theta_norm_opt;
        out.has_theta_norm = true;
    }
    out.geo_mean_residual = std::abs(out.apex * out.apex - (2.0 * d.product) * (0.5 * d.ratio));
    out.angle_residual = std::abs(std::tan(out.two_theta) - d.re_star);
    const double scale = std::max({1.0, out.apex * out.apex, d.re_star});
    if (out.geo_mean_residual > 1e-12 * scale || out.angle_residual > 1e-12 * scale)
        throw ComputeError("stability_diagram: geometric identity check failed");
    return out;
}

// Fixed-convention rendering: 20 px per unit, origin at the diagram zero,
// y axis pointing up (flipped into SVG coordinates), 40 px margin.
inline std::string diagram_svg(const DiagramData& d) {
    const double px = 20.0, margin = 40.0;
    const double width = (d.right - d.left) * px + 2 * margin;
    const double height = std::max(d.apex * px, 1.0) + 2 * margin;
    auto xmap = [&](double x) { return margin + (x - d.left) * px; };
    auto ymap = [&](double y) { return height - margin - y * px; };
    char buf[512];
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(static_cast<int>(width + 0.5)) +
           "\" height=\"" + std::to_string(static_cast<int>(height + 0.5)) + "\">\n";
    auto line = [&](double x1, double y1, double x2, double y2, const char* stroke) {
        std::snprintf(buf, sizeof buf,
                      "  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" stroke-width=\"1.5\"/>\n",
                      x1, y1, x2, y2, stroke);
        svg += buf;
    };
    line(xmap(d.left), ymap(0), xmap(d.right), ymap(0), "black");       // base interval
    line(xmap(d.right), ymap(0), xmap(0), ymap(d.apex), "steelblue");   // hypotenuse to the apex
    line(xmap(0), ymap(0), xmap(0), ymap(d.apex), "gray");              // apex height
    for (double x : {d.left, 0.0, d.right}) {
        std::snprintf(buf, sizeof buf,
                      "  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"black\"/>\n", xmap(x), ymap(0));
        svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"steelblue\"/>\n", xmap(0), ymap(d.apex));
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.3f\" y=\"%.3f\" font-size=\"12\">left %.6g</text>\n",
                  xmap(d.left), ymap(0) + 16, d.left);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.3f\" y=\"%.3f\" font-size=\"12\">right %.6g</text>\n",
                  xmap(d.right) - 60, ymap(0) + 16, d.right);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.3f\" y=\"%.3f\" font-size=\"12\">apex %.6g, 2*theta %.6g rad</text>\n",
                  xmap(0) + 6, ymap(d.apex) - 6, d.apex, d.two_theta);
    svg += buf;
    svg += "</svg>\n";
    return svg;
}

}  // namespace stokespec
