#pragma once

// Independent test oracles. These deliberately avoid the solver paths they
// check: distances come from dense boundary sampling, eigenvalues from a
// finite-difference matrix instead of shooting, integrals from composite
// Simpson quadrature.

#include <cmath>
#include <functional>
#include <vector>

#include "harnack_lab/geometry.hpp"
#include "harnack_lab/linalg.hpp"

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Distance from p to the boundary of a graph domain, by dense sampling of
/// both boundary pieces (graph inside the ball, sphere above the graph) with
/// two nested refinement passes around each argmin.
inline double graph_boundary_distance_sampled(const harnack::DomainSpec& spec,
                                              const harnack::Point& p, int samples) {
    const double R = spec.radius;
    auto scan_graph = [&](double a, double b, int n, double& arg) {
        double best = 1e300;
        for (int i = 0; i <= n; ++i) {
            const double x = a + (b - a) * i / n;
            const double y = harnack::graph_height(spec, x);
            if (x * x + y * y > R * R) continue;
            const double d = std::hypot(p[0] - x, p[1] - y);
            if (d < best) {
                best = d;
                arg = x;
            }
        }
        return best;
    };
    auto scan_arc = [&](double a, double b, int n, double& arg) {
        double best = 1e300;
        for (int i = 0; i <= n; ++i) {
            const double phi = a + (b - a) * i / n;
            const double x = R * std::cos(phi), y = R * std::sin(phi);
            if (y < harnack::graph_height(spec, x)) continue;
            const double d = std::hypot(p[0] - x, p[1] - y);
            if (d < best) {
                best = d;
                arg = phi;
            }
        }
        return best;
    };
    double xg = 0.0, dg = scan_graph(-R, R, samples, xg);
    for (int pass = 0; pass < 2; ++pass) {
        const double w = 2.0 * R / samples * std::pow(2.0 / samples, pass);
        dg = std::min(dg, scan_graph(xg - 2 * w, xg + 2 * w, samples, xg));
    }
    double pa = 0.0, da = scan_arc(0.0, 2.0 * std::numbers::pi, samples, pa);
    for (int pass = 0; pass < 2; ++pass) {
        const double w = 2.0 * std::numbers::pi / samples * std::pow(2.0 / samples, pass);
        da = std::min(da, scan_arc(pa - 2 * w, pa + 2 * w, samples, pa));
    }
    return std::min(dg, da);
}

/// First Dirichlet eigenvalue of the spherical-cap cross-section by a
/// cell-centered finite-difference matrix (weight sin^(n-2)) and inverse
/// iteration, Richardson-extrapolated over N and N/2.
inline double cap_lambda1_fd(int dim, double theta_c, int nodes) {
    auto lambda_at = [&](int n) {
        const double d = theta_c / n;
        auto w = [&](double th) {
            return dim == 2 ? 1.0 : std::pow(std::sin(th), double(dim - 2));
        };
        harnack::linalg::Tridiag T;
        T.d.assign(std::size_t(n), 0.0);
        T.e.assign(std::size_t(n) - 1, 0.0);
        std::vector<double> wc(std::size_t(n), 0.0);
        for (int i = 0; i < n; ++i) wc[std::size_t(i)] = w((i + 0.5) * d);
        for (int i = 0; i < n; ++i) {
            const double wl = w(double(i) * d);
            const double wr = w((i + 1.0) * d);
            double diag = 0.0;
            if (i > 0 || dim == 2) diag += wl / (wc[std::size_t(i)] * d * d);
            if (i + 1 < n)
                diag += wr / (wc[std::size_t(i)] * d * d);
            else
                diag += 2.0 * wr / (wc[std::size_t(i)] * d * d);
            T.d[std::size_t(i)] = diag;
            if (i + 1 < n)
                T.e[std::size_t(i)] =
                    -wr / (d * d * std::sqrt(wc[std::size_t(i)] * wc[std::size_t(i) + 1]));
        }
        return harnack::linalg::tridiag_smallest_eigenpair(T).value;
    };
    const double coarse = lambda_at(nodes / 2);
    const double fine = lambda_at(nodes);
    return fine + (fine - coarse) / 3.0;  // second-order extrapolation
}

}  // namespace oracles
